// Command-line front end: builds fields from flat key=value configs, runs
// envelopes / hulls / convexity checks, and exports fields, slices, point
// clouds and scheme reports.
//
// Exit codes: 0 success, 1 error (bad config, bad input), 2 finished with
// a flag (iteration cap hit, or a check found violations).

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "hqc/config.hpp"
#include "hqc/convexify.hpp"
#include "hqc/grid.hpp"
#include "hqc/hj.hpp"
#include "hqc/hull.hpp"
#include "hqc/region.hpp"

namespace fs = std::filesystem;
using namespace hqc;

namespace {

struct CommonOpts {
    std::string config_path;
    unsigned threads = 0;
    std::string out_dir = ".";
};

std::string joined(const CommonOpts& c, const std::string& name) {
    return (fs::path(c.out_dir) / name).string();
}

BoxDomain parse_domain(const RunConfig& cfg) {
    const auto lo = cfg.get_doubles("domain_lo");
    const auto hi = cfg.get_doubles("domain_hi");
    if (lo.size() != 3 || hi.size() != 3)
        throw std::runtime_error("config: domain_lo/domain_hi need 3 comma-separated values");
    return {{lo[0], lo[1], lo[2]}, {hi[0], hi[1], hi[2]}};
}

GridDims parse_dims(const RunConfig& cfg) {
    const auto d = cfg.get_doubles("dims");
    if (d.size() != 3) throw std::runtime_error("config: dims needs 3 comma-separated values");
    return {static_cast<int>(d[0]), static_cast<int>(d[1]), static_cast<int>(d[2])};
}

Generator parse_generator(const RunConfig& cfg) {
    const std::string g = cfg.get_string("generator");
    if (g == "gauge") return [](const Point& p) { return gauge(p); };
    if (g == "abs1mz2") return [](const Point& p) { return std::fabs(1.0 - p.z * p.z); };
    if (g == "linear_x") return [](const Point& p) { return p.x; };
    if (g == "neg_x2") return [](const Point& p) { return -p.x * p.x; };
    if (g == "const") {
        const double v = cfg.get_double("generator_value");
        return [v](const Point&) { return v; };
    }
    throw std::runtime_error("config: unknown generator \"" + g +
                             "\" (gauge|abs1mz2|linear_x|neg_x2|const)");
}

Region parse_region_kind(const RunConfig& cfg, const std::string& kind_key,
                         const std::string& params_key, bool open) {
    const std::string kind = cfg.get_string(kind_key);
    const auto prm = cfg.get_doubles(params_key);
    if (kind == "gauge_ball") {
        if (prm.size() != 4)
            throw std::runtime_error("config: " + params_key + " wants cx,cy,cz,r");
        return Region::gauge_ball({prm[0], prm[1], prm[2]}, prm[3], open);
    }
    if (kind == "disk_stack") {
        if (prm.size() != 4)
            throw std::runtime_error("config: " + params_key + " wants r,R,t,delta");
        return Region::disk_stack(prm[0], prm[1], prm[2], prm[3], open);
    }
    if (kind == "box") {
        if (prm.size() != 6)
            throw std::runtime_error("config: " + params_key + " wants lox,loy,loz,hix,hiy,hiz");
        return Region::box({prm[0], prm[1], prm[2]}, {prm[3], prm[4], prm[5]}, open);
    }
    throw std::runtime_error("config: unknown region kind \"" + kind +
                             "\" (gauge_ball|disk_stack|box|neighborhood)");
}

Region parse_region(const RunConfig& cfg, const std::string& prefix = "region") {
    const bool open = !cfg.get_bool(prefix + "_closed", false);
    const std::string kind = cfg.get_string(prefix);
    if (kind == "neighborhood") {
        Region inner = parse_region_kind(cfg, prefix + "_inner", prefix + "_inner_params", open);
        return Region::left_neighborhood(std::move(inner), cfg.get_double(prefix + "_eps"));
    }
    return parse_region_kind(cfg, prefix, prefix + "_params", open);
}

ScanParams parse_scan(const RunConfig& cfg, unsigned threads) {
    ScanParams s;
    s.n_theta = static_cast<int>(cfg.get_int("n_theta", 32));
    s.n_s = static_cast<int>(cfg.get_int("n_s", 32));
    s.tol_violation = cfg.get_double("tol_violation", -1.0);
    s.tol_plane = cfg.get_double("tol_plane", 1e-9);
    s.threads = threads;
    return s;
}

HamiltonianParams parse_hp(const RunConfig& cfg, unsigned threads) {
    HamiltonianParams hp;
    hp.n_theta = static_cast<int>(cfg.get_int("h_n_theta", 32));
    hp.n_rho = static_cast<int>(cfg.get_int("n_rho", 24));
    hp.eps_strict = cfg.get_double("eps_strict", -1.0);
    hp.threads = threads;
    return hp;
}

SolveParams parse_sp(const RunConfig& cfg, double K, unsigned threads) {
    SolveParams sp;
    sp.omega_relax = cfg.get_double("omega", 0.8);
    sp.tol_inner = cfg.get_double("tol_inner", 2e-5);
    sp.max_inner = static_cast<int>(cfg.get_int("max_inner", 400));
    sp.tol_outer = cfg.get_double("tol_outer", 2e-3);
    sp.max_outer = static_cast<int>(cfg.get_int("max_outer", 60));
    sp.boundary_k = K;
    sp.jacobi = cfg.get_bool("jacobi", false);
    sp.threads = threads;
    return sp;
}

const std::set<std::string> kSolverKeys = {
    "n_theta", "n_s",       "tol_violation", "tol_plane", "tol_fix",
    "max_iter", "h_n_theta", "n_rho",        "eps_strict", "omega",
    "tol_inner", "max_inner", "tol_outer",   "max_outer", "jacobi",
    "threads",  "seed"};

std::set<std::string> with_solver_keys(std::set<std::string> opt) {
    opt.insert(kSolverKeys.begin(), kSolverKeys.end());
    return opt;
}

std::vector<Point> read_cloud_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open point cloud " + path);
    std::string line;
    std::getline(is, line);  // header
    std::vector<Point> out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        Point p;
        if (std::sscanf(line.c_str(), "%lg,%lg,%lg", &p.x, &p.y, &p.z) != 3)
            throw std::runtime_error("bad row in point cloud " + path + ": " + line);
        out.push_back(p);
    }
    return out;
}

int cmd_envelope(const CommonOpts& common) {
    RunConfig cfg = RunConfig::parse_file(common.config_path);
    cfg.validate({"domain_lo", "domain_hi", "dims", "K", "generator", "method"},
                 with_solver_keys({"generator_value", "cap", "cap_R", "cap_L", "out_field",
                                   "out_report", "slice_axis", "slice_coord", "out_slice"}));
    const BoxDomain dom = parse_domain(cfg);
    const GridDims dims = parse_dims(cfg);
    const double K = cfg.get_double("K");
    const std::string method = cfg.get_string("method");
    if (method != "direct" && method != "pde")
        throw std::runtime_error("config: method must be direct or pde");
    const Generator gen = parse_generator(cfg);

    GridField f = cfg.get_bool("cap", true)
                      ? cap_boundary_compatible(dom, dims, gen, K,
                                                cfg.get_double("cap_R", 0.0) > 0.0
                                                    ? cfg.get_double("cap_R")
                                                    : 0.8 * std::min({-dom.lo.x, dom.hi.x,
                                                                      -dom.lo.y, dom.hi.y}),
                                                cfg.get_double("cap_L", -1.0))
                      : build_field(dom, dims, gen, K);

    GridField result = f;
    SchemeReport report;
    bool converged = true;
    if (method == "direct") {
        TIterateResult it = t_iterate(f, parse_scan(cfg, common.threads),
                                      static_cast<int>(cfg.get_int("max_iter", 12)),
                                      cfg.get_double("tol_fix", 1e-4));
        result = std::move(it.field);
        report = std::move(it.report);
        converged = it.converged;
    } else {
        EnvelopeResult res = pde_envelope(f, parse_hp(cfg, common.threads),
                                          parse_sp(cfg, K, common.threads));
        result = std::move(res.field);
        report = std::move(res.report);
        converged = res.converged;
    }

    save_field(result, joined(common, cfg.get_string("out_field", "envelope.hhfield")));
    write_report_csv(report, joined(common, cfg.get_string("out_report", "report.csv")));
    if (cfg.has("slice_axis")) {
        SliceSpec spec{cfg.get_string("slice_axis")[0], cfg.get_double("slice_coord", 0.0)};
        write_slice_csv(result, spec, joined(common, cfg.get_string("out_slice", "slice.csv")));
    }
    if (!converged) {
        std::cerr << "envelope: iteration cap reached before the fixed-point tolerance\n";
        return 2;
    }
    return 0;
}

int cmd_hull(const CommonOpts& common) {
    RunConfig cfg = RunConfig::parse_file(common.config_path);
    cfg.validate({"domain_lo", "domain_hi", "dims", "K", "method", "region"},
                 with_solver_keys({"region_params", "region_closed", "region_eps",
                                   "region_inner", "region_inner_params", "out_field",
                                   "out_nodes", "out_report"}));
    const Region e = parse_region(cfg);
    HullParams hp;
    hp.method = cfg.get_string("method");
    hp.scan = parse_scan(cfg, common.threads);
    hp.hp = parse_hp(cfg, common.threads);
    hp.sp = parse_sp(cfg, cfg.get_double("K"), common.threads);
    hp.max_iter = static_cast<int>(cfg.get_int("max_iter", 12));
    hp.tol_fix = cfg.get_double("tol_fix", 1e-4);
    hp.threads = common.threads;

    HullResult hull = hull_compute(e, parse_domain(cfg), cfg.get_double("K"), hp,
                                   parse_dims(cfg));
    save_field(hull.envelope, joined(common, cfg.get_string("out_field", "hull_envelope.hhfield")));
    write_cloud_csv(hull.hull_nodes, joined(common, cfg.get_string("out_nodes", "hull_nodes.csv")));
    write_report_csv(hull.report, joined(common, cfg.get_string("out_report", "hull_report.csv")));
    return hull.converged ? 0 : 2;
}

int cmd_check_hconvex(const CommonOpts& common) {
    RunConfig cfg = RunConfig::parse_file(common.config_path);
    cfg.validate({"region"},
                 with_solver_keys({"region_params", "region_closed", "region_eps",
                                   "region_inner", "region_inner_params", "samples",
                                   "out_witness"}));
    const Region e = parse_region(cfg);
    const auto ws = check_set_hconvex(e, parse_scan(cfg, common.threads),
                                      static_cast<std::size_t>(cfg.get_int("samples", 2000)),
                                      static_cast<std::uint64_t>(cfg.get_int("seed", 12345)));
    write_witness_csv(ws, joined(common, cfg.get_string("out_witness", "witnesses.csv")));
    std::cout << "violations: " << ws.size() << "\n";
    return ws.empty() ? 0 : 2;
}

int cmd_check_hquasiconvex(const CommonOpts& common) {
    RunConfig cfg = RunConfig::parse_file(common.config_path);
    cfg.validate({"field"}, with_solver_keys({"out_witness"}));
    GridField f = load_field(cfg.get_string("field"));
    const auto ws = check_field_hquasiconvex(f, parse_scan(cfg, common.threads));
    write_witness_csv(ws, joined(common, cfg.get_string("out_witness", "witnesses.csv")));
    std::cout << "violations: " << ws.size() << "\n";
    return ws.empty() ? 0 : 2;
}

int cmd_supconv(const CommonOpts& common) {
    RunConfig cfg = RunConfig::parse_file(common.config_path);
    cfg.validate({"field", "delta"}, with_solver_keys({"out_field"}));
    GridField f = load_field(cfg.get_string("field"));
    bool narrow = false;
    GridField out = sup_convolution(f, cfg.get_double("delta"), common.threads, &narrow);
    if (narrow)
        std::cerr << "supconv: delta is below the grid spacing; the ball may only contain "
                     "the node itself\n";
    save_field(out, joined(common, cfg.get_string("out_field", "supconv.hhfield")));
    return 0;
}

int cmd_distance(const CommonOpts& common) {
    RunConfig cfg = RunConfig::parse_file(common.config_path);
    const std::string mode = cfg.get_string("mode");
    if (mode == "hausdorff") {
        cfg.validate({"mode", "cloud_a", "cloud_b"}, with_solver_keys({"metric", "out"}));
        const auto a = read_cloud_csv(cfg.get_string("cloud_a"));
        const auto b = read_cloud_csv(cfg.get_string("cloud_b"));
        const Metric m = cfg.get_string("metric", "left") == "right" ? Metric::right
                                                                     : Metric::left;
        const double d = hausdorff(a, b, m, common.threads);
        std::cout << "hausdorff " << d << "\n";
        if (cfg.has("out")) {
            std::ofstream os(joined(common, cfg.get_string("out")));
            os << d << "\n";
        }
        return 0;
    }
    if (mode == "margins") {
        cfg.validate({"mode", "domain_lo", "domain_hi", "dims", "K", "method", "d_region",
                      "e_region"},
                     with_solver_keys({"d_region_params", "d_region_closed", "d_region_eps",
                                       "d_region_inner", "d_region_inner_params",
                                       "e_region_params", "e_region_closed", "e_region_eps",
                                       "e_region_inner", "e_region_inner_params", "out"}));
        HullParams hp;
        hp.method = cfg.get_string("method");
        hp.scan = parse_scan(cfg, common.threads);
        hp.hp = parse_hp(cfg, common.threads);
        hp.sp = parse_sp(cfg, cfg.get_double("K"), common.threads);
        hp.max_iter = static_cast<int>(cfg.get_int("max_iter", 12));
        hp.tol_fix = cfg.get_double("tol_fix", 1e-4);
        hp.threads = common.threads;
        const auto [lhs, rhs] =
            inclusion_margins(parse_region(cfg, "d_region"), parse_region(cfg, "e_region"),
                              parse_domain(cfg), cfg.get_double("K"), hp, parse_dims(cfg));
        std::cout << "lhs " << lhs << " rhs " << rhs << "\n";
        if (cfg.has("out")) {
            std::ofstream os(joined(common, cfg.get_string("out")));
            os << lhs << "," << rhs << "\n";
        }
        return 0;
    }
    throw std::runtime_error("config: mode must be hausdorff or margins");
}

int cmd_slice(const CommonOpts& common) {
    RunConfig cfg = RunConfig::parse_file(common.config_path);
    cfg.validate({"field", "slice_axis", "slice_coord"}, with_solver_keys({"out_slice"}));
    GridField f = load_field(cfg.get_string("field"));
    SliceSpec spec{cfg.get_string("slice_axis")[0], cfg.get_double("slice_coord")};
    write_slice_csv(f, spec, joined(common, cfg.get_string("out_slice", "slice.csv")));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"h-quasiconvex envelopes and h-convex hulls on the Heisenberg group"};
    app.require_subcommand(1);

    CommonOpts common;
    int rc = 1;
    auto add_common = [&common](CLI::App* sub) {
        sub->add_option("--config", common.config_path, "key=value run configuration")
            ->required();
        sub->add_option("--threads", common.threads, "worker threads (0 = auto)");
        sub->add_option("--out", common.out_dir, "output directory");
    };

    struct Sub {
        const char* name;
        const char* help;
        int (*fn)(const CommonOpts&);
    };
    const Sub subs[] = {
        {"envelope", "compute an h-quasiconvex envelope", cmd_envelope},
        {"hull", "compute an h-convex hull via the level-set method", cmd_hull},
        {"check-hconvex", "falsify h-convexity of a set", cmd_check_hconvex},
        {"check-hquasiconvex", "falsify h-quasiconvexity of a field", cmd_check_hquasiconvex},
        {"supconv", "right-metric sup-convolution of a field", cmd_supconv},
        {"distance", "hausdorff distance or inclusion margins", cmd_distance},
        {"slice", "export one axis-aligned slice as CSV", cmd_slice},
    };
    std::vector<std::pair<CLI::App*, const Sub*>> wired;
    for (const Sub& s : subs) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        add_common(sub);
        wired.emplace_back(sub, &s);
    }

    CLI11_PARSE(app, argc, argv);

    for (auto& [sub, s] : wired) {
        if (!sub->parsed()) continue;
        try {
            rc = s->fn(common);
        } catch (const std::exception& ex) {
            std::cerr << "error: " << ex.what() << "\n";
            rc = 1;
        }
        break;
    }
    return rc;
}
