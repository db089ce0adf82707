#include "hqc/hull.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "hqc/parallel.hpp"

namespace hqc {

namespace {

DistanceCloud make_boundary_cloud(const Region& e, const GridField& grid_ref) {
    const double spacing = 0.5 * grid_ref.min_spacing();
    auto pts = e.boundary_cloud(spacing);
    return DistanceCloud(std::move(pts), 2.0 * spacing);
}

}  // namespace

GridField psi_field(const Region& e, const BoxDomain& omega, const GridDims& dims,
                    unsigned threads) {
    GridField f(omega, dims, 0.0);
    const DistanceCloud cloud = make_boundary_cloud(e, f);
    auto* v = f.values().data();
    parallel_for(f.size(), threads, [&](std::size_t idx) {
        const Point p = f.node(idx);
        v[idx] = e.contains(p) ? -cloud.min_dist(p, Metric::right) : 0.0;
    });
    return f;
}

GridField defining_function(const Region& e, const BoxDomain& omega, double K,
                            const GridDims& dims, unsigned threads) {
    if (K <= 0.0) throw std::invalid_argument("defining_function: K must be positive");
    const BoxDomain bb = e.bounding_box();
    if (!omega.contains(bb.lo) || !omega.contains(bb.hi))
        throw std::invalid_argument("defining_function: E does not fit inside Omega");

    GridField f(omega, dims, K);
    const DistanceCloud cloud = make_boundary_cloud(e, f);
    auto* v = f.values().data();
    parallel_for(f.size(), threads, [&](std::size_t idx) {
        const Point p = f.node(idx);
        const double d = cloud.min_dist(p, Metric::right, 1.25 * K);
        v[idx] = std::min(K, e.contains(p) ? -d : d);
    });

    // Clearance: the boundary layer must already sit on the K plateau,
    // otherwise the coercive setting fails and the caller needs a larger
    // Omega (or smaller K).
    double worst = K;
    const int nx = f.nx(), ny = f.ny(), nz = f.nz();
    for (int k = 0; k < nz; ++k)
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                if (i != 0 && j != 0 && k != 0 && i != nx - 1 && j != ny - 1 && k != nz - 1)
                    continue;
                worst = std::min(worst, f(i, j, k));
            }
    if (worst < K) {
        char msg[200];
        std::snprintf(msg, sizeof(msg),
                      "defining_function: boundary clearance violated; min boundary "
                      "distance %.6g < K = %.6g (grow Omega or shrink K)",
                      worst, K);
        throw std::invalid_argument(msg);
    }
    return f;
}

HullResult hull_compute(const Region& e, const BoxDomain& omega, double K,
                        const HullParams& params, const GridDims& dims) {
    HullResult out;
    out.k = K;
    out.method = params.method;
    out.defining = defining_function(e, omega, K, dims, params.threads);

    if (params.method == "direct") {
        ScanParams scan = params.scan;
        scan.threads = params.threads ? params.threads : scan.threads;
        TIterateResult it = t_iterate(out.defining, scan, params.max_iter, params.tol_fix);
        out.envelope = std::move(it.field);
        out.report = std::move(it.report);
        out.converged = it.converged;
    } else if (params.method == "pde") {
        SolveParams sp = params.sp;
        sp.boundary_k = K;
        sp.threads = params.threads ? params.threads : sp.threads;
        HamiltonianParams hp = params.hp;
        hp.threads = sp.threads;
        EnvelopeResult res = pde_envelope(out.defining, hp, sp);
        out.envelope = std::move(res.field);
        out.report = std::move(res.report);
        out.converged = res.converged;
    } else {
        throw std::invalid_argument("hull_compute: method must be direct or pde");
    }

    out.hull_node_indices = sublevel_node_indices(out.envelope, 0.0, e.open());
    out.hull_nodes.reserve(out.hull_node_indices.size());
    for (std::size_t idx : out.hull_node_indices)
        out.hull_nodes.push_back(out.envelope.node(idx));
    return out;
}

GridField sup_convolution(const GridField& u, double delta, unsigned threads,
                          bool* narrow) {
    if (delta <= 0.0) throw std::invalid_argument("sup_convolution: delta must be positive");
    if (narrow) *narrow = delta < u.max_spacing();
    GridField out = u;
    auto* v = out.values().data();
    const int nx = u.nx(), ny = u.ny(), nz = u.nz();
    parallel_for(u.size(), threads, [&](std::size_t idx) {
        const int i = static_cast<int>(idx % nx);
        const int j = static_cast<int>((idx / nx) % ny);
        const int k = static_cast<int>(idx / (static_cast<std::size_t>(nx) * ny));
        const Point p = u.node(i, j, k);
        const int di = static_cast<int>(delta / u.hx()) + 1;
        const int dj = static_cast<int>(delta / u.hy()) + 1;
        const double zslack =
            delta * delta / 4.0 + 0.5 * delta * (std::fabs(p.x) + std::fabs(p.y));
        const int dk = static_cast<int>(zslack / u.hz()) + 1;
        double best = u.values()[idx];
        for (int kk = std::max(0, k - dk); kk <= std::min(nz - 1, k + dk); ++kk)
            for (int jj = std::max(0, j - dj); jj <= std::min(ny - 1, j + dj); ++jj)
                for (int ii = std::max(0, i - di); ii <= std::min(nx - 1, i + di); ++ii) {
                    const double val = u(ii, jj, kk);
                    if (val <= best) continue;
                    if (dist_right(p, u.node(ii, jj, kk)) <= delta) best = val;
                }
        v[idx] = best;
    });
    return out;
}

namespace {

// min over a of (min over cloud b of dist); the running best feeds back as
// a stop bound for the ring search.
double min_cloud_gap(const std::vector<Point>& a, const DistanceCloud& b, Metric m) {
    double best = 1e300;
    for (const Point& p : a) {
        const double d = b.min_dist(p, m, best);
        if (d < best) best = d;
    }
    return best;
}

}  // namespace

std::pair<double, double> inclusion_margins(const Region& d, const Region& e,
                                            const BoxDomain& omega, double K,
                                            const HullParams& params,
                                            const GridDims& dims) {
    // D ⊂ E, verified by sampling.
    for (const Point& p : d.sample_interior(2000, 777))
        if (!e.contains(p))
            throw std::invalid_argument("inclusion_margins: D is not contained in E");

    HullResult hd = hull_compute(d, omega, K, params, dims);
    HullResult he = hull_compute(e, omega, K, params, dims);
    const GridField& ref = hd.envelope;

    std::vector<Point> d_nodes;
    std::vector<Point> ec_nodes;
    std::vector<Point> hull_ec_nodes;
    std::vector<char> in_hull_e(ref.size(), 0);
    for (std::size_t idx : he.hull_node_indices) in_hull_e[idx] = 1;
    for (std::size_t idx = 0; idx < ref.size(); ++idx) {
        const Point p = ref.node(idx);
        if (d.contains(p)) d_nodes.push_back(p);
        if (!e.contains(p)) ec_nodes.push_back(p);
        if (!in_hull_e[idx]) hull_ec_nodes.push_back(p);
    }
    if (d_nodes.empty() || ec_nodes.empty())
        throw std::runtime_error("inclusion_margins: empty node cloud; refine the grid");

    const double bin = 2.0 * ref.min_spacing();
    const double rhs = min_cloud_gap(d_nodes, DistanceCloud(ec_nodes, bin), Metric::right);
    std::vector<Point> hull_d_nodes = hd.hull_nodes;
    const double lhs =
        min_cloud_gap(hull_d_nodes, DistanceCloud(hull_ec_nodes, bin), Metric::right);
    return {lhs, rhs};
}

double hausdorff(const std::vector<Point>& a, const std::vector<Point>& b, Metric metric,
                 unsigned threads) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("hausdorff: empty point set");
    auto side = [&](const std::vector<Point>& from, const std::vector<Point>& to) {
        // bin size heuristic: aim for a few dozen points per bin
        double span = 1.0;
        if (!to.empty()) {
            double xmin = to[0].x, xmax = to[0].x, ymin = to[0].y, ymax = to[0].y;
            for (const Point& p : to) {
                xmin = std::min(xmin, p.x);
                xmax = std::max(xmax, p.x);
                ymin = std::min(ymin, p.y);
                ymax = std::max(ymax, p.y);
            }
            span = std::max(1e-6, std::max(xmax - xmin, ymax - ymin));
        }
        const DistanceCloud cloud(to, span / 40.0);
        std::vector<double> worst(resolve_threads(threads), 0.0);
        const std::size_t chunk = (from.size() + worst.size() - 1) / worst.size();
        parallel_for(worst.size(), static_cast<unsigned>(worst.size()),
                     [&](std::size_t tid) {
                         double m = 0.0;
                         const std::size_t lo = tid * chunk;
                         const std::size_t hi = std::min(from.size(), lo + chunk);
                         for (std::size_t i = lo; i < hi; ++i)
                             m = std::max(m, cloud.min_dist(from[i], metric));
                         worst[tid] = m;
                     });
        double m = 0.0;
        for (double v : worst) m = std::max(m, v);
        return m;
    };
    return std::max(side(a, b), side(b, a));
}

StarProbe star_stability_probe(const Region& e, const std::vector<double>& lambdas,
                               const std::vector<double>& eps_list,
                               const BoxDomain& omega, double K,
                               const HullParams& params, const GridDims& dims) {
    StarProbe probe;
    probe.connected = e.lattice_connected();

    // boundary cloud of E for clearance estimates
    const BoxDomain bb = e.bounding_box();
    const double scale = std::max({bb.hi.x - bb.lo.x, bb.hi.y - bb.lo.y, bb.hi.z - bb.lo.z});
    DistanceCloud boundary(e.boundary_cloud(scale / 80.0), scale / 40.0);

    bool all_ok = true;
    for (double lam : lambdas) {
        StarProbe::LambdaRow row;
        row.lambda = lam;
        const Region el = e.dilated(lam);
        std::vector<Point> pts = el.sample_interior(1500, 4242);
        auto extra = el.boundary_cloud(scale / 40.0);
        pts.insert(pts.end(), extra.begin(), extra.end());
        row.subset_ok = true;
        row.clearance = 1e300;
        for (const Point& p : pts) {
            if (!e.contains(p)) {
                row.subset_ok = false;
                row.clearance = 0.0;
                break;
            }
            row.clearance = std::min(row.clearance, boundary.min_dist(p, Metric::left));
        }
        if (!row.subset_ok || row.clearance <= 0.0) all_ok = false;
        probe.lambdas.push_back(row);
    }
    probe.star_shaped = probe.connected && all_ok && !lambdas.empty();

    if (!eps_list.empty()) {
        HullResult base = hull_compute(e, omega, K, params, dims);
        for (double eps : eps_list) {
            Region neigh = Region::left_neighborhood(e, eps);
            HullResult pert = hull_compute(neigh, omega, K, params, dims);
            StarProbe::EpsRow row;
            row.eps = eps;
            row.hull_gap = hausdorff(base.hull_nodes, pert.hull_nodes, Metric::left,
                                     params.threads);
            probe.eps_rows.push_back(row);
        }
    }
    return probe;
}

std::vector<std::size_t> member_node_indices(const Region& e, const GridField& ref) {
    std::vector<std::size_t> out;
    for (std::size_t idx = 0; idx < ref.size(); ++idx)
        if (e.contains(ref.node(idx))) out.push_back(idx);
    return out;
}

void write_cloud_csv(const std::vector<Point>& pts, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_cloud_csv: cannot open " + path);
    os << "x,y,z\n";
    char buf[128];
    for (const Point& p : pts) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", p.x, p.y, p.z);
        os << buf;
    }
}

void write_probe_csv(const StarProbe& probe, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_probe_csv: cannot open " + path);
    os << "epsilon,hausdorff_gap\n";
    char buf[96];
    for (const auto& r : probe.eps_rows) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", r.eps, r.hull_gap);
        os << buf;
    }
}

}  // namespace hqc
