#include "hqc/hj.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "hqc/parallel.hpp"

namespace hqc {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kMaxTheta = 128;
constexpr int kMaxRho = 64;

double value_range(const GridField& f) {
    double lo = f.values()[0], hi = lo;
    for (double v : f.values()) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return hi - lo;
}

double resolve_eps(const GridField& f, const HamiltonianParams& p) {
    return p.eps_strict >= 0.0 ? p.eps_strict : 1e-9 * std::max(1e-6, value_range(f));
}

inline double ray_exit(const BoxDomain& d, const Point& p, double dx, double dy,
                       double dz) {
    double s = 1e300;
    if (dx > 0.0)
        s = std::min(s, (d.hi.x - p.x) / dx);
    else if (dx < 0.0)
        s = std::min(s, (d.lo.x - p.x) / dx);
    if (dy > 0.0)
        s = std::min(s, (d.hi.y - p.y) / dy);
    else if (dy < 0.0)
        s = std::min(s, (d.lo.y - p.y) / dy);
    if (dz > 0.0)
        s = std::min(s, (d.hi.z - p.z) / dz);
    else if (dz < 0.0)
        s = std::min(s, (d.lo.z - p.z) / dz);
    return std::max(0.0, s);
}

struct HTables {
    std::vector<double> ct, st;
    explicit HTables(int n) {
        ct.resize(n);
        st.resize(n);
        for (int k = 0; k < n; ++k) {
            const double th = 2.0 * kPi * k / n;
            ct[k] = std::cos(th);
            st[k] = std::sin(th);
        }
    }
};

// One full polar scan of the horizontal plane H_p within the domain:
// field values at radii rho_j = L * j / n_rho along every angle with
// positive gradient alignment. All Hamiltonian queries at p reduce to
// arithmetic over this table plus a few boundary-sharpening evaluations.
struct PlaneScan {
    int n = 0;                 // stored rays
    int n_rho = 0;
    double c[kMaxTheta];       // <grad, direction>
    double ct[kMaxTheta], st[kMaxTheta], zr[kMaxTheta];
    double len[kMaxTheta];     // exit radius
    double val[kMaxTheta * kMaxRho];

    const GridField* u = nullptr;
    Point p{};

    double eval_at(int ray, double rho) const {
        return u->eval({p.x + rho * ct[ray], p.y + rho * st[ray],
                        p.z + rho * zr[ray]});
    }
};

void scan_plane(const GridField& u, const Point& p, double g1, double g2,
                const HTables& tab, int n_rho, PlaneScan& ps) {
    ps.n = 0;
    ps.n_rho = n_rho;
    ps.u = &u;
    ps.p = p;
    const int n_theta = static_cast<int>(tab.ct.size());
    for (int k = 0; k < n_theta; ++k) {
        const double c = g1 * tab.ct[k] + g2 * tab.st[k];
        if (c <= 0.0) continue;
        const int r = ps.n;
        ps.c[r] = c;
        ps.ct[r] = tab.ct[k];
        ps.st[r] = tab.st[k];
        ps.zr[r] = horiz_line_zrate(p, tab.ct[k], tab.st[k]);
        const double L = ray_exit(u.domain(), p, tab.ct[k], tab.st[k], ps.zr[r]);
        ps.len[r] = L;
        double* row = ps.val + static_cast<std::size_t>(r) * n_rho;
        const double drho = L / n_rho;
        for (int j = 1; j <= n_rho; ++j)
            row[j - 1] = ps.eval_at(r, j * drho);
        ++ps.n;
    }
}

// Sharpen the admissible boundary of one ray: the largest rho in
// [rho_lo, rho_hi] with u < level - eps (u(rho_lo) is known admissible).
double refine_boundary(const PlaneScan& ps, int ray, double rho_lo, double rho_hi,
                       double level, double eps, bool nonstrict) {
    double lo = rho_lo, hi = rho_hi;
    for (int it = 0; it < 6 && hi - lo > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double v = ps.eval_at(ray, mid);
        const bool adm = nonstrict ? v <= level + eps : v < level - eps;
        if (adm)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

// sup over sampled sublevel directions of <grad, (p^-1 xi)_h> at a fixed
// level, boundary-refined, clipped at the degenerate limit 0.
double plane_H(const PlaneScan& ps, double level, double eps, bool nonstrict) {
    double best = 0.0;
    const int n_rho = ps.n_rho;
    // coarse pass
    int coarse_j[kMaxTheta];
    for (int r = 0; r < ps.n; ++r) {
        coarse_j[r] = 0;
        const double drho = ps.len[r] / n_rho;
        const double* row = ps.val + static_cast<std::size_t>(r) * n_rho;
        for (int j = n_rho; j >= 1; --j) {
            if (ps.c[r] * j * drho <= best) break;
            const double v = row[j - 1];
            const bool adm = nonstrict ? v <= level + eps : v < level - eps;
            if (adm) {
                coarse_j[r] = j;
                best = ps.c[r] * j * drho;
                break;
            }
        }
    }
    // refinement pass: a ray can only beat `best` within one radial step of
    // its coarse boundary, so refine exactly the rays whose bound allows it
    for (int r = 0; r < ps.n; ++r) {
        const double drho = ps.len[r] / n_rho;
        const int j = coarse_j[r];
        if (j >= n_rho) continue;
        const double rho_lo = j * drho;  // j = 0: boundary may sit below the first sample
        const double bound = ps.c[r] * std::min(ps.len[r], rho_lo + drho);
        if (bound <= best) continue;
        if (j == 0) {
            // no admissible coarse sample; check whether one appears below drho
            const double v = ps.eval_at(r, 0.5 * drho);
            const bool adm = nonstrict ? v <= level + eps : v < level - eps;
            if (!adm) continue;
            const double rho = refine_boundary(ps, r, 0.5 * drho, drho, level, eps, nonstrict);
            best = std::max(best, ps.c[r] * rho);
        } else {
            const double rho =
                refine_boundary(ps, r, rho_lo, std::min(ps.len[r], rho_lo + drho),
                                level, eps, nonstrict);
            best = std::max(best, ps.c[r] * rho);
        }
    }
    return best;
}

// The unique root of level + H(level) = g over the scanned plane:
// H(level) is nondecreasing in level, and over the coarse samples the
// feasibility condition "level + H(level) <= g" is equivalent to
//   level <= max(val_ij + eps, g - c_i rho_ij)   for every sample,
// so the root is the minimum of those caps. A few boundary-refinement
// rounds sharpen the binding constraint.
double level_root(const PlaneScan& ps, double g, double eps, double floor_val) {
    const int n_rho = ps.n_rho;
    double root = g;
    for (int r = 0; r < ps.n; ++r) {
        const double drho = ps.len[r] / n_rho;
        const double* row = ps.val + static_cast<std::size_t>(r) * n_rho;
        for (int j = 1; j <= n_rho; ++j) {
            const double cap = std::max(row[j - 1] + eps, g - ps.c[r] * j * drho);
            if (cap < root) root = cap;
        }
    }
    root = std::max(root, floor_val);
    // sharpen: at the coarse root, refine each ray boundary that could
    // still lower the cap, then retake the minimum
    for (int round = 0; round < 3; ++round) {
        double sharpened = g;
        for (int r = 0; r < ps.n; ++r) {
            const double drho = ps.len[r] / n_rho;
            const double* row = ps.val + static_cast<std::size_t>(r) * n_rho;
            int j_adm = 0;
            for (int j = n_rho; j >= 1; --j) {
                if (row[j - 1] < root - eps) {
                    j_adm = j;
                    break;
                }
            }
            double rho = j_adm * drho;
            if (j_adm < n_rho) {
                // the admissible boundary sits between samples; look half a
                // step further only when it can matter
                const double hi = std::min(ps.len[r], rho + drho);
                if (ps.c[r] * hi > g - root && hi > rho) {
                    const double start = j_adm == 0 ? 0.5 * drho : rho;
                    const double probe = ps.eval_at(r, start);
                    if (j_adm > 0 || probe < root - eps)
                        rho = refine_boundary(ps, r, std::max(start, rho), hi, root, eps,
                                              false);
                }
            }
            if (rho > 0.0) sharpened = std::min(sharpened, g - ps.c[r] * rho);
        }
        sharpened = std::max(sharpened, floor_val);
        if (std::fabs(sharpened - root) <= 1e-12) break;
        root = std::min(root, sharpened);
    }
    return root;
}

// Central-difference horizontal gradient on node values; one-sided at the
// boundary layer (those nodes are Dirichlet-fixed anyway).
inline void node_grad(const GridField& u, int i, int j, int k, const Point& p,
                      double& g1, double& g2) {
    const int nx = u.nx(), ny = u.ny(), nz = u.nz();
    double ux, uy, uz;
    if (i == 0)
        ux = (u(1, j, k) - u(0, j, k)) / u.hx();
    else if (i == nx - 1)
        ux = (u(nx - 1, j, k) - u(nx - 2, j, k)) / u.hx();
    else
        ux = (u(i + 1, j, k) - u(i - 1, j, k)) / (2.0 * u.hx());
    if (j == 0)
        uy = (u(i, 1, k) - u(i, 0, k)) / u.hy();
    else if (j == ny - 1)
        uy = (u(i, ny - 1, k) - u(i, ny - 2, k)) / u.hy();
    else
        uy = (u(i, j + 1, k) - u(i, j - 1, k)) / (2.0 * u.hy());
    if (k == 0)
        uz = (u(i, j, 1) - u(i, j, 0)) / u.hz();
    else if (k == nz - 1)
        uz = (u(i, j, nz - 1) - u(i, j, nz - 2)) / u.hz();
    else
        uz = (u(i, j, k + 1) - u(i, j, k - 1)) / (2.0 * u.hz());
    g1 = ux - 0.5 * p.y * uz;
    g2 = uy + 0.5 * p.x * uz;
}

double frozen_residual(const GridField& u, const GridField& g, const HTables& tab,
                       int n_rho, double eps, unsigned threads) {
    const int nx = u.nx(), ny = u.ny(), nz = u.nz();
    const std::size_t n = u.size();
    std::vector<double> worst(resolve_threads(threads), 0.0);
    const std::size_t chunk = (n + worst.size() - 1) / worst.size();
    parallel_for(worst.size(), static_cast<unsigned>(worst.size()), [&](std::size_t tid) {
        PlaneScan ps;
        double m = 0.0;
        const std::size_t b = tid * chunk, e = std::min(n, b + chunk);
        for (std::size_t idx = b; idx < e; ++idx) {
            const int i = static_cast<int>(idx % nx);
            const int j = static_cast<int>((idx / nx) % ny);
            const int k = static_cast<int>(idx / (static_cast<std::size_t>(nx) * ny));
            if (i == 0 || j == 0 || k == 0 || i == nx - 1 || j == ny - 1 || k == nz - 1)
                continue;
            const Point p = u.node(i, j, k);
            double g1, g2;
            node_grad(u, i, j, k, p, g1, g2);
            double H = 0.0;
            if (g1 != 0.0 || g2 != 0.0) {
                scan_plane(u, p, g1, g2, tab, n_rho, ps);
                H = plane_H(ps, u(i, j, k), eps, false);
            }
            m = std::max(m, std::fabs(u(i, j, k) + H - g(i, j, k)));
        }
        worst[tid] = m;
    });
    double m = 0.0;
    for (double v : worst) m = std::max(m, v);
    return m;
}

}  // namespace

std::vector<SublevelDir> sublevel_dirs(const GridField& f, const Point& p, double level,
                                       const HamiltonianParams& params) {
    if (!f.domain().contains(p))
        throw std::invalid_argument("sublevel_dirs: p outside the domain");
    const double eps = resolve_eps(f, params);
    const HTables tab(params.n_theta);
    std::vector<SublevelDir> out;
    for (int k = 0; k < params.n_theta; ++k) {
        const double ct = tab.ct[k], st = tab.st[k];
        const double zr = horiz_line_zrate(p, ct, st);
        const double L = ray_exit(f.domain(), p, ct, st, zr);
        for (int j = 1; j <= params.n_rho; ++j) {
            const double rho = L * j / params.n_rho;
            const Point xi{p.x + rho * ct, p.y + rho * st, p.z + rho * zr};
            const double v = f.eval(xi);
            const bool in = params.use_nonstrict ? v <= level + eps : v < level - eps;
            if (in) out.push_back({xi, {rho * ct, rho * st}});
        }
    }
    return out;
}

double hamiltonian_at(const GridField& f, const Point& p, const HamiltonianParams& params) {
    if (!f.domain().contains(p))
        throw std::invalid_argument("hamiltonian_at: p outside the domain");
    if (params.n_theta > kMaxTheta || params.n_rho > kMaxRho)
        throw std::invalid_argument("hamiltonian_at: angle/radius sampling too fine");
    const HorizGrad g = horiz_grad(f, p);
    if (g.x1 == 0.0 && g.x2 == 0.0) return 0.0;
    const double eps = resolve_eps(f, params);
    const HTables tab(params.n_theta);
    PlaneScan ps;
    scan_plane(f, p, g.x1, g.x2, tab, params.n_rho, ps);
    return plane_H(ps, f.eval(p), eps, params.use_nonstrict);
}

bool coercive_valid(const GridField& g, double K) {
    const double tol = 1e-12 * std::max(1.0, std::fabs(K));
    for (double v : g.values())
        if (v > K + tol) return false;
    const int nx = g.nx(), ny = g.ny(), nz = g.nz();
    for (int k = 0; k < nz; ++k)
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                const bool boundary =
                    i == 0 || j == 0 || k == 0 || i == nx - 1 || j == ny - 1 || k == nz - 1;
                if (boundary && std::fabs(g(i, j, k) - K) > tol) return false;
            }
    return true;
}

SolveResult solve_step(const GridField& g, const HamiltonianParams& hp,
                       const SolveParams& sp) {
    if (!coercive_valid(g, sp.boundary_k))
        throw std::invalid_argument(
            "solve_step: input must equal K on the boundary layer and stay <= K");
    if (sp.omega_relax <= 0.0 || sp.omega_relax > 1.0)
        throw std::invalid_argument("solve_step: omega_relax must lie in (0,1]");
    if (hp.n_theta > kMaxTheta || hp.n_rho > kMaxRho || hp.n_theta < 8 || hp.n_rho < 2)
        throw std::invalid_argument("solve_step: angle/radius sampling out of range");

    const double eps = resolve_eps(g, hp);
    const HTables tab(hp.n_theta);
    const double K = sp.boundary_k;
    const double floor = *std::min_element(g.values().begin(), g.values().end());
    const double w = sp.omega_relax;
    const int nx = g.nx(), ny = g.ny(), nz = g.nz();

    SolveResult res{g, {}};
    GridField& u = res.u;

    // Node update: with frozen neighbors the center value enters H only
    // through the sublevel threshold, and level + H(level) is strictly
    // increasing, so the node equation has a unique root. An explicit
    // update g - H[u_old] overshoots catastrophically at transient cliffs
    // (H scales like K/h there); the root update is stable at the same
    // fixed point.
    auto update_value = [&](PlaneScan& ps, int i, int j, int k) {
        const Point p = u.node(i, j, k);
        double g1, g2;
        node_grad(u, i, j, k, p, g1, g2);
        const double gp = g(i, j, k);
        double u_local = gp;
        if (g1 != 0.0 || g2 != 0.0) {
            scan_plane(u, p, g1, g2, tab, hp.n_rho, ps);
            u_local = level_root(ps, gp, eps, floor);
        }
        const double old = u(i, j, k);
        const double next = std::min(K, (1.0 - w) * old + w * u_local);
        u.at(i, j, k) = next;
        return std::fabs(next - old);
    };

    int sweep = 0;
    double res_frozen = 1e300;
    const double change_tol = 0.5 * sp.tol_inner;
    if (!sp.jacobi) {
        PlaneScan ps;
        // 8 lexicographic orderings, alternating axis directions
        for (sweep = 1; sweep <= sp.max_inner; ++sweep) {
            const int ord = (sweep - 1) % 8;
            const bool rx = ord & 1, ry = ord & 2, rz = ord & 4;
            double sweep_change = 0.0;
            for (int kk = 1; kk < nz - 1; ++kk) {
                const int k = rz ? nz - 1 - kk : kk;
                for (int jj = 1; jj < ny - 1; ++jj) {
                    const int j = ry ? ny - 1 - jj : jj;
                    for (int ii = 1; ii < nx - 1; ++ii) {
                        const int i = rx ? nx - 1 - ii : ii;
                        sweep_change = std::max(sweep_change, update_value(ps, i, j, k));
                    }
                }
            }
            if (sweep_change <= change_tol) {
                res_frozen = frozen_residual(u, g, tab, hp.n_rho, eps, sp.threads);
                if (res_frozen <= sp.tol_inner) break;
            }
        }
    } else {
        std::vector<double> hbuf(u.values());
        for (sweep = 1; sweep <= sp.max_inner; ++sweep) {
            double sweep_change = 0.0;
            std::vector<double> worst(resolve_threads(sp.threads), 0.0);
            const std::size_t chunk = (u.size() + worst.size() - 1) / worst.size();
            parallel_for(worst.size(), static_cast<unsigned>(worst.size()),
                         [&](std::size_t tid) {
                             PlaneScan ps;
                             double m = 0.0;
                             const std::size_t b = tid * chunk;
                             const std::size_t e = std::min(u.size(), b + chunk);
                             for (std::size_t idx = b; idx < e; ++idx) {
                                 const int i = static_cast<int>(idx % nx);
                                 const int j = static_cast<int>((idx / nx) % ny);
                                 const int k = static_cast<int>(
                                     idx / (static_cast<std::size_t>(nx) * ny));
                                 if (i == 0 || j == 0 || k == 0 || i == nx - 1 ||
                                     j == ny - 1 || k == nz - 1) {
                                     hbuf[idx] = u.values()[idx];
                                     continue;
                                 }
                                 const Point p = u.node(i, j, k);
                                 double g1, g2;
                                 node_grad(u, i, j, k, p, g1, g2);
                                 const double gp = g.values()[idx];
                                 double u_local = gp;
                                 if (g1 != 0.0 || g2 != 0.0) {
                                     scan_plane(u, p, g1, g2, tab, hp.n_rho, ps);
                                     u_local = level_root(ps, gp, eps, floor);
                                 }
                                 const double old = u.values()[idx];
                                 const double next =
                                     std::min(K, (1.0 - w) * old + w * u_local);
                                 m = std::max(m, std::fabs(next - old));
                                 hbuf[idx] = next;
                             }
                             worst[tid] = m;
                         });
            u.values().swap(hbuf);
            for (double v : worst) sweep_change = std::max(sweep_change, v);
            if (sweep_change <= change_tol) {
                res_frozen = frozen_residual(u, g, tab, hp.n_rho, eps, sp.threads);
                if (res_frozen <= sp.tol_inner) break;
            }
        }
    }

    if (res_frozen > 1e299)
        res_frozen = frozen_residual(u, g, tab, hp.n_rho, eps, sp.threads);
    res.inner.iterations = std::min(sweep, sp.max_inner);
    res.inner.residual = res_frozen;
    res.inner.converged = res_frozen <= sp.tol_inner;
    return res;
}

EnvelopeResult pde_envelope(const GridField& f, const HamiltonianParams& hp,
                            const SolveParams& sp) {
    EnvelopeResult out{f, {}, true};
    GridField prev = f;
    for (int n = 1; n <= sp.max_outer; ++n) {
        const auto t0 = std::chrono::steady_clock::now();
        SolveResult step = solve_step(prev, hp, sp);
        double change = 0.0, mono = 0.0;
        const auto& a = prev.values();
        const auto& b = step.u.values();
        for (std::size_t i = 0; i < a.size(); ++i) {
            change = std::max(change, std::fabs(b[i] - a[i]));
            mono = std::max(mono, b[i] - a[i]);
        }
        if (mono > 1e-9)
            throw std::runtime_error(
                "pde_envelope: outer iterate increased somewhere; scheme bug");
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.report.rows.push_back({n, step.inner.iterations, step.inner.residual, change,
                                   std::max(0.0, mono), secs});
        if (!step.inner.converged) out.converged = false;
        prev = std::move(step.u);
        if (change <= sp.tol_outer) {
            out.field = std::move(prev);
            return out;
        }
    }
    out.converged = false;
    out.report.converged = false;
    out.field = std::move(prev);
    return out;
}

double supersolution_residual(const GridField& u, const GridField& g,
                              const HamiltonianParams& params) {
    if (u.nx() != g.nx() || u.ny() != g.ny() || u.nz() != g.nz())
        throw std::invalid_argument("supersolution_residual: dimension mismatch");
    const double eps = resolve_eps(u, params);
    const HTables tab(params.n_theta);
    const int nx = u.nx(), ny = u.ny(), nz = u.nz();
    PlaneScan ps;
    double worst = 0.0;
    for (int k = 1; k < nz - 1; ++k)
        for (int j = 1; j < ny - 1; ++j)
            for (int i = 1; i < nx - 1; ++i) {
                const Point p = u.node(i, j, k);
                double g1, g2;
                node_grad(u, i, j, k, p, g1, g2);
                double H = 0.0;
                if (g1 != 0.0 || g2 != 0.0) {
                    scan_plane(u, p, g1, g2, tab, params.n_rho, ps);
                    H = plane_H(ps, u(i, j, k), eps, true);
                }
                worst = std::max(worst, g(i, j, k) - u(i, j, k) - H);
            }
    return std::max(0.0, worst);
}

GridField cap_boundary_compatible(const BoxDomain& dom, const GridDims& dims,
                                  const Generator& raw, double K, double R, double L) {
    // B_R(0) must fit in the box: planar extent R, vertical extent R^2/4.
    const double fit_xy = std::min({-dom.lo.x, dom.hi.x, -dom.lo.y, dom.hi.y});
    const double fit_z = std::min(-dom.lo.z, dom.hi.z);
    if (R <= 0.0 || fit_xy < R || fit_z < R * R / 4.0)
        throw std::invalid_argument(
            "cap_boundary_compatible: gauge ball B_R(0) does not fit inside the domain");
    GridField probe = build_field(dom, dims, raw, K);
    const double min_raw =
        *std::min_element(probe.values().begin(), probe.values().end());
    const double slope = L > 0.0 ? L : (K - min_raw) / (0.2 * R);
    GridField f(dom, dims, K);
    for (int k = 0; k < f.nz(); ++k)
        for (int j = 0; j < f.ny(); ++j)
            for (int i = 0; i < f.nx(); ++i) {
                const Point p = f.node(i, j, k);
                const double ramp = K + slope * (gauge(p) - R);
                f.at(i, j, k) = std::min(K, std::max(probe(i, j, k), ramp));
            }
    if (!coercive_valid(f, K))
        throw std::runtime_error(
            "cap_boundary_compatible: capping failed to reach K on the boundary layer; "
            "increase the domain or reduce R");
    return f;
}

}  // namespace hqc
