#include "hqc/convexify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <stdexcept>

#include "hqc/parallel.hpp"

namespace hqc {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct ThetaTable {
    std::vector<double> ct, st;
    explicit ThetaTable(int n) {
        ct.resize(n);
        st.resize(n);
        for (int k = 0; k < n; ++k) {
            const double theta = kPi * k / n;
            ct[k] = std::cos(theta);
            st[k] = std::sin(theta);
        }
    }
};

// Positive travel until the ray w + s*dir leaves the closed box.
inline double exit_param(const BoxDomain& d, const Point& w, double dx, double dy,
                         double dz) {
    double s = 1e300;
    if (dx > 0.0)
        s = std::min(s, (d.hi.x - w.x) / dx);
    else if (dx < 0.0)
        s = std::min(s, (d.lo.x - w.x) / dx);
    if (dy > 0.0)
        s = std::min(s, (d.hi.y - w.y) / dy);
    else if (dy < 0.0)
        s = std::min(s, (d.lo.y - w.y) / dy);
    if (dz > 0.0)
        s = std::min(s, (d.hi.z - w.z) / dz);
    else if (dz < 0.0)
        s = std::min(s, (d.lo.z - w.z) / dz);
    return std::max(0.0, s);
}

// Minimum of the field along one side of the horizontal line through w,
// walking in steps that advance at most one cell per axis and sampling the
// exit point itself. The walk additionally samples every crossing of a
// grid z-plane: the interpolant is only piecewise smooth in z and its ray
// minima sit exactly on those planes when the data has z-kinks. Both
// sample families depend only on geometry, never on field values, which
// keeps t_step monotone in the field. Seeded with the value at w (the
// degenerate pair).
inline void side_min(const GridField& f, const Point& w, double dx, double dy,
                     double dz, double seed_val, double& best, double& best_s) {
    best = seed_val;
    best_s = 0.0;
    const double sx = std::fabs(dx) / f.hx();
    const double sy = std::fabs(dy) / f.hy();
    const double sz = std::fabs(dz) / f.hz();
    const double ds = 1.0 / std::max({sx, sy, sz});
    const double s_exit = exit_param(f.domain(), w, dx, dy, dz);
    if (s_exit <= 0.0) return;
    const long nfull = static_cast<long>(s_exit / ds);
    for (long m = 1; m <= nfull; ++m) {
        const double s = m * ds;
        const double v = f.eval({w.x + s * dx, w.y + s * dy, w.z + s * dz});
        if (v < best) {
            best = v;
            best_s = s;
        }
    }
    {
        const double v =
            f.eval({w.x + s_exit * dx, w.y + s_exit * dy, w.z + s_exit * dz});
        if (v < best) {
            best = v;
            best_s = s_exit;
        }
    }
    if (std::fabs(dz) > 1e-14) {
        const double z_end = w.z + s_exit * dz;
        const double zlo = f.domain().lo.z, hz = f.hz();
        long m0 = static_cast<long>(std::ceil((std::min(w.z, z_end) - zlo) / hz));
        long m1 = static_cast<long>(std::floor((std::max(w.z, z_end) - zlo) / hz));
        m0 = std::max(m0, 0L);
        m1 = std::min(m1, static_cast<long>(f.nz()) - 1);
        for (long m = m0; m <= m1; ++m) {
            const double s = (zlo + m * hz - w.z) / dz;
            if (s <= 0.0 || s >= s_exit) continue;
            const double v = f.eval({w.x + s * dx, w.y + s * dy, w.z + s * dz});
            if (v < best) {
                best = v;
                best_s = s;
            }
        }
    }
}

}  // namespace

GridField t_step(const GridField& f, const ScanParams& scan) {
    if (scan.n_theta < 4) throw std::invalid_argument("t_step: n_theta must be >= 4");
    GridField out = f;
    const ThetaTable tab(scan.n_theta);
    auto* dst = out.values().data();
    parallel_for(f.size(), scan.threads, [&](std::size_t idx) {
        const Point w = f.node(idx);
        const double uw = f.values()[idx];
        double best = uw;
        for (int k = 0; k < scan.n_theta; ++k) {
            const double ct = tab.ct[k], st = tab.st[k];
            const double zr = horiz_line_zrate(w, ct, st);
            double m_neg, m_pos, s_dummy;
            side_min(f, w, -ct, -st, -zr, uw, m_neg, s_dummy);
            if (m_neg >= best) continue;  // max(m-, m+) >= m- cannot beat best
            side_min(f, w, ct, st, zr, uw, m_pos, s_dummy);
            const double v = std::max(m_neg, m_pos);
            if (v < best) best = v;
        }
        dst[idx] = std::min(uw, best);
    });
    return out;
}

GridField t_step_with_angles(const GridField& f, const ScanParams& scan,
                             std::vector<int>& argmin_theta) {
    GridField out = f;
    argmin_theta.assign(f.size(), 0);
    const ThetaTable tab(scan.n_theta);
    auto* dst = out.values().data();
    auto* arg = argmin_theta.data();
    parallel_for(f.size(), scan.threads, [&](std::size_t idx) {
        const Point w = f.node(idx);
        const double uw = f.values()[idx];
        double best = 1e300;
        int best_k = 0;
        for (int k = 0; k < scan.n_theta; ++k) {
            const double ct = tab.ct[k], st = tab.st[k];
            const double zr = horiz_line_zrate(w, ct, st);
            double m_neg, m_pos, s_dummy;
            side_min(f, w, -ct, -st, -zr, uw, m_neg, s_dummy);
            side_min(f, w, ct, st, zr, uw, m_pos, s_dummy);
            const double v = std::max(m_neg, m_pos);
            if (v < best) {
                best = v;
                best_k = k;
            }
        }
        dst[idx] = std::min(uw, best);
        arg[idx] = best_k;
    });
    return out;
}

TIterateResult t_iterate(const GridField& f, const ScanParams& scan, int max_iter,
                         double tol_fix) {
    TIterateResult res;
    res.field = f;
    for (int n = 1; n <= max_iter; ++n) {
        const auto t0 = std::chrono::steady_clock::now();
        GridField next = t_step(res.field, scan);
        double change = 0.0, mono = 0.0;
        const auto& a = res.field.values();
        const auto& b = next.values();
        for (std::size_t i = 0; i < a.size(); ++i) {
            change = std::max(change, std::fabs(b[i] - a[i]));
            mono = std::max(mono, b[i] - a[i]);
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        res.field = std::move(next);
        res.iterations = n;
        res.report.rows.push_back({n, 1, 0.0, change, std::max(0.0, mono), secs});
        if (change <= tol_fix) {
            res.converged = true;
            return res;
        }
    }
    res.converged = false;
    res.report.converged = false;
    return res;
}

std::vector<ViolationWitness> check_field_hquasiconvex(const GridField& f,
                                                       const ScanParams& scan,
                                                       std::size_t max_witnesses) {
    const double tol = scan.tol_violation >= 0.0
                           ? scan.tol_violation
                           : 1e-6 + 2.0 * interp_error_estimate(f);
    const ThetaTable tab(scan.n_theta);
    const unsigned nthreads = resolve_threads(scan.threads);
    std::vector<std::vector<ViolationWitness>> found(nthreads);
    const std::size_t chunk = (f.size() + nthreads - 1) / nthreads;

    parallel_for(nthreads, nthreads, [&](std::size_t tid) {
        const std::size_t b = tid * chunk;
        const std::size_t e = std::min(f.size(), b + chunk);
        auto& local = found[tid];
        for (std::size_t idx = b; idx < e; ++idx) {
            const Point w = f.node(idx);
            const double uw = f.values()[idx];
            double best = 1e300, bp = 0, bq = 0, bsp = 0, bsq = 0;
            double bct = 1, bst = 0;
            for (int k = 0; k < scan.n_theta; ++k) {
                const double ct = tab.ct[k], st = tab.st[k];
                const double zr = horiz_line_zrate(w, ct, st);
                double m_neg, m_pos, s_neg, s_pos;
                side_min(f, w, -ct, -st, -zr, uw, m_neg, s_neg);
                side_min(f, w, ct, st, zr, uw, m_pos, s_pos);
                const double v = std::max(m_neg, m_pos);
                if (v < best) {
                    best = v;
                    bp = m_neg;
                    bq = m_pos;
                    bsp = s_neg;
                    bsq = s_pos;
                    bct = ct;
                    bst = st;
                }
            }
            if (uw - best > tol) {
                const double zr = horiz_line_zrate(w, bct, bst);
                ViolationWitness vw;
                vw.w = w;
                vw.p = {w.x - bsp * bct, w.y - bsp * bst, w.z - bsp * zr};
                vw.q = {w.x + bsq * bct, w.y + bsq * bst, w.z + bsq * zr};
                vw.u_p = bp;
                vw.u_q = bq;
                vw.u_w = uw;
                vw.margin = uw - best;
                local.push_back(vw);
            }
        }
    });

    std::vector<ViolationWitness> out;
    for (auto& v : found) {
        for (auto& w : v) {
            if (out.size() >= max_witnesses) return out;
            out.push_back(w);
        }
    }
    return out;
}

std::vector<ViolationWitness> check_set_hconvex(const Region& e, const ScanParams& scan,
                                                std::size_t sample_count,
                                                std::uint64_t seed,
                                                std::size_t max_witnesses) {
    const BoxDomain bb = e.bounding_box();
    const double diag = std::sqrt((bb.hi.x - bb.lo.x) * (bb.hi.x - bb.lo.x) +
                                  (bb.hi.y - bb.lo.y) * (bb.hi.y - bb.lo.y) +
                                  (bb.hi.z - bb.lo.z) * (bb.hi.z - bb.lo.z));
    const std::vector<Point> samples = e.sample_interior(sample_count, seed);
    const ThetaTable tab(scan.n_theta);
    const unsigned nthreads = resolve_threads(scan.threads);
    std::vector<std::vector<ViolationWitness>> found(nthreads);
    const std::size_t chunk = (samples.size() + nthreads - 1) / nthreads;

    parallel_for(nthreads, nthreads, [&](std::size_t tid) {
        const std::size_t b = tid * chunk;
        const std::size_t en = std::min(samples.size(), b + chunk);
        auto& local = found[tid];
        std::vector<double> cand;
        for (std::size_t si = b; si < en; ++si) {
            const Point p = samples[si];
            if (!e.contains(p)) continue;  // samplers are inset, but stay safe
            for (int k = 0; k < scan.n_theta; ++k) {
                const double ct = tab.ct[k], st = tab.st[k];
                cand.clear();
                const double ds = diag / scan.n_s;
                for (int m = 1; m <= scan.n_s; ++m) {
                    cand.push_back(m * ds);
                    cand.push_back(-m * ds);
                }
                e.horizontal_hits(p, ct, st, cand);
                const double zr = horiz_line_zrate(p, ct, st);
                for (double s : cand) {
                    if (std::fabs(s) < 1e-9 * diag || std::fabs(s) > 2.0 * diag) continue;
                    const Point q{p.x + s * ct, p.y + s * st, p.z + s * zr};
                    if (!e.contains(q)) continue;
                    for (int i = 1; i < scan.n_s; ++i) {
                        const double sw = s * i / scan.n_s;
                        const Point w{p.x + sw * ct, p.y + sw * st, p.z + sw * zr};
                        if (!e.contains(w)) {
                            ViolationWitness vw;
                            vw.p = p;
                            vw.q = q;
                            vw.w = w;
                            vw.u_p = 0.0;
                            vw.u_q = 0.0;
                            vw.u_w = 1.0;
                            vw.margin = 1.0;
                            local.push_back(vw);
                            break;
                        }
                    }
                    if (local.size() > max_witnesses / nthreads + 1) break;
                }
                if (local.size() > max_witnesses / nthreads + 1) break;
            }
        }
    });

    std::vector<ViolationWitness> out;
    for (auto& v : found) {
        for (auto& w : v) {
            if (out.size() >= max_witnesses) return out;
            out.push_back(w);
        }
    }
    return out;
}

GridField monotone_compose(const GridField& f, const std::function<double(double)>& g) {
    GridField out = f;
    for (double& v : out.values()) v = g(v);
    out.set_exterior_k(g(f.exterior_k()));
    return out;
}

void write_witness_csv(const std::vector<ViolationWitness>& ws, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_witness_csv: cannot open " + path);
    os << "px,py,pz,qx,qy,qz,wx,wy,wz,up,uq,uw,margin\n";
    char buf[420];
    for (const auto& w : ws) {
        std::snprintf(buf, sizeof(buf),
                      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      w.p.x, w.p.y, w.p.z, w.q.x, w.q.y, w.q.z, w.w.x, w.w.y, w.w.z,
                      w.u_p, w.u_q, w.u_w, w.margin);
        os << buf;
    }
}

}  // namespace hqc
