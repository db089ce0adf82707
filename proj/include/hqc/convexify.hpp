#pragma once

// Direct convexification: the one-step operator
//   T[f](w) = inf { max(f(p), f(q)) : w in [p,q], p in Omega, q in Omega ∩ H_p }
// and its fixed-point iteration toward the h-quasiconvex envelope, plus
// sampling falsifiers for h-quasiconvexity of fields and h-convexity of
// sets. The pair search collapses to horizontal rays through each node:
// any admissible (p,q) straddles w on one horizontal line (closure
// property of horizontal lines), so per node it suffices to scan angles
// in [0,pi) and take max of the two one-sided ray minima.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hqc/grid.hpp"
#include "hqc/region.hpp"
#include "hqc/report.hpp"

namespace hqc {

struct ScanParams {
    int n_theta = 32;            // angles in [0, pi)
    int n_s = 32;                // samples per ray half (set scans, segment subdivision)
    double tol_violation = -1.0; // < 0: auto = 1e-6 + 2 * interp error estimate
    double tol_plane = 1e-9;
    unsigned threads = 0;        // 0 = hardware
};

struct ViolationWitness {
    Point p{}, q{}, w{};
    double u_p = 0.0, u_q = 0.0, u_w = 0.0;
    double margin = 0.0;  // u_w - max(u_p, u_q)
};

// One application of T on the grid. Nonincreasing (output <= input at
// every node, exactly) and monotone in the input field.
GridField t_step(const GridField& f, const ScanParams& scan);

// As t_step, but also reports the argmin angle index per node (ties break
// to the smallest index). The output value is angle-independent.
GridField t_step_with_angles(const GridField& f, const ScanParams& scan,
                             std::vector<int>& argmin_theta);

struct TIterateResult {
    GridField field;
    int iterations = 0;
    SchemeReport report;
    bool converged = true;
};

// Iterates t_step until the sup-norm change drops to tol_fix or max_iter
// is reached (flagged, not an error: no iteration bound is known in
// general).
TIterateResult t_iterate(const GridField& f, const ScanParams& scan, int max_iter,
                         double tol_fix);

// Sampling falsifier for h-quasiconvexity: reports node/ray triples with
// u(w) > max(u(p),u(q)) + tol_violation. Empty means no violation found at
// this resolution.
std::vector<ViolationWitness> check_field_hquasiconvex(const GridField& f,
                                                       const ScanParams& scan,
                                                       std::size_t max_witnesses = 100000);

// Sampling falsifier for h-convexity of a set: samples p in E, scans the
// horizontal plane of p for q in E (including analytic plane crossings for
// measure-zero disks) and subdivides [p,q]. Witness values are the
// membership indicator (0 in E, 1 outside), so margin is always 1.
std::vector<ViolationWitness> check_set_hconvex(const Region& e, const ScanParams& scan,
                                                std::size_t sample_count,
                                                std::uint64_t seed = 12345,
                                                std::size_t max_witnesses = 10000);

// Node-wise composition with a nondecreasing g; preserves h-quasiconvexity.
GridField monotone_compose(const GridField& f, const std::function<double(double)>& g);

// CSV export, header "px,py,pz,qx,qy,qz,wx,wy,wz,up,uq,uw,margin".
void write_witness_csv(const std::vector<ViolationWitness>& ws, const std::string& path);

}  // namespace hqc
