#pragma once

// The nonlocal Hamiltonian
//   H(p, u, grad_H u) = sup { <grad_H u(p), (p^-1 xi)_h> : xi in S_p(u) },
//   S_p(u) = { xi in H_p ∩ Omega : u(xi) < u(p) },
// the single-equation solver for u + H[u] = g in the coercive boundary
// setting (u = K on the boundary layer, u <= K), and the outer iteration
// u_n + H[u_n] = u_{n-1} that descends to the h-quasiconvex envelope.

#include <string>
#include <vector>

#include "hqc/grid.hpp"
#include "hqc/group.hpp"
#include "hqc/report.hpp"

namespace hqc {

struct HamiltonianParams {
    int n_theta = 32;           // full angles in [0, 2pi)
    int n_rho = 24;             // radial samples per ray, up to the ray's exit
    double eps_strict = -1.0;   // < 0: auto = 1e-9 * value range
    bool use_nonstrict = false; // scan S^_p (<=) instead of S_p (<)
    unsigned threads = 0;
};

struct SolveParams {
    double omega_relax = 0.8;   // damping in (0, 1]
    double tol_inner = 2e-5;
    int max_inner = 400;
    double tol_outer = 2e-3;
    int max_outer = 60;
    double boundary_k = 0.0;    // the K of the coercive setting
    bool jacobi = false;        // parallel Jacobi instead of sequential GS sweeps
    unsigned threads = 0;
};

struct SublevelDir {
    Point xi{};
    HorizontalVec h_coord{};
};

// Polar-grid enumeration of the (strict or non-strict) sublevel directions
// of the plane H_p within the field domain.
std::vector<SublevelDir> sublevel_dirs(const GridField& f, const Point& p, double level,
                                       const HamiltonianParams& params);

// Discrete Hamiltonian at p: sup of <grad_H f(p), h_coord> over the
// sampled sublevel directions, clipped at the degenerate limit 0 (empty
// set and vanishing gradients give exactly 0).
double hamiltonian_at(const GridField& f, const Point& p, const HamiltonianParams& params);

struct InnerReport {
    int iterations = 0;
    double residual = 0.0;
    bool converged = true;
};

struct SolveResult {
    GridField u;
    InnerReport inner;
};

// Solves u + H[u] = g for one outer step. Requires g = K on the boundary
// node layer and g <= K everywhere. The iteration
//   u <- min(K, max(floor, (1-w) u + w (g - H[u])))
// runs in alternating lexicographic Gauss-Seidel orders (or damped Jacobi
// sweeps when params.jacobi). floor = min g: the exact solution dominates
// the envelope of g, which dominates min g, so the clamp cannot bind at
// the fixed point; it only tames transient cliffs.
SolveResult solve_step(const GridField& g, const HamiltonianParams& hp,
                       const SolveParams& sp);

struct EnvelopeResult {
    GridField field;
    SchemeReport report;
    bool converged = true;
};

// Outer iteration u_0 = f, u_n + H[u_n] = u_{n-1}, stopping when the
// sup-norm change drops to tol_outer. The sequence is nonincreasing by
// construction; a violation beyond 1e-9 is a scheme bug and throws.
EnvelopeResult pde_envelope(const GridField& f, const HamiltonianParams& hp,
                            const SolveParams& sp);

// Diagnostic: max over interior nodes of max(0, g - u - H_nonstrict[u]).
double supersolution_residual(const GridField& u, const GridField& g,
                              const HamiltonianParams& params);

// Boundary-compatible capping transform
//   f_c = min(K, max(f_raw, K + L (|p|_G - R))),
// which forces f_c = K outside the gauge ball B_R(0) and f_c <= K
// everywhere. L < 0 picks (K - min f_raw) / (0.2 R). Throws when B_R(0)
// does not fit inside the domain box.
GridField cap_boundary_compatible(const BoxDomain& dom, const GridDims& dims,
                                  const Generator& raw, double K, double R,
                                  double L = -1.0);

// True when g = K on the boundary node layer and g <= K everywhere.
bool coercive_valid(const GridField& g, double K);

}  // namespace hqc
