#pragma once

// H-convex hulls by the level-set method: build a defining function whose
// strict zero sublevel is E, convexify it (direct or PDE route), and read
// the hull off the zero sublevel of the envelope. Also the right-metric
// sup-convolution, quantitative inclusion margins, Hausdorff distances
// and star-shapedness stability probes.

#include <string>
#include <utility>
#include <vector>

#include "hqc/convexify.hpp"
#include "hqc/grid.hpp"
#include "hqc/hj.hpp"
#include "hqc/region.hpp"

namespace hqc {

// psi_E = -(right distance to the complement of E) inside E, 0 outside;
// h-quasiconvex for h-convex open E. Distances are brute-force minima
// against a boundary sample cloud with a planar-bin prune.
GridField psi_field(const Region& e, const BoxDomain& omega, const GridDims& dims,
                    unsigned threads = 0);

// f = min(K, signed right distance to the boundary of E): negative exactly
// on E's nodes, K on the collar where the distance saturates, K on the
// boundary layer. Throws when the boundary layer is closer than K to E.
GridField defining_function(const Region& e, const BoxDomain& omega, double K,
                            const GridDims& dims, unsigned threads = 0);

struct HullParams {
    std::string method = "direct";  // "direct" | "pde"
    ScanParams scan{};              // direct route
    HamiltonianParams hp{};         // pde route
    SolveParams sp{};               // pde route; boundary_k is filled from K
    int max_iter = 12;
    double tol_fix = 1e-4;
    unsigned threads = 0;
};

struct HullResult {
    GridField envelope;
    GridField defining;
    std::vector<std::size_t> hull_node_indices;
    std::vector<Point> hull_nodes;
    double k = 0.0;
    std::string method;
    SchemeReport report;
    bool converged = true;
};

HullResult hull_compute(const Region& e, const BoxDomain& omega, double K,
                        const HullParams& params, const GridDims& dims);

// u^delta(p) = max of u over grid nodes q with d~(p,q) <= delta; preserves
// h-quasiconvexity. Sets *narrow (if given) when delta is below the grid
// spacing and the ball may contain only p itself.
GridField sup_convolution(const GridField& u, double delta, unsigned threads = 0,
                          bool* narrow = nullptr);

// (lhs, rhs) of the quantitative inclusion principle: rhs = min right
// distance from D's nodes to the complement of E's nodes, lhs = the same
// for the computed hulls. Contract: lhs >= rhs - grid tolerance.
std::pair<double, double> inclusion_margins(const Region& d, const Region& e,
                                            const BoxDomain& omega, double K,
                                            const HullParams& params,
                                            const GridDims& dims);

// Exact Hausdorff distance between finite point clouds.
double hausdorff(const std::vector<Point>& a, const std::vector<Point>& b,
                 Metric metric, unsigned threads = 0);

struct StarProbe {
    bool connected = false;
    struct LambdaRow {
        double lambda = 0.0;
        bool subset_ok = false;
        double clearance = 0.0;
    };
    std::vector<LambdaRow> lambdas;
    bool star_shaped = false;
    struct EpsRow {
        double eps = 0.0;
        double hull_gap = 0.0;
    };
    std::vector<EpsRow> eps_rows;
};

// (i) samples delta_lambda(E) ⊂ E with positive clearance for each lambda,
// (ii) measures hausdorff(hull(E), hull(N_eps(E))) for each eps.
StarProbe star_stability_probe(const Region& e, const std::vector<double>& lambdas,
                               const std::vector<double>& eps_list,
                               const BoxDomain& omega, double K,
                               const HullParams& params, const GridDims& dims);

// Grid nodes of a field's lattice that belong to the region.
std::vector<std::size_t> member_node_indices(const Region& e, const GridField& grid_ref);

void write_cloud_csv(const std::vector<Point>& pts, const std::string& path);
void write_probe_csv(const StarProbe& probe, const std::string& path);

}  // namespace hqc
