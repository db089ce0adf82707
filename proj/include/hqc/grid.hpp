#pragma once

// Scalar fields on a uniform grid over a box domain. Boxes are
// Euclidean-convex, hence h-convex, so they qualify as the domain of
// every solver in this library. Evaluation outside the box returns the
// constant exterior plateau K, which keeps horizontal ray scans
// well-defined after they leave the domain.

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hqc/group.hpp"

namespace hqc {

struct BoxDomain {
    Point lo;
    Point hi;

    bool valid() const { return lo.x < hi.x && lo.y < hi.y && lo.z < hi.z; }
    bool contains(const Point& p, double tol = 0.0) const {
        return p.x >= lo.x - tol && p.x <= hi.x + tol && p.y >= lo.y - tol &&
               p.y <= hi.y + tol && p.z >= lo.z - tol && p.z <= hi.z + tol;
    }
};

struct GridDims {
    int nx = 2;
    int ny = 2;
    int nz = 2;
};

struct HorizGrad {
    double x1 = 0.0;      // X1 u = u_x - (y/2) u_z
    double x2 = 0.0;      // X2 u = u_y + (x/2) u_z
    bool one_sided = false;  // set when a boundary-clamped stencil was used
};

class GridField {
  public:
    GridField() = default;
    GridField(const BoxDomain& dom, const GridDims& dims, double exterior_k);

    const BoxDomain& domain() const { return dom_; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }
    int nz() const { return nz_; }
    std::size_t size() const { return values_.size(); }
    double exterior_k() const { return exterior_k_; }
    void set_exterior_k(double k) { exterior_k_ = k; }

    double hx() const { return hx_; }
    double hy() const { return hy_; }
    double hz() const { return hz_; }
    double min_spacing() const;
    double max_spacing() const;

    std::size_t index(int i, int j, int k) const {
        return static_cast<std::size_t>(i) +
               static_cast<std::size_t>(nx_) *
                   (static_cast<std::size_t>(j) +
                    static_cast<std::size_t>(ny_) * static_cast<std::size_t>(k));
    }
    Point node(int i, int j, int k) const {
        return {dom_.lo.x + i * hx_, dom_.lo.y + j * hy_, dom_.lo.z + k * hz_};
    }
    Point node(std::size_t idx) const;

    double operator()(int i, int j, int k) const { return values_[index(i, j, k)]; }
    double& at(int i, int j, int k) { return values_[index(i, j, k)]; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    // Trilinear interpolation inside the box, exterior_k outside. Exact at
    // nodes (fractional coordinates are snapped at 1e-12 of a cell) and on
    // any trilinear polynomial. Points within 1e-9 of a face count as
    // inside so that ray walkers landing on a wall read the wall value.
    double eval(const Point& p) const {
        const double tx = 1e-9 * (dom_.hi.x - dom_.lo.x);
        const double ty = 1e-9 * (dom_.hi.y - dom_.lo.y);
        const double tz = 1e-9 * (dom_.hi.z - dom_.lo.z);
        if (p.x < dom_.lo.x - tx || p.x > dom_.hi.x + tx || p.y < dom_.lo.y - ty ||
            p.y > dom_.hi.y + ty || p.z < dom_.lo.z - tz || p.z > dom_.hi.z + tz)
            return exterior_k_;

        int i0, j0, k0;
        double fx, fy, fz;
        cell_coord(p.x, dom_.lo.x, hx_, nx_, i0, fx);
        cell_coord(p.y, dom_.lo.y, hy_, ny_, j0, fy);
        cell_coord(p.z, dom_.lo.z, hz_, nz_, k0, fz);

        const std::size_t sy = static_cast<std::size_t>(nx_);
        const std::size_t sz = sy * static_cast<std::size_t>(ny_);
        const double* v = values_.data() + index(i0, j0, k0);

        const double c00 = std::lerp(v[0], v[1], fx);
        const double c10 = std::lerp(v[sy], v[sy + 1], fx);
        const double c01 = std::lerp(v[sz], v[sz + 1], fx);
        const double c11 = std::lerp(v[sz + sy], v[sz + sy + 1], fx);
        const double c0 = std::lerp(c00, c10, fy);
        const double c1 = std::lerp(c01, c11, fy);
        return std::lerp(c0, c1, fz);
    }

    // True when p is at least one cell away from every face.
    bool well_interior(const Point& p) const;

  private:
    static void cell_coord(double v, double lo, double h, int n, int& i0, double& t) {
        const double u = (v - lo) / h;
        const double fl = std::floor(u);
        int i = static_cast<int>(fl);
        double frac = u - fl;
        if (frac < 1e-12) frac = 0.0;
        if (frac > 1.0 - 1e-12) {
            frac = 0.0;
            ++i;
        }
        if (i < 0) {
            i = 0;
            frac = 0.0;
        }
        if (i >= n - 1) {
            i = n - 2;
            frac = 1.0;
        }
        i0 = i;
        t = frac;
    }

    BoxDomain dom_{};
    int nx_ = 0, ny_ = 0, nz_ = 0;
    double hx_ = 0.0, hy_ = 0.0, hz_ = 0.0;
    double exterior_k_ = 0.0;
    std::vector<double> values_;
};

using Generator = std::function<double(const Point&)>;

// Samples the generator at every node. Throws on non-finite output.
// When clip_to_k is set, node values are clamped to <= K (coercive setting).
GridField build_field(const BoxDomain& dom, const GridDims& dims,
                      const Generator& gen, double exterior_k,
                      bool clip_to_k = false);

// Horizontal gradient via central differences of eval, falling back to
// one-sided stencils (flagged) within one cell of the boundary.
HorizGrad horiz_grad(const GridField& f, const Point& p);

double linf_diff(const GridField& a, const GridField& b);

std::vector<std::size_t> sublevel_node_indices(const GridField& f, double lambda,
                                               bool strict);
std::vector<Point> sublevel_extract(const GridField& f, double lambda, bool strict);

// Global trilinear interpolation error estimate: max |second difference|/8
// over all axes and interior nodes.
double interp_error_estimate(const GridField& f);

// Field file format, bit-exact round trip:
//   "HHFIELD1 nx ny nz lox loy loz hix hiy hiz K\n"
// followed by nx*ny*nz little-endian IEEE doubles, x-fastest.
void save_field(const GridField& f, const std::string& path);
GridField load_field(const std::string& path);

struct SliceSpec {
    char axis = 'z';     // 'x' | 'y' | 'z'
    double coordinate = 0.0;
};

// One CSV row per node on the slice nearest to the requested coordinate;
// header "x,y,z,value".
void write_slice_csv(const GridField& f, const SliceSpec& spec,
                     const std::string& path);

}  // namespace hqc
