#pragma once

// Analytic region descriptions: gauge balls, disk stacks (the paper's
// two-disk configurations, optionally thickened into short cylinders),
// boxes, left-metric neighborhoods and finite unions. Membership is
// analytic; boundary sampling feeds the metric distance fields.

#include <cstdint>
#include <memory>
#include <variant>
#include <vector>

#include "hqc/grid.hpp"
#include "hqc/group.hpp"

namespace hqc {

enum class Metric { left, right };

inline double metric_dist(Metric m, const Point& a, const Point& b) {
    return m == Metric::left ? dist_left(a, b) : dist_right(a, b);
}

// Point cloud with a planar binning prune for nearest-distance queries.
// gauge >= planar distance for both invariant metrics, so bins can be
// searched in expanding rings with a sound lower bound.
class DistanceCloud {
  public:
    DistanceCloud() = default;
    DistanceCloud(std::vector<Point> pts, double bin_size);

    // Minimum distance from p to the cloud; gives up and returns the best
    // value found so far (>= stop_above) once the ring lower bound passes
    // stop_above.
    double min_dist(const Point& p, Metric metric,
                    double stop_above = 1e300) const;

    bool empty() const { return pts_.empty(); }
    std::size_t size() const { return pts_.size(); }
    const std::vector<Point>& points() const { return pts_; }

  private:
    std::vector<Point> pts_;
    std::vector<std::vector<std::uint32_t>> bins_;
    int bx_ = 0, by_ = 0;
    double x0_ = 0.0, y0_ = 0.0, bin_ = 1.0;
};

struct GaugeBall {
    Point center{};
    double radius = 1.0;
};

// Two horizontal disks of radii r (lower) and R (upper), the lower
// spanning z in (-delta, 0) and the upper z in (t, t+delta) so that the
// gap between them is exactly t and the h-convexity threshold 2t >= rR
// carries over from the measure-zero case. delta = 0 degenerates to the
// exact disks at z = 0 and z = t.
struct DiskStack {
    double r = 1.0;
    double R = 1.0;
    double t = 1.0;
    double thickness = 0.0;
};

struct BoxRegion {
    Point lo{};
    Point hi{};
};

class Region;

// {p : d_H(p, inner) < eps} with the left-invariant metric. Membership
// resolves the distance against a cloud of the inner boundary built at
// construction; the cloud spacing bounds the membership resolution.
struct LeftNeighborhood {
    std::shared_ptr<const Region> inner;
    double eps = 0.1;
    std::shared_ptr<const DistanceCloud> inner_boundary;
};

class Region {
  public:
    using Primitive = std::variant<GaugeBall, DiskStack, BoxRegion, LeftNeighborhood>;

    static Region gauge_ball(const Point& c, double r, bool open = true);
    static Region disk_stack(double r, double R, double t, double thickness,
                             bool open = true);
    static Region box(const Point& lo, const Point& hi, bool open = true);
    static Region left_neighborhood(Region inner, double eps);
    static Region union_of(std::vector<Region> parts);

    bool open() const { return open_; }
    void set_open(bool o) { open_ = o; }
    const std::vector<Primitive>& parts() const { return parts_; }

    bool contains(const Point& p) const;
    // Membership with every primitive fattened by tol; used by coarse
    // lattice probes that must see measure-zero disks.
    bool contains_fat(const Point& p, double tol) const;

    BoxDomain bounding_box() const;

    // Sample cloud on the topological boundary with target spacing.
    std::vector<Point> boundary_cloud(double spacing) const;

    // Ray parameters s where the horizontal line through p with direction
    // (cos_t, sin_t) crosses measure-zero or thin features (disk planes).
    void horizontal_hits(const Point& p, double cos_t, double sin_t,
                         std::vector<double>& out) const;

    // Group dilation delta_lambda(E); exact for every primitive.
    Region dilated(double lambda) const;

    std::vector<Point> sample_interior(std::size_t count, std::uint64_t seed) const;

    // Connectivity probe: flood fill over a res^3 lattice of the bounding
    // box with membership fattened to half a lattice cell.
    bool lattice_connected(int res = 48) const;

  private:
    std::vector<Primitive> parts_;
    bool open_ = true;
};

// d(p, E) for a region: 0 inside, otherwise distance to the boundary
// cloud. The cloud and its bins are the caller's (build once, query many).
double region_distance(const Point& p, const Region& e, const DistanceCloud& boundary,
                       Metric metric, double stop_above = 1e300);

}  // namespace hqc
