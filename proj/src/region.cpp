#include "hqc/region.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>
#include <stdexcept>
#include <unordered_set>

namespace hqc {

namespace {

constexpr double kPi = 3.14159265358979323846;

inline double stack_zsnap(const DiskStack& s) {
    return 1e-12 * std::max({1.0, std::fabs(s.t), s.thickness});
}

// Keep one point per cell of the given spacing.
std::vector<Point> thin_cloud(const std::vector<Point>& pts, double spacing) {
    if (spacing <= 0.0 || pts.empty()) return pts;
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(pts.size());
    std::vector<Point> out;
    out.reserve(pts.size());
    for (const Point& p : pts) {
        const auto cx = static_cast<std::int64_t>(std::floor(p.x / spacing));
        const auto cy = static_cast<std::int64_t>(std::floor(p.y / spacing));
        const auto cz = static_cast<std::int64_t>(std::floor(p.z / spacing));
        std::uint64_t h = 1469598103934665603ull;
        for (std::int64_t c : {cx, cy, cz}) {
            h ^= static_cast<std::uint64_t>(c) + 0x9e3779b97f4a7c15ull;
            h *= 1099511628211ull;
        }
        if (seen.insert(h).second) out.push_back(p);
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------- DistanceCloud

DistanceCloud::DistanceCloud(std::vector<Point> pts, double bin_size)
    : pts_(std::move(pts)), bin_(bin_size > 0 ? bin_size : 1.0) {
    if (pts_.empty()) return;
    double xmin = pts_[0].x, xmax = pts_[0].x, ymin = pts_[0].y, ymax = pts_[0].y;
    for (const Point& p : pts_) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    x0_ = xmin;
    y0_ = ymin;
    bx_ = std::max(1, static_cast<int>((xmax - xmin) / bin_) + 1);
    by_ = std::max(1, static_cast<int>((ymax - ymin) / bin_) + 1);
    bins_.assign(static_cast<std::size_t>(bx_) * by_, {});
    for (std::uint32_t i = 0; i < pts_.size(); ++i) {
        int cx = std::clamp(static_cast<int>((pts_[i].x - x0_) / bin_), 0, bx_ - 1);
        int cy = std::clamp(static_cast<int>((pts_[i].y - y0_) / bin_), 0, by_ - 1);
        bins_[static_cast<std::size_t>(cy) * bx_ + cx].push_back(i);
    }
}

double DistanceCloud::min_dist(const Point& p, Metric metric, double stop_above) const {
    if (pts_.empty()) return 1e300;
    const int px = std::clamp(static_cast<int>((p.x - x0_) / bin_), -1, bx_);
    const int py = std::clamp(static_cast<int>((p.y - y0_) / bin_), -1, by_);
    double best = 1e300;
    const int max_ring = bx_ + by_ + 2;
    for (int ring = 0; ring <= max_ring; ++ring) {
        // Any point in a ring at Chebyshev cell distance `ring` is at planar
        // distance >= (ring-1)*bin, and gauge >= planar distance.
        const double lb = (ring - 1) * bin_;
        if (lb > best || lb > stop_above) break;
        for (int cy = py - ring; cy <= py + ring; ++cy) {
            if (cy < 0 || cy >= by_) continue;
            const bool edge_row = (cy == py - ring || cy == py + ring);
            const int step = edge_row ? 1 : 2 * ring;
            for (int cx = px - ring; cx <= px + ring; cx += (step > 0 ? step : 1)) {
                if (cx < 0 || cx >= bx_) continue;
                for (std::uint32_t idx : bins_[static_cast<std::size_t>(cy) * bx_ + cx]) {
                    const double d = metric_dist(metric, p, pts_[idx]);
                    if (d < best) best = d;
                }
                if (step == 0) break;
            }
        }
    }
    return best;
}

// ---------------------------------------------------------------- membership

namespace {

bool ball_contains(const GaugeBall& b, const Point& p, bool open, double fat) {
    const double d = dist_left(b.center, p);
    return open && fat == 0.0 ? d < b.radius : d <= b.radius + fat;
}

bool stack_contains(const DiskStack& s, const Point& p, bool open, double fat) {
    const double rho2 = p.x * p.x + p.y * p.y;
    const double snap = std::max(stack_zsnap(s), fat);
    auto in_disk = [&](double radius) {
        const double r2 = (radius + fat) * (radius + fat);
        return open && fat == 0.0 ? rho2 < r2 : rho2 <= r2;
    };
    if (s.thickness <= 0.0) {
        if (std::fabs(p.z) <= snap && in_disk(s.r)) return true;
        if (std::fabs(p.z - s.t) <= snap && in_disk(s.R)) return true;
        return false;
    }
    auto in_slab = [&](double a, double b) {
        return open && fat == 0.0 ? (p.z > a && p.z < b)
                                  : (p.z >= a - fat && p.z <= b + fat);
    };
    if (in_slab(-s.thickness, 0.0) && in_disk(s.r)) return true;
    if (in_slab(s.t, s.t + s.thickness) && in_disk(s.R)) return true;
    return false;
}

bool box_contains(const BoxRegion& b, const Point& p, bool open, double fat) {
    if (open && fat == 0.0)
        return p.x > b.lo.x && p.x < b.hi.x && p.y > b.lo.y && p.y < b.hi.y &&
               p.z > b.lo.z && p.z < b.hi.z;
    return p.x >= b.lo.x - fat && p.x <= b.hi.x + fat && p.y >= b.lo.y - fat &&
           p.y <= b.hi.y + fat && p.z >= b.lo.z - fat && p.z <= b.hi.z + fat;
}

bool neighborhood_contains(const LeftNeighborhood& n, const Point& p, bool open,
                           double fat) {
    if (fat > 0.0 ? n.inner->contains_fat(p, fat) : n.inner->contains(p)) return true;
    const double d = region_distance(p, *n.inner, *n.inner_boundary, Metric::left,
                                     n.eps + fat + 1e-9);
    return open && fat == 0.0 ? d < n.eps : d <= n.eps + fat;
}

}  // namespace

bool Region::contains(const Point& p) const {
    for (const auto& part : parts_) {
        const bool hit = std::visit(
            [&](const auto& prim) -> bool {
                using T = std::decay_t<decltype(prim)>;
                if constexpr (std::is_same_v<T, GaugeBall>)
                    return ball_contains(prim, p, open_, 0.0);
                else if constexpr (std::is_same_v<T, DiskStack>)
                    return stack_contains(prim, p, open_, 0.0);
                else if constexpr (std::is_same_v<T, BoxRegion>)
                    return box_contains(prim, p, open_, 0.0);
                else
                    return neighborhood_contains(prim, p, open_, 0.0);
            },
            part);
        if (hit) return true;
    }
    return false;
}

bool Region::contains_fat(const Point& p, double tol) const {
    for (const auto& part : parts_) {
        const bool hit = std::visit(
            [&](const auto& prim) -> bool {
                using T = std::decay_t<decltype(prim)>;
                if constexpr (std::is_same_v<T, GaugeBall>)
                    return ball_contains(prim, p, open_, tol);
                else if constexpr (std::is_same_v<T, DiskStack>)
                    return stack_contains(prim, p, open_, tol);
                else if constexpr (std::is_same_v<T, BoxRegion>)
                    return box_contains(prim, p, open_, tol);
                else
                    return neighborhood_contains(prim, p, open_, tol);
            },
            part);
        if (hit) return true;
    }
    return false;
}

// ---------------------------------------------------------------- factories

Region Region::gauge_ball(const Point& c, double r, bool open) {
    if (r <= 0.0) throw std::invalid_argument("gauge_ball: radius must be positive");
    Region e;
    e.parts_.push_back(GaugeBall{c, r});
    e.open_ = open;
    return e;
}

Region Region::disk_stack(double r, double R, double t, double thickness, bool open) {
    if (r <= 0.0 || R <= 0.0 || t <= 0.0 || thickness < 0.0)
        throw std::invalid_argument("disk_stack: want r,R,t > 0 and thickness >= 0");
    Region e;
    e.parts_.push_back(DiskStack{r, R, t, thickness});
    e.open_ = open;
    return e;
}

Region Region::box(const Point& lo, const Point& hi, bool open) {
    if (!(lo.x < hi.x && lo.y < hi.y && lo.z < hi.z))
        throw std::invalid_argument("box: lo must be < hi componentwise");
    Region e;
    e.parts_.push_back(BoxRegion{lo, hi});
    e.open_ = open;
    return e;
}

Region Region::left_neighborhood(Region inner, double eps) {
    if (eps <= 0.0) throw std::invalid_argument("left_neighborhood: eps must be positive");
    Region e;
    e.open_ = inner.open();
    LeftNeighborhood n;
    n.inner = std::make_shared<const Region>(std::move(inner));
    n.eps = eps;
    const double spacing = std::max(eps / 6.0, 1e-3);
    n.inner_boundary = std::make_shared<const DistanceCloud>(
        n.inner->boundary_cloud(spacing), std::max(spacing * 2.0, 1e-3));
    e.parts_.push_back(std::move(n));
    return e;
}

Region Region::union_of(std::vector<Region> parts) {
    if (parts.empty()) throw std::invalid_argument("union_of: empty part list");
    Region e;
    e.open_ = parts.front().open();
    for (Region& r : parts)
        for (auto& p : r.parts_) e.parts_.push_back(std::move(p));
    return e;
}

// ---------------------------------------------------------------- bounding box

namespace {

BoxDomain ball_bbox(const GaugeBall& b) {
    // Box of c * B_r(0): the z extent of B_r(0) is r^2/4 and the left
    // translation adds the twist bound r(|cx|+|cy|)/2.
    const double r = b.radius;
    const double zslack = r * r / 4.0 + 0.5 * r * (std::fabs(b.center.x) + std::fabs(b.center.y));
    return {{b.center.x - r, b.center.y - r, b.center.z - zslack},
            {b.center.x + r, b.center.y + r, b.center.z + zslack}};
}

BoxDomain stack_bbox(const DiskStack& s) {
    const double rr = std::max(s.r, s.R);
    return {{-rr, -rr, -s.thickness}, {rr, rr, s.t + s.thickness}};
}

BoxDomain merge_box(const BoxDomain& a, const BoxDomain& b) {
    return {{std::min(a.lo.x, b.lo.x), std::min(a.lo.y, b.lo.y), std::min(a.lo.z, b.lo.z)},
            {std::max(a.hi.x, b.hi.x), std::max(a.hi.y, b.hi.y), std::max(a.hi.z, b.hi.z)}};
}

BoxDomain neighborhood_bbox(const LeftNeighborhood& n) {
    BoxDomain b = n.inner->bounding_box();
    const double e = n.eps;
    const double xymax = std::max({std::fabs(b.lo.x), std::fabs(b.hi.x),
                                   std::fabs(b.lo.y), std::fabs(b.hi.y)}) + e;
    const double zslack = e * e / 4.0 + e * xymax;
    return {{b.lo.x - e, b.lo.y - e, b.lo.z - zslack},
            {b.hi.x + e, b.hi.y + e, b.hi.z + zslack}};
}

}  // namespace

BoxDomain Region::bounding_box() const {
    bool first = true;
    BoxDomain out{};
    for (const auto& part : parts_) {
        BoxDomain b = std::visit(
            [](const auto& prim) -> BoxDomain {
                using T = std::decay_t<decltype(prim)>;
                if constexpr (std::is_same_v<T, GaugeBall>)
                    return ball_bbox(prim);
                else if constexpr (std::is_same_v<T, DiskStack>)
                    return stack_bbox(prim);
                else if constexpr (std::is_same_v<T, BoxRegion>)
                    return BoxDomain{prim.lo, prim.hi};
                else
                    return neighborhood_bbox(prim);
            },
            part);
        out = first ? b : merge_box(out, b);
        first = false;
    }
    return out;
}

// ---------------------------------------------------------------- boundary clouds

namespace {

void ball_boundary(const GaugeBall& b, double spacing, std::vector<Point>& out) {
    const double r = b.radius;
    const int nu = std::max(12, static_cast<int>(std::ceil(4.0 * r / spacing)));
    for (int iu = 0; iu <= nu; ++iu) {
        const double u = -1.0 + 2.0 * iu / nu;
        const double zeta = u * r * r / 4.0;
        const double rho = std::pow(std::max(0.0, r * r * r * r - 16.0 * zeta * zeta), 0.25);
        const int nphi = std::max(8, static_cast<int>(std::ceil(2.0 * kPi * std::max(rho, 0.05 * r) / spacing)));
        for (int ip = 0; ip < nphi; ++ip) {
            const double phi = 2.0 * kPi * ip / nphi;
            out.push_back(mul(b.center, {rho * std::cos(phi), rho * std::sin(phi), zeta}));
        }
    }
}

void disk_fill(double radius, double z, double spacing, std::vector<Point>& out) {
    const int nr = std::max(2, static_cast<int>(std::ceil(radius / spacing)));
    for (int ir = 0; ir <= nr; ++ir) {
        const double rho = radius * ir / nr;
        const int nphi = std::max(1, static_cast<int>(std::ceil(2.0 * kPi * std::max(rho, spacing * 0.5) / spacing)));
        for (int ip = 0; ip < nphi; ++ip) {
            const double phi = 2.0 * kPi * (ip + 0.5 * (ir % 2)) / nphi;
            out.push_back({rho * std::cos(phi), rho * std::sin(phi), z});
        }
    }
}

void stack_boundary(const DiskStack& s, double spacing, std::vector<Point>& out) {
    auto cylinder = [&](double radius, double a, double b) {
        disk_fill(radius, a, spacing, out);
        if (b > a) {
            disk_fill(radius, b, spacing, out);
            const int nz = std::max(1, static_cast<int>(std::ceil((b - a) / spacing)));
            const int nphi = std::max(8, static_cast<int>(std::ceil(2.0 * kPi * radius / spacing)));
            for (int iz = 0; iz <= nz; ++iz)
                for (int ip = 0; ip < nphi; ++ip) {
                    const double phi = 2.0 * kPi * ip / nphi;
                    out.push_back({radius * std::cos(phi), radius * std::sin(phi),
                                   a + (b - a) * iz / nz});
                }
        }
    };
    cylinder(s.r, -s.thickness, 0.0);
    cylinder(s.R, s.t, s.t + s.thickness);
}

void box_boundary(const BoxRegion& b, double spacing, std::vector<Point>& out) {
    auto face = [&](int axis, double v) {
        const double ax0 = axis == 0 ? b.lo.y : b.lo.x;
        const double ax1 = axis == 0 ? b.hi.y : b.hi.x;
        const double bx0 = axis == 2 ? b.lo.y : b.lo.z;
        const double bx1 = axis == 2 ? b.hi.y : b.hi.z;
        const int na = std::max(1, static_cast<int>(std::ceil((ax1 - ax0) / spacing)));
        const int nb = std::max(1, static_cast<int>(std::ceil((bx1 - bx0) / spacing)));
        for (int ia = 0; ia <= na; ++ia)
            for (int ib = 0; ib <= nb; ++ib) {
                const double a = ax0 + (ax1 - ax0) * ia / na;
                const double c = bx0 + (bx1 - bx0) * ib / nb;
                if (axis == 0) out.push_back({v, a, c});
                else if (axis == 1) out.push_back({a, v, c});
                else out.push_back({a, c, v});
            }
    };
    face(0, b.lo.x);
    face(0, b.hi.x);
    face(1, b.lo.y);
    face(1, b.hi.y);
    face(2, b.lo.z);
    face(2, b.hi.z);
}

void neighborhood_boundary(const LeftNeighborhood& n, double spacing,
                           std::vector<Point>& out) {
    const auto& cloud = n.inner_boundary;
    std::vector<Point> base = n.inner->boundary_cloud(std::max(spacing, n.eps / 4.0));
    base = thin_cloud(base, std::max(spacing, n.eps / 4.0));
    // directions on the gauge eps-sphere
    std::vector<Point> dirs;
    const double e = n.eps;
    const int nu = 9;
    for (int iu = 0; iu <= nu; ++iu) {
        const double u = -1.0 + 2.0 * iu / nu;
        const double zeta = u * e * e / 4.0;
        const double rho = std::pow(std::max(0.0, e * e * e * e - 16.0 * zeta * zeta), 0.25);
        const int nphi = std::max(6, static_cast<int>(std::ceil(16.0 * rho / e)));
        for (int ip = 0; ip < nphi; ++ip) {
            const double phi = 2.0 * kPi * ip / nphi;
            dirs.push_back({rho * std::cos(phi), rho * std::sin(phi), zeta});
        }
    }
    std::vector<Point> pushed;
    for (const Point& q : base)
        for (const Point& g : dirs) pushed.push_back(mul(q, inv(g)));
    for (const Point& y : pushed) {
        if (n.inner->contains(y)) continue;
        const double d = region_distance(y, *n.inner, *cloud, Metric::left, e * 1.5);
        if (d >= e * 0.95 && d <= e * 1.05) out.push_back(y);
    }
}

}  // namespace

std::vector<Point> Region::boundary_cloud(double spacing) const {
    if (spacing <= 0.0) throw std::invalid_argument("boundary_cloud: spacing must be positive");
    std::vector<Point> out;
    for (const auto& part : parts_)
        std::visit(
            [&](const auto& prim) {
                using T = std::decay_t<decltype(prim)>;
                if constexpr (std::is_same_v<T, GaugeBall>)
                    ball_boundary(prim, spacing, out);
                else if constexpr (std::is_same_v<T, DiskStack>)
                    stack_boundary(prim, spacing, out);
                else if constexpr (std::is_same_v<T, BoxRegion>)
                    box_boundary(prim, spacing, out);
                else
                    neighborhood_boundary(prim, spacing, out);
            },
            part);
    if (out.empty()) throw std::runtime_error("boundary_cloud: empty boundary sample");
    if (out.size() > 400000) out = thin_cloud(out, spacing);
    return out;
}

void Region::horizontal_hits(const Point& p, double cos_t, double sin_t,
                             std::vector<double>& out) const {
    const double rate = horiz_line_zrate(p, cos_t, sin_t);
    if (std::fabs(rate) < 1e-14) return;
    for (const auto& part : parts_) {
        if (const DiskStack* s = std::get_if<DiskStack>(&part)) {
            if (s->thickness <= 0.0) {
                out.push_back((0.0 - p.z) / rate);
                out.push_back((s->t - p.z) / rate);
            } else {
                out.push_back((-0.5 * s->thickness - p.z) / rate);
                out.push_back((s->t + 0.5 * s->thickness - p.z) / rate);
            }
        }
    }
}

Region Region::dilated(double lambda) const {
    if (lambda <= 0.0) throw std::invalid_argument("dilated: lambda must be positive");
    Region e;
    e.open_ = open_;
    for (const auto& part : parts_)
        e.parts_.push_back(std::visit(
            [&](const auto& prim) -> Primitive {
                using T = std::decay_t<decltype(prim)>;
                if constexpr (std::is_same_v<T, GaugeBall>)
                    return GaugeBall{dilate(lambda, prim.center), lambda * prim.radius};
                else if constexpr (std::is_same_v<T, DiskStack>)
                    return DiskStack{lambda * prim.r, lambda * prim.R,
                                     lambda * lambda * prim.t,
                                     lambda * lambda * prim.thickness};
                else if constexpr (std::is_same_v<T, BoxRegion>)
                    return BoxRegion{dilate(lambda, prim.lo), dilate(lambda, prim.hi)};
                else {
                    LeftNeighborhood n;
                    n.inner = std::make_shared<const Region>(prim.inner->dilated(lambda));
                    n.eps = lambda * prim.eps;
                    return n;
                }
            },
            part));
    return e;
}

// ---------------------------------------------------------------- sampling

namespace {

Point sample_primitive(const Region::Primitive& part, bool open, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (const GaugeBall* b = std::get_if<GaugeBall>(&part)) {
        // rejection inside the gauge ball around the center
        for (int tries = 0; tries < 1000; ++tries) {
            const double r = b->radius;
            Point h{r * (2.0 * unit(rng) - 1.0), r * (2.0 * unit(rng) - 1.0),
                    r * r / 4.0 * (2.0 * unit(rng) - 1.0)};
            if (gauge(h) < r * (1.0 - 1e-9)) return mul(b->center, h);
        }
        return b->center;
    }
    if (const DiskStack* s = std::get_if<DiskStack>(&part)) {
        const double area_r = s->r * s->r;
        const double area_R = s->R * s->R;
        const bool lower = unit(rng) * (area_r + area_R) < area_r;
        const double radius = lower ? s->r : s->R;
        const double rho = radius * std::sqrt(unit(rng)) * (1.0 - 1e-9);
        const double phi = 2.0 * kPi * unit(rng);
        double z;
        if (s->thickness <= 0.0) {
            z = lower ? 0.0 : s->t;
        } else {
            const double f = unit(rng);
            z = lower ? -s->thickness * (0.05 + 0.9 * f)
                      : s->t + s->thickness * (0.05 + 0.9 * f);
        }
        return {rho * std::cos(phi), rho * std::sin(phi), z};
    }
    if (const BoxRegion* b = std::get_if<BoxRegion>(&part)) {
        const double m = open ? 1e-9 : 0.0;
        return {std::lerp(b->lo.x, b->hi.x, m + (1.0 - 2.0 * m) * unit(rng)),
                std::lerp(b->lo.y, b->hi.y, m + (1.0 - 2.0 * m) * unit(rng)),
                std::lerp(b->lo.z, b->hi.z, m + (1.0 - 2.0 * m) * unit(rng))};
    }
    const auto& n = std::get<LeftNeighborhood>(part);
    const BoxDomain bb = neighborhood_bbox(n);
    for (int tries = 0; tries < 4000; ++tries) {
        Point p{std::lerp(bb.lo.x, bb.hi.x, unit(rng)), std::lerp(bb.lo.y, bb.hi.y, unit(rng)),
                std::lerp(bb.lo.z, bb.hi.z, unit(rng))};
        if (neighborhood_contains(n, p, open, 0.0)) return p;
    }
    throw std::runtime_error("sample_interior: rejection sampling failed for neighborhood");
}

}  // namespace

std::vector<Point> Region::sample_interior(std::size_t count, std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    std::vector<Point> out;
    out.reserve(count);
    std::uniform_int_distribution<std::size_t> pick(0, parts_.size() - 1);
    for (std::size_t i = 0; i < count; ++i)
        out.push_back(sample_primitive(parts_[pick(rng)], open_, rng));
    return out;
}

bool Region::lattice_connected(int res) const {
    const BoxDomain bb = bounding_box();
    const int n = std::max(8, res);
    const double hx = (bb.hi.x - bb.lo.x) / (n - 1);
    const double hy = (bb.hi.y - bb.lo.y) / (n - 1);
    const double hz = (bb.hi.z - bb.lo.z) / (n - 1);
    const double fat = 0.51 * std::max({hx, hy, hz});
    std::vector<char> mask(static_cast<std::size_t>(n) * n * n, 0);
    auto id = [n](int i, int j, int k) {
        return (static_cast<std::size_t>(k) * n + j) * n + i;
    };
    std::size_t total = 0;
    std::size_t seed_cell = 0;
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const Point p{bb.lo.x + i * hx, bb.lo.y + j * hy, bb.lo.z + k * hz};
                if (contains_fat(p, fat)) {
                    mask[id(i, j, k)] = 1;
                    seed_cell = id(i, j, k);
                    ++total;
                }
            }
    if (total == 0) return false;
    std::vector<char> seen(mask.size(), 0);
    std::queue<std::size_t> q;
    q.push(seed_cell);
    seen[seed_cell] = 1;
    std::size_t reached = 0;
    while (!q.empty()) {
        const std::size_t c = q.front();
        q.pop();
        ++reached;
        const int i = static_cast<int>(c % n);
        const int j = static_cast<int>((c / n) % n);
        const int k = static_cast<int>(c / (static_cast<std::size_t>(n) * n));
        const int di[6] = {1, -1, 0, 0, 0, 0};
        const int dj[6] = {0, 0, 1, -1, 0, 0};
        const int dk[6] = {0, 0, 0, 0, 1, -1};
        for (int d = 0; d < 6; ++d) {
            const int ii = i + di[d], jj = j + dj[d], kk = k + dk[d];
            if (ii < 0 || jj < 0 || kk < 0 || ii >= n || jj >= n || kk >= n) continue;
            const std::size_t cc = id(ii, jj, kk);
            if (mask[cc] && !seen[cc]) {
                seen[cc] = 1;
                q.push(cc);
            }
        }
    }
    return reached == total;
}

double region_distance(const Point& p, const Region& e, const DistanceCloud& boundary,
                       Metric metric, double stop_above) {
    if (e.contains(p)) return 0.0;
    return boundary.min_dist(p, metric, stop_above);
}

}  // namespace hqc
