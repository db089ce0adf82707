#pragma once

// Exact arithmetic on the first Heisenberg group: R^3 with the product
//   (x1,y1,z1)*(x2,y2,z2) = (x1+x2, y1+y2, z1+z2+(x1*y2-x2*y1)/2),
// the Koranyi gauge, the induced left/right metrics, anisotropic
// dilations and horizontal-plane geometry. All value types, no state.

#include <cmath>

namespace hqc {

struct Point {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

// A horizontal direction (a,b,0) in the plane H_0 = {z = 0}.
struct HorizontalVec {
    double a = 0.0;
    double b = 0.0;
};

inline Point mul(const Point& p, const Point& q) {
    return {p.x + q.x, p.y + q.y, p.z + q.z + 0.5 * (p.x * q.y - q.x * p.y)};
}

inline Point inv(const Point& p) { return {-p.x, -p.y, -p.z}; }

// Koranyi gauge |p|_G = ((x^2+y^2)^2 + 16 z^2)^(1/4).
inline double gauge(const Point& p) {
    const double s = p.x * p.x + p.y * p.y;
    return std::sqrt(std::sqrt(s * s + 16.0 * p.z * p.z));
}

// Left-invariant metric d(p,q) = |p^-1 * q|_G.
inline double dist_left(const Point& p, const Point& q) {
    return gauge(mul(inv(p), q));
}

// Right-invariant metric d~(p,q) = |p * q^-1|_G.
inline double dist_right(const Point& p, const Point& q) {
    return gauge(mul(p, inv(q)));
}

// Anisotropic dilation (x,y,z) -> (lx, ly, l^2 z); gauge is 1-homogeneous.
inline Point dilate(double lambda, const Point& p) {
    return {lambda * p.x, lambda * p.y, lambda * lambda * p.z};
}

// The point p*(a,b,0) of the horizontal plane H_p = p * H_0.
inline Point horiz_point(const Point& p, const HorizontalVec& w) {
    return {p.x + w.a, p.y + w.b, p.z + 0.5 * (p.x * w.b - w.a * p.y)};
}

// Membership test for q in H_p up to |.| <= tol on the plane defect.
inline bool in_horiz_plane(const Point& p, const Point& q, double tol) {
    const double defect =
        q.z - p.z - 0.5 * (p.x * (q.y - p.y) - (q.x - p.x) * p.y);
    return std::fabs(defect) <= tol;
}

// Straight line s -> p*(s cos(theta), s sin(theta), 0). Every point of it
// lies in the horizontal plane of every other point of it, which is what
// collapses pair searches over (p,q) to one-parameter ray scans.
inline Point horiz_line(const Point& p, double theta, double s) {
    return horiz_point(p, {s * std::cos(theta), s * std::sin(theta)});
}

// Signed z-rate of horiz_line(p,theta,s) per unit s; z is linear in s.
inline double horiz_line_zrate(const Point& p, double cos_t, double sin_t) {
    return 0.5 * (p.x * sin_t - p.y * cos_t);
}

}  // namespace hqc
