#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hqc/group.hpp"

using namespace hqc;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::mt19937_64 rng(20240811);

Point random_point(double range = 2.0) {
    std::uniform_real_distribution<double> d(-range, range);
    return {d(rng), d(rng), d(rng)};
}

bool near(const Point& a, const Point& b, double tol = 1e-12) {
    return std::fabs(a.x - b.x) <= tol && std::fabs(a.y - b.y) <= tol &&
           std::fabs(a.z - b.z) <= tol;
}

}  // namespace

TEST_CASE("group multiplication and inverse") {
    CHECK(near(mul({1, 0, 0}, {0, 1, 0}), {1, 1, 0.5}));
    const Point q = random_point();
    CHECK(near(mul({0, 0, 0}, q), q));
    const Point p = random_point();
    CHECK(near(mul(p, inv(p)), {0, 0, 0}, 1e-15));
    CHECK(near(inv({1, 2, 3}), {-1, -2, -3}));
    CHECK(near(inv({0, 0, 0}), {0, 0, 0}));
    CHECK(near(inv(inv(p)), p));
}

TEST_CASE("group associativity, sampled") {
    for (int it = 0; it < 2000; ++it) {
        const Point p = random_point(), q = random_point(), r = random_point();
        CHECK(near(mul(mul(p, q), r), mul(p, mul(q, r)), 1e-12));
    }
}

TEST_CASE("gauge values") {
    CHECK(gauge({1, 0, 0}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(gauge({0, 0, 1}) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(gauge({1, 1, 0}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("metrics: invariances, symmetry, triangle inequality") {
    CHECK(dist_right({1, 0, 0}, {0, 0, 0}) == doctest::Approx(1.0));
    const Point pp = random_point();
    CHECK(dist_left(pp, pp) == 0.0);
    for (int it = 0; it < 2000; ++it) {
        const Point p = random_point(), q = random_point(), g = random_point();
        CHECK(std::fabs(dist_left(mul(g, p), mul(g, q)) - dist_left(p, q)) <= 1e-12);
        CHECK(std::fabs(dist_right(mul(p, g), mul(q, g)) - dist_right(p, q)) <= 1e-12);
        // |inv(v)|_G is computed from the same squares, so symmetry is exact.
        CHECK(dist_left(p, q) == dist_left(q, p));
        CHECK(dist_right(p, q) == dist_right(q, p));
        const Point r = random_point();
        CHECK(dist_left(p, r) <= dist_left(p, q) + dist_left(q, r) + 1e-12);
        CHECK(dist_right(p, r) <= dist_right(p, q) + dist_right(q, r) + 1e-12);
    }
}

TEST_CASE("horizontal plane distance of the disk-stack example") {
    // For p = (1,0,0) and q_t = (0,0,1) the closest point of H_p in the
    // plane {z = 1} sits at distance 2t/sqrt(xp^2+yp^2) = 2. Brute scan.
    const Point p{1, 0, 0};
    const Point qt{0, 0, 1};
    double best = 1e300;
    for (double a = -6.0; a <= 6.0; a += 1e-3) {
        // points of H_p with z == 1: need (xp*b - a*yp)/2 = 1 -> b = 2
        const Point xi = horiz_point(p, {a, 2.0});
        CHECK(xi.z == doctest::Approx(1.0));
        best = std::min(best, dist_left(qt, xi));
    }
    CHECK(best == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("dilation and gauge homogeneity") {
    CHECK(near(dilate(2.0, {1, 1, 1}), {2, 2, 4}));
    const Point p = random_point();
    CHECK(near(dilate(1.0, p), p));
    const Point q{1, 0, 1};
    CHECK(gauge(dilate(3.0, q)) == doctest::Approx(3.0 * gauge(q)).epsilon(1e-14));
    for (int it = 0; it < 500; ++it) {
        const Point r = random_point();
        std::uniform_real_distribution<double> ld(0.0, 3.0);
        const double lam = ld(rng);
        CHECK(gauge(dilate(lam, r)) == doctest::Approx(lam * gauge(r)).epsilon(1e-12));
    }
}

TEST_CASE("horizontal points, planes and lines") {
    CHECK(near(horiz_point({0, 0, 0}, {0.3, -0.7}), {0.3, -0.7, 0}));
    CHECK(near(horiz_point({1, 0, 0}, {0, 1}), {1, 1, 0.5}));
    const Point p = random_point();
    CHECK(near(horiz_point(p, {0, 0}), p));

    CHECK(in_horiz_plane({1, 0, 0}, {1, 1, 0.5}, 0.0));
    CHECK_FALSE(in_horiz_plane({0, 0, 0}, {0, 0, 1}, 1e-9));
    CHECK(in_horiz_plane(p, p, 0.0));

    CHECK(near(horiz_line({0, 0, 0}, 0.0, 1.0), {1, 0, 0}));
    CHECK(near(horiz_line(p, 1.234, 0.0), p));
}

TEST_CASE("horizontal-line closure underwrites the ray reduction") {
    // the spec's fixed probe
    {
        const Point p{1, 2, 3};
        const Point a = horiz_line(p, kPi / 5.0, -0.7);
        const Point b = horiz_line(p, kPi / 5.0, 1.3);
        CHECK(in_horiz_plane(a, b, 1e-12));
        CHECK(in_horiz_plane(b, a, 1e-12));
    }
    // and the sampled property
    std::uniform_real_distribution<double> sd(-3.0, 3.0), td(0.0, kPi);
    for (int it = 0; it < 2000; ++it) {
        const Point p = random_point();
        const double theta = td(rng);
        const Point a = horiz_line(p, theta, sd(rng));
        const Point b = horiz_line(p, theta, sd(rng));
        CHECK(in_horiz_plane(a, b, 1e-12));
        CHECK(in_horiz_plane(b, a, 1e-12));
    }
}
