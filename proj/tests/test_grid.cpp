#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>

#include "hqc/grid.hpp"

using namespace hqc;

namespace {

std::mt19937_64 rng(77001);

GridField random_field(const BoxDomain& dom, const GridDims& dims, double k = 0.0) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    GridField f(dom, dims, k);
    for (double& v : f.values()) v = d(rng);
    return f;
}

}  // namespace

TEST_CASE("build_field samples the generator at nodes") {
    const BoxDomain dom{{-1, -1, -1}, {1, 1, 1}};
    GridField zero = build_field(dom, {5, 5, 5}, [](const Point&) { return 0.0; }, 1.0);
    for (double v : zero.values()) CHECK(v == 0.0);

    GridField g = build_field(dom, {3, 3, 3}, [](const Point& p) { return gauge(p); }, 2.0);
    CHECK(g(1, 1, 1) == 0.0);  // center node

    GridField hump = build_field(dom, {3, 3, 5},
                                 [](const Point& p) { return std::fabs(1.0 - p.z * p.z); }, 3.0);
    CHECK(hump(1, 1, 3) == doctest::Approx(0.75));  // node (0,0,0.5)

    CHECK_THROWS(build_field(dom, {3, 3, 3},
                             [](const Point&) { return std::nan(""); }, 0.0));
}

TEST_CASE("eval: nodes exact, exterior plateau, trilinear reproduction") {
    const BoxDomain dom{{-1, -1, -1}, {1, 1, 1}};
    GridField f = random_field(dom, {7, 6, 5}, 42.0);
    for (int k = 0; k < f.nz(); ++k)
        for (int j = 0; j < f.ny(); ++j)
            for (int i = 0; i < f.nx(); ++i)
                CHECK(f.eval(f.node(i, j, k)) == f(i, j, k));

    CHECK(f.eval({5, 0, 0}) == 42.0);
    CHECK(f.eval({0, 0, -1.1}) == 42.0);

    // trilinear polynomials interpolate exactly
    auto tri = [](const Point& p) {
        return 0.3 - 1.2 * p.x + 0.7 * p.y - 0.1 * p.z + 0.9 * p.x * p.y -
               0.4 * p.y * p.z + 0.2 * p.x * p.z + 1.7 * p.x * p.y * p.z;
    };
    GridField t = build_field(dom, {6, 7, 8}, tri, 0.0);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (int it = 0; it < 3000; ++it) {
        const Point p{d(rng), d(rng), d(rng)};
        CHECK(t.eval(p) == doctest::Approx(tri(p)).epsilon(1e-12));
    }
    // the spec's linear probe
    GridField lin = build_field(dom, {5, 5, 5}, [](const Point& p) { return p.x; }, 0.0);
    CHECK(lin.eval({0.25, 0.1, 0.0}) == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("eval is monotone in node values") {
    const BoxDomain dom{{-1, -1, -1}, {1, 1, 1}};
    GridField f = random_field(dom, {5, 5, 5});
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::uniform_int_distribution<int> ni(0, 4);
    for (int it = 0; it < 300; ++it) {
        GridField g = f;
        g.at(ni(rng), ni(rng), ni(rng)) += 0.5;
        for (int probes = 0; probes < 50; ++probes) {
            const Point p{d(rng), d(rng), d(rng)};
            CHECK(g.eval(p) >= f.eval(p) - 1e-15);
        }
    }
}

TEST_CASE("horizontal gradient: linear and z fields") {
    const BoxDomain dom{{-2, -2, -2}, {2, 2, 2}};
    GridField fx = build_field(dom, {21, 21, 21}, [](const Point& p) { return p.x; }, 0.0);
    const HorizGrad g1 = horiz_grad(fx, {0.3, -0.2, 0.5});
    CHECK(g1.x1 == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(g1.x2 == doctest::Approx(0.0).epsilon(1e-10));
    CHECK_FALSE(g1.one_sided);

    GridField fz = build_field(dom, {21, 21, 21}, [](const Point& p) { return p.z; }, 0.0);
    const HorizGrad g2 = horiz_grad(fz, {1, 2, 0});
    CHECK(g2.x1 == doctest::Approx(-1.0).epsilon(1e-10));  // X1 z = -y/2
    CHECK(g2.x2 == doctest::Approx(0.5).epsilon(1e-10));   // X2 z = x/2

    // near-boundary probes flag the one-sided fallback
    const HorizGrad g3 = horiz_grad(fx, {1.95, 0, 0});
    CHECK(g3.one_sided);
}

TEST_CASE("horizontal gradient matches the analytic oracle on xyz") {
    const BoxDomain dom{{-1, -1, -1}, {1, 1, 1}};
    auto gen = [](const Point& p) { return p.x * p.y * p.z; };
    // X1 u = yz - (y/2) xy, X2 u = xz + (x/2) xy
    auto x1 = [](const Point& p) { return p.y * p.z - 0.5 * p.y * p.x * p.y; };
    auto x2 = [](const Point& p) { return p.x * p.z + 0.5 * p.x * p.x * p.y; };
    GridField f = build_field(dom, {41, 41, 41}, gen, 0.0);
    const double h = f.hx();
    std::uniform_real_distribution<double> d(-0.5, 0.5);
    for (int it = 0; it < 200; ++it) {
        const Point p{d(rng), d(rng), d(rng)};
        const HorizGrad g = horiz_grad(f, p);
        CHECK(std::fabs(g.x1 - x1(p)) <= 25.0 * h * h);
        CHECK(std::fabs(g.x2 - x2(p)) <= 25.0 * h * h);
    }
}

TEST_CASE("horizontal gradient converges at second order") {
    auto gen = [](const Point& p) {
        return std::sin(p.x) * std::cos(p.y) + 0.3 * p.z * p.z + 0.2 * p.x * p.z;
    };
    auto ux = [](const Point& p) { return std::cos(p.x) * std::cos(p.y) + 0.2 * p.z; };
    auto uy = [](const Point& p) { return -std::sin(p.x) * std::sin(p.y); };
    auto uz = [](const Point& p) { return 0.6 * p.z + 0.2 * p.x; };
    auto x1 = [&](const Point& p) { return ux(p) - 0.5 * p.y * uz(p); };
    auto x2 = [&](const Point& p) { return uy(p) + 0.5 * p.x * uz(p); };

    const BoxDomain dom{{-1, -1, -1}, {1, 1, 1}};
    const Point probes[] = {{0.11, -0.23, 0.31}, {-0.41, 0.17, -0.05}, {0.33, 0.29, -0.27}};
    double errs[3];
    int dims[3] = {21, 41, 81};
    for (int lvl = 0; lvl < 3; ++lvl) {
        GridField f = build_field(dom, {dims[lvl], dims[lvl], dims[lvl]}, gen, 0.0);
        double e = 0.0;
        for (const Point& p : probes) {
            const HorizGrad g = horiz_grad(f, p);
            e = std::max({e, std::fabs(g.x1 - x1(p)), std::fabs(g.x2 - x2(p))});
        }
        errs[lvl] = e;
    }
    const double slope1 = std::log2(errs[0] / errs[1]);
    const double slope2 = std::log2(errs[1] / errs[2]);
    CHECK(slope1 > 1.7);
    CHECK(slope1 < 2.3);
    CHECK(slope2 > 1.7);
    CHECK(slope2 < 2.3);
}

TEST_CASE("sublevel extraction") {
    const BoxDomain dom{{-2, -2, -2}, {2, 2, 2}};
    GridField one = build_field(dom, {5, 5, 5}, [](const Point&) { return 1.0; }, 0.0);
    CHECK(sublevel_extract(one, 0.0, false).empty());
    GridField zero = build_field(dom, {5, 5, 5}, [](const Point&) { return 0.0; }, 0.0);
    CHECK(sublevel_extract(zero, 0.0, false).size() == zero.size());
    CHECK(sublevel_extract(zero, 0.0, true).empty());

    GridField hump = build_field(dom, {5, 5, 5},
                                 [](const Point& p) { return std::fabs(1.0 - p.z * p.z); }, 0.0);
    const auto zs = sublevel_extract(hump, 0.0, false);
    CHECK(!zs.empty());
    for (const Point& p : zs) CHECK(std::fabs(std::fabs(p.z) - 1.0) < 1e-12);
}

TEST_CASE("linf_diff and file round trip") {
    const BoxDomain dom{{-1.25, -0.5, 0.0}, {0.75, 1.5, 2.0}};
    GridField f = random_field(dom, {9, 8, 7}, -1.7182818);
    CHECK(linf_diff(f, f) == 0.0);
    GridField g = f;
    for (double& v : g.values()) v += 0.5;
    CHECK(linf_diff(f, g) == doctest::Approx(0.5).epsilon(1e-15));

    const std::string path = "roundtrip_test.hhfield";
    save_field(f, path);
    GridField back = load_field(path);
    REQUIRE(back.size() == f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        CHECK(back.values()[i] == f.values()[i]);  // bit-exact
    CHECK(back.exterior_k() == f.exterior_k());
    CHECK(back.domain().lo.x == f.domain().lo.x);
    CHECK(back.domain().hi.z == f.domain().hi.z);
    std::remove(path.c_str());

    GridField h(dom, {4, 4, 4}, 0.0);
    CHECK_THROWS(linf_diff(f, h));
    CHECK_THROWS(load_field("does_not_exist.hhfield"));
}

TEST_CASE("slice export row count") {
    const BoxDomain dom{{-1, -1, -1}, {1, 1, 1}};
    GridField f = random_field(dom, {6, 5, 4});
    const std::string path = "slice_test.csv";
    write_slice_csv(f, {'z', 0.5}, path);
    std::ifstream is(path);
    std::string line;
    int rows = 0;
    while (std::getline(is, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 1 + 6 * 5);  // header + nx*ny
    std::remove(path.c_str());
    CHECK_THROWS(write_slice_csv(f, {'z', 7.0}, path));
}
