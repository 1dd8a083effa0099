#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include "oracles.hpp"
#include "semilag/errors.hpp"
#include "semilag/mollify.hpp"

using namespace semilag;

namespace {

std::shared_ptr<const LatticeSpec> line(double k, double lo, double hi, double pad) {
    return std::make_shared<const LatticeSpec>(1, k, Vec(lo), Vec(hi), pad);
}

}  // namespace

TEST_CASE("mollifier constants") {
    const double mass1 = oracle::integrate([](double x) { return oracle::bump(x * x); }, -1.0, 1.0, 1e-12);
    CHECK(mollifier_constant(1) == doctest::Approx(1.0 / mass1).epsilon(1e-9));
    CHECK(mollifier_constant(1) == doctest::Approx(2.25228).epsilon(1e-5));
    // polar coordinates: 2 pi int_0^1 r rho(r) dr
    const double mass2 =
        2.0 * M_PI * oracle::integrate([](double r) { return r * oracle::bump(r * r); }, 0.0, 1.0, 1e-12);
    CHECK(mollifier_constant(2) == doctest::Approx(1.0 / mass2).epsilon(1e-8));

    const auto k1 = mollifier_kernel(0.5, 1);
    // ||rho'||_L1 = 2 rho(0) c_1 / eps
    CHECK(k1.grad_l1 == doctest::Approx(2.0 * std::exp(-1.0) * mollifier_constant(1)).epsilon(1e-12));
    const double g2 = 2.0 * M_PI * oracle::integrate(
                                        [](double r) {
                                            const double q = 1.0 - r * r;
                                            return r < 1.0 ? r * oracle::bump(r * r) * 2.0 * r / (q * q) : 0.0;
                                        },
                                        0.0, 1.0, 1e-12);
    CHECK(mollifier_kernel(1.0, 2).grad_l1 == doctest::Approx(g2 * mollifier_constant(2)).epsilon(1e-6));
}

TEST_CASE("kernel is even and its stencil symmetric") {
    const auto k = mollifier_kernel(0.3, 2);
    CHECK(k(Vec(0.1, -0.2)) == k(Vec(-0.1, 0.2)));
    CHECK(k(Vec(0.3, 0.0)) == 0.0);
    auto spec = std::make_shared<const LatticeSpec>(2, 0.05, Vec(-1, -1), Vec(1, 1), 0.0);
    const SmoothedField sf(project(spec, [](Vec) { return 0.0; }), 0.3);
    const auto& st = sf.stencil();
    double total = 0.0;
    for (std::size_t i = 0; i < st.offset.size(); ++i) {
        total += st.weight[i];
        for (std::size_t j = 0; j < st.offset.size(); ++j)
            if (st.offset[j][0] == -st.offset[i][0] && st.offset[j][1] == -st.offset[i][1])
                CHECK(st.weight[j] == st.weight[i]);
    }
    CHECK(total * 0.05 * 0.05 == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("smoothed values") {
    SUBCASE("constants") {
        const SmoothedField sf(project(line(0.01, -1, 1, 0.3), [](Vec) { return 5.0; }), 0.2);
        CHECK(std::abs(sf.value(Vec(0.1234)) - 5.0) < 1e-10);
        CHECK(std::abs(sf.value(Vec(-0.98)) - 5.0) < 1e-10);
    }
    // affine reproduction off the nodes is limited by the aliasing of the nodal
    // rule, which decays like exp(-c sqrt(eps / k)); eps / k = 50 is ample
    SUBCASE("linear moment vanishes") {
        const SmoothedField sf(project(line(0.005, -1, 1, 0.3), [](Vec x) { return 3.0 * x.x; }), 0.25);
        CHECK(std::abs(sf.value(Vec(0.2345)) - 3.0 * 0.2345) < 1e-8);
        CHECK(std::abs(sf.gradient(Vec(0.2345)).x - 3.0) < 1e-6);
    }
    SUBCASE("|x| at the origin") {
        const double eps = 0.5;
        const SmoothedField sf(project(line(0.005, -1, 1, 0.5), [](Vec x) { return std::abs(x.x); }), eps);
        const double c1 = 1.0 / oracle::integrate([](double x) { return oracle::bump(x * x); }, -1, 1, 1e-12);
        const double exact =
            2.0 * c1 / eps * oracle::integrate([&](double y) { return y * oracle::bump(y * y / (eps * eps)); }, 0, eps);
        const double v = sf.value(Vec(0.0));
        CHECK(v > 0.0);
        CHECK(v < 0.5);
        CHECK(v == doctest::Approx(exact).epsilon(1e-3));
    }
}

TEST_CASE("smoothed gradients") {
    SUBCASE("odd integrand at a kink") {
        const SmoothedField sf(project(line(0.01, -1, 1, 0.3), [](Vec x) { return -std::abs(x.x); }), 0.2);
        CHECK(std::abs(sf.gradient(Vec(0.0)).x) < 1e-10);
    }
    SUBCASE("quadratic") {
        const SmoothedField sf(project(line(0.01, -2, 2, 0.3), [](Vec x) { return 0.5 * x.x * x.x; }), 0.25);
        CHECK(std::abs(sf.gradient(Vec(1.0)).x - 1.0) < 2e-2);
    }
    SUBCASE("two dimensions, affine") {
        auto spec = std::make_shared<const LatticeSpec>(2, 0.01, Vec(-1, -1), Vec(1, 1), 0.6);
        const SmoothedField sf(project(spec, [](Vec x) { return 2.0 * x.x - x.y; }), 0.5);
        const Vec g = sf.gradient(Vec(0.1, 0.3));
        CHECK(std::abs(g.x - 2.0) < 1e-6);
        CHECK(std::abs(g.y + 1.0) < 1e-6);
        CHECK(std::abs(sf.value(Vec(0.1, 0.3)) - (0.2 - 0.3)) < 1e-8);
    }
}

TEST_CASE("gradient matches finite differences and respects the Lipschitz bound") {
    const double k = 0.005;
    const auto u = project(line(k, -1, 1, 0.3), [](Vec x) { return std::abs(x.x - 0.1) - 0.5 * std::sin(2 * x.x); });
    const SmoothedField sf(u, 0.25);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(-0.95, 0.95);
    for (int i = 0; i < 100; ++i) {
        const double x = U(rng), d = k / 4;
        const double fd = (sf.value(Vec(x + d)) - sf.value(Vec(x - d))) / (2 * d);
        CHECK(std::abs(fd - sf.gradient(Vec(x)).x) <= 1e-4);
    }
    // Lip(u) = 1 + 1 on the box
    double sup = 0.0;
    for (double x = -1.0; x <= 1.0; x += 0.01) sup = std::max(sup, std::abs(sf.gradient(Vec(x)).x));
    CHECK(sup <= 2.0 + 1e-3);
}

TEST_CASE("resolution rule and domain") {
    const auto f = project(line(0.1, -1, 1, 0.0), [](Vec) { return 0.0; });
    CHECK_THROWS_WITH_AS(SmoothedField(f, 0.15), doctest::Contains("mollifier resolution rule"), Error);
    const SmoothedField sf(f, 0.2);
    CHECK_THROWS_AS(sf.value(Vec(1.5)), Error);
    long clamps = 0;
    evaluate_clamped(sf, Vec(1.5), clamps);
    CHECK(clamps == 1);
}
