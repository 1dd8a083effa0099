#include <doctest.h>

#include <cmath>
#include <memory>

#include "semilag/diagnostics.hpp"
#include "semilag/errors.hpp"

using namespace semilag;

namespace {

std::shared_ptr<const LatticeSpec> line(double k, double lo, double hi, double pad) {
    return std::make_shared<const LatticeSpec>(1, k, Vec(lo), Vec(hi), pad);
}

}  // namespace

TEST_CASE("norms") {
    const auto s = line(0.25, -1.0, 1.0, 1.0);
    const auto u = project(s, [](Vec x) { return 3.0 * x.x; });
    CHECK(sup_norm(u, Region::Box) == 3.0);
    CHECK(sup_norm(u) == 6.0);
    CHECK(lipschitz_estimate(u) == doctest::Approx(3.0));
    const auto q = std::make_shared<const LatticeSpec>(2, 0.1, Vec(-1, -1), Vec(1, 1), 0.0);
    CHECK(lipschitz_estimate(project(q, [](Vec x) { return 3.0 * x.x - 4.0 * x.y; })) == doctest::Approx(5.0));
}

TEST_CASE("discrete semiconcavity") {
    const auto s = line(0.1, -1.0, 1.0, 0.3);
    CHECK(discrete_semiconcavity_constant(project(s, [](Vec x) { return -std::abs(x.x); }), 3) <= 1e-12);
    CHECK(discrete_semiconcavity_constant(project(s, [](Vec x) { return 0.5 * x.x * x.x; }), 3) ==
          doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(discrete_semiconcavity_constant(project(s, [](Vec x) { return 2.0 - x.x; }), 3)) < 1e-9);
    // |x| has second difference 2/k at the kink for the unit shift
    CHECK(discrete_semiconcavity_constant(project(s, [](Vec x) { return std::abs(x.x); }), 1) ==
          doctest::Approx(2.0 / 0.1));
    const auto q = std::make_shared<const LatticeSpec>(2, 0.1, Vec(-1, -1), Vec(1, 1), 0.3);
    CHECK(discrete_semiconcavity_constant(project(q, [](Vec x) { return 0.5 * norm2(x); }), 2) ==
          doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("one-sided Lipschitz constants") {
    const auto m = make_schrodinger(1, {}, 3.0);
    // eps / k = 50 keeps the nodal rule's gradient error far below the tolerances
    const auto s = line(0.005, -1.0, 1.0, 0.5);
    const double eps = 0.25;
    PairSampling ps;
    ps.pairs = 2000;
    ps.seed = 4;
    ps.min_sep = 0.05;
    SUBCASE("concave quadratic gives -1") {
        const SmoothedField sf(project(s, [](Vec x) { return -0.5 * x.x * x.x; }), eps);
        CHECK(osl_constant(sf, m, ps) == doctest::Approx(-1.0).epsilon(1e-3));
    }
    SUBCASE("convex quadratic gives +1") {
        const SmoothedField sf(project(s, [](Vec x) { return 0.5 * x.x * x.x; }), eps);
        CHECK(osl_constant(sf, m, ps) == doctest::Approx(1.0).epsilon(1e-3));
    }
    SUBCASE("-|x| is compressive on well separated pairs") {
        const SmoothedField sf(project(s, [](Vec x) { return -std::abs(x.x); }), eps);
        ps.min_sep = 0.2;
        CHECK(osl_constant(sf, m, ps) <= 1e-6);
    }
    SUBCASE("same seed, same answer") {
        const SmoothedField sf(project(s, [](Vec x) { return std::sin(3 * x.x); }), 0.2);
        CHECK(osl_constant(sf, m, ps) == osl_constant(sf, m, ps));
    }
    SUBCASE("explicit points") {
        const std::vector<Vec> p{Vec(0.0), Vec(1.0), Vec(3.0)};
        const std::vector<Vec> v{Vec(0.0), Vec(-1.0), Vec(-1.0)};
        // pairs: (0,1): -1, (0,2): -1/3, (1,2): 0
        CHECK(osl_constant(p, v, 0.0) == doctest::Approx(0.0));
        CHECK(osl_constant(p, v, 1.5) == doctest::Approx(0.0));
        CHECK(osl_constant(p, v, 2.5) == doctest::Approx(-1.0 / 3.0));
    }
}

TEST_CASE("errors against exact solutions") {
    const auto s = line(0.1, -1.0, 1.0, 0.5);
    const auto u = project(s, [](Vec x) { return x.x * x.x; });
    CHECK(sup_error(u, [](Vec x) { return x.x * x.x; }) == 0.0);
    CHECK(sup_error(u, [](Vec x) { return x.x * x.x + 0.125; }) == doctest::Approx(0.125));

    const auto fine = line(0.005, -1.0, 1.0, 0.5);
    const SmoothedField affine(project(fine, [](Vec x) { return 2.0 * x.x + 1.0; }), 0.25);
    const std::vector<Vec> samples{Vec(-0.5), Vec(0.0), Vec(0.7)};
    CHECK(gradient_error(affine, [](Vec) { return Vec(2.0); }, samples) <= 1e-6);

    const SmoothedField kink(project(fine, [](Vec x) { return -std::abs(x.x); }), 0.25);
    const std::vector<Vec> near{Vec(0.0), Vec(0.7), Vec(-0.8)};
    const KinkFilter filter{{Vec(0.0)}, 0.6};
    CHECK(gradient_error(kink, [](Vec x) { return Vec(x.x > 0 ? -1.0 : 1.0); }, near, filter) <= 1e-6);
}

TEST_CASE("rate regression") {
    std::vector<std::pair<double, double>> lin, half;
    for (double h : {0.1, 0.05, 0.025, 0.0125}) {
        lin.emplace_back(h, 3.0 * h);
        half.emplace_back(h, 2.0 * std::sqrt(h));
    }
    CHECK(rate_regression(lin) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rate_regression(half) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(rate_regression({{0.1, 1.0}}), Error);
    CHECK_THROWS_AS(rate_regression({{0.1, 1.0}, {0.1, 2.0}}), Error);
    CHECK_THROWS_AS(rate_regression({{0.1, 1.0}, {0.05, 0.0}}), Error);
}
