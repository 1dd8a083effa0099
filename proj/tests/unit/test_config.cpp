#include <doctest.h>

#include <cmath>

#include "semilag/errors.hpp"
#include "semilag/io/config.hpp"
#include "semilag/io/csv.hpp"
#include "semilag/io/expression.hpp"
#include "semilag/io/svg.hpp"

using namespace semilag;

TEST_CASE("config parsing") {
    const RunConfig c = io::parse_config(R"(
# comment
model.name = bethe-salpeter
model.potential.type = quadratic
model.potential.omega = 0.5
lattice.dim = 2
lattice.lo = -1, -2
lattice.hi = 1, 2   # trailing comment
lattice.k = 0.05
lattice.padding = auto
time.T = 1
time.h = 0.1
measure.type = atoms
measure.atoms = 0.5,0:0.25; -0.5,0:0.75
output.times = 0.2, 0.4
seed = 17
)");
    CHECK(c.model == "bethe-salpeter");
    CHECK(c.potential.type == PotentialSpec::Type::Quadratic);
    CHECK(c.potential.omega == 0.5);
    CHECK(c.dim == 2);
    CHECK(c.lo == Vec(-1, -2));
    CHECK(c.hi == Vec(1, 2));
    CHECK(*c.k == 0.05);
    CHECK(!c.padding);
    CHECK(*c.h == 0.1);
    REQUIRE(c.atoms.size() == 2);
    CHECK(c.atoms[1].x == Vec(-0.5, 0));
    CHECK(c.atoms[1].mass == 0.75);
    CHECK(c.output_times == std::vector<double>{0.2, 0.4});
    CHECK(c.seed == 17u);
    CHECK_NOTHROW(validate(c));
}

TEST_CASE("config errors name the field and line") {
    CHECK_THROWS_WITH_AS(io::parse_config("lattice.k = 0.1\nlattice.kk = 2\n"),
                         doctest::Contains("lattice.kk (line 2): unknown key"), Error);
    CHECK_THROWS_WITH_AS(io::parse_config("time.T = 1\ntime.T = 2\n"), doctest::Contains("given twice"), Error);
    CHECK_THROWS_WITH_AS(io::parse_config("time.h = abc\n"), doctest::Contains("expected a number"), Error);
    CHECK_THROWS_WITH_AS(io::parse_config("lattice.dim\n"), doctest::Contains("line 1"), Error);
    CHECK_THROWS_WITH_AS(io::parse_config("seed = -3\n"), doctest::Contains("must be >= 0"), Error);
    CHECK_THROWS_AS(io::load_config("/nonexistent/semilag.cfg"), Error);
    try {
        io::parse_config("lattice.kk = 1\n");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Config);
    }
}

TEST_CASE("validation rules") {
    RunConfig c;
    c.k = 0.01;
    c.h = 0.1;
    CHECK_NOTHROW(validate(c));
    SUBCASE("mollifier resolution") {
        c.eps = 0.015;
        CHECK_THROWS_WITH_AS(validate(c), doctest::Contains("mollifier resolution rule"), Error);
    }
    SUBCASE("time grid") {
        c.h = 0.3;
        CHECK_THROWS_WITH_AS(validate(c), doctest::Contains("time.h"), Error);
    }
    SUBCASE("unknown initial datum") {
        c.u0 = "gaussian";
        CHECK_THROWS_WITH_AS(validate(c), doctest::Contains("initial.u0"), Error);
    }
    SUBCASE("study slaves k to h and ignores lattice.k") {
        c.k.reset();
        CHECK_THROWS_AS(validate(c), Error);
        CHECK_NOTHROW(validate(c, true));
        const RunConfig l2 = level_config(c, 2);
        CHECK(*l2.h == doctest::Approx(0.025));
        CHECK(*l2.k == doctest::Approx(std::pow(0.025, 1.6)));
    }
}

TEST_CASE("echo covers every field in a fixed order") {
    RunConfig c;
    c.k = 0.01;
    c.h = 0.1;
    const auto a = c.echo(), b = c.echo();
    CHECK(a == b);
    bool has_seed = false, has_k = false;
    for (const auto& [k, v] : a) {
        has_seed |= k == "seed";
        has_k |= k == "lattice.k" && v == "0.01";
    }
    CHECK(has_seed);
    CHECK(has_k);
}

TEST_CASE("expressions") {
    const auto e = io::Expression::parse("-abs(x) + 2*y^2 - max(x, 0.5) / 4");
    CHECK(e(Vec(-1.5, 0.5)) == doctest::Approx(-1.5 + 0.5 - 0.125));
    CHECK(io::Expression::parse("2^3^2")(Vec()) == 512.0);
    CHECK(io::Expression::parse("-x^2")(Vec(3.0)) == -9.0);
    CHECK(io::Expression::parse("sqrt(exp(log(4)))")(Vec()) == doctest::Approx(2.0));
    CHECK(io::Expression::parse("sin(pi/2) + cos(0) + tanh(0) + min(1, -1)")(Vec()) == doctest::Approx(1.0));
    CHECK_THROWS_WITH_AS(io::Expression::parse("1 + * 2"), doctest::Contains("column"), Error);
    CHECK_THROWS_AS(io::Expression::parse("foo(x)"), Error);
    CHECK_THROWS_AS(io::Expression::parse("(x"), Error);
    CHECK_THROWS_AS(io::Expression::parse("max(x)"), Error);
}

TEST_CASE("csv and svg writers") {
    io::CsvTable t({"a", "b"});
    t.row().cell(1).cell(0.1);
    CHECK(t.str() == "a,b\n1,0.10000000000000001\n");
    const std::string svg = io::line_plot({{"s", {1, 2}, {3, 4}, true}}, {"title <x>", "h", "e", true, 640, 420});
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("title &lt;x&gt;") != std::string::npos);
    CHECK(svg.find("<polyline") != std::string::npos);
}
