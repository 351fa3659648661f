#include <cocycle_oracles/oracles.hpp>

#include <doctest.h>

#include <cmath>
#include <stdexcept>

namespace oracles = cocycle_oracles;

namespace {

bool within(const oracles::Estimate& e, double exact) { return std::abs(e.value - exact) <= e.error + 1e-12; }

} // namespace

TEST_SUITE("oracles")
{
    TEST_CASE("richardson removes the first-order term")
    {
        auto scheme = [](int m) { return 2.0 + 3.0 / m; };
        oracles::Estimate e = oracles::richardson(scheme, 64);
        CHECK(e.value == doctest::Approx(2.0));
        CHECK(std::abs(e.value - 2.0) <= 1e-12);
        CHECK(e.error == doctest::Approx(4.0 * 3.0 / 128.0));
    }

    TEST_CASE("refine keeps the end points")
    {
        oracles::Points x{{0.0, 1.0}, {2.0, 3.0}};
        oracles::Points r = oracles::refine(x, 4);
        REQUIRE(r.size() == 5);
        CHECK(r[2][0] == doctest::Approx(1.0));
        CHECK(r.back()[1] == doctest::Approx(3.0));
    }

    TEST_CASE("iterated integrals of a segment")
    {
        oracles::Points x{{0.0, 0.0}, {1.0, 2.0}};
        CHECK(within(oracles::quadrature_iterated_integral(x, {0, 1}, 64), 1.0));
        CHECK(within(oracles::quadrature_iterated_integral(x, {1, 1, 1}, 64), 8.0 / 6.0));
        oracles::Points l{{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}};
        CHECK(within(oracles::quadrature_iterated_integral(l, {0, 1}, 64), 1.0));
        CHECK(std::abs(oracles::quadrature_iterated_integral(l, {1, 0}, 64).value) <= 1e-6);
    }

    TEST_CASE("estimates converge under refinement")
    {
        oracles::Points x{{0.0, 0.0}, {0.5, 1.0}, {-0.3, 0.2}};
        auto a = oracles::quadrature_iterated_integral(x, {0, 1, 0}, 64);
        auto b = oracles::quadrature_iterated_integral(x, {0, 1, 0}, 512);
        CHECK(std::abs(a.value - b.value) <= a.error + b.error + 1e-12);
        CHECK(b.error <= a.error);
    }

    TEST_CASE("tree integrals")
    {
        oracles::Points x{{0.0}, {1.0}};
        oracles::Node leaf{0, {}};
        oracles::Node ladder{0, {leaf}};
        oracles::Node cherry{0, {leaf, leaf}};
        CHECK(within(oracles::quadrature_forest_integral(x, {ladder}, 64), 0.5));
        CHECK(within(oracles::quadrature_forest_integral(x, {cherry}, 64), 1.0 / 3.0));
        CHECK(within(oracles::quadrature_forest_integral(x, {leaf, leaf}, 64), 1.0));
    }

    TEST_CASE("one-form integrals")
    {
        oracles::Points x{{0.0}, {2.0}};
        auto f = [](const std::vector<double>& z) { return std::vector<double>{z[0] * z[0]}; };
        auto e = oracles::riemann_one_form_integral(f, 1, x, 64);
        CHECK(within(e.at(0), 8.0 / 3.0));
        auto path = oracles::riemann_integral_path(f, 1, x, 64);
        CHECK(path.size() == 65);
        CHECK(path.front()[0] == 0.0);
    }

    TEST_CASE("exhaustive p-variation")
    {
        std::vector<std::vector<double>> norms{{0.0, 1.0, 2.0}, {0.0, 0.0, 1.0}, {0.0, 0.0, 0.0}};
        CHECK(oracles::exhaustive_pvariation(norms, 1.0) == doctest::Approx(2.0));
        CHECK(oracles::exhaustive_pvariation(norms, 2.0) == doctest::Approx(2.0));
        std::vector<std::vector<double>> big(15, std::vector<double>(15, 1.0));
        CHECK_THROWS_AS(oracles::exhaustive_pvariation(big, 2.0), std::exception);
    }
}
