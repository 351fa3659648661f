#include "../support.hpp"

#include "cocycle/error.hpp"
#include "cocycle/path.hpp"

#include <cocycle_oracles/oracles.hpp>

#include <doctest.h>

using namespace cocycle;
namespace oracles = cocycle_oracles;

TEST_SUITE("paths")
{
    TEST_CASE("segment signatures")
    {
        auto sys = HopfSystem::get(Kind::nilpotent, 2, 3);
        std::vector<double> v{0.5, -2.0};
        GradedTensor s = signature_of_segment(sys, v);
        CHECK(s[sys->index_of(Word{0})] == doctest::Approx(0.5));
        CHECK(s[sys->index_of(Word{0, 1})] == doctest::Approx(-0.5));
        CHECK(s[sys->index_of(Word{1, 1, 1})] == doctest::Approx(-8.0 / 6.0));
        std::vector<double> w{-0.5, 2.0};
        CHECK(max_abs_diff(mul(s, signature_of_segment(sys, w)), GradedTensor::unit(sys)) <= 1e-15);

        auto but = HopfSystem::get(Kind::butcher, 2, 3);
        GradedTensor b = signature_of_segment(but, v);
        CHECK(grouplike_check(b, 1e-13));
        Forest ladder{graft(0, Forest{Tree{1, {}}})};
        CHECK(b[but->index_of(ladder)] == doctest::Approx(0.5 * -2.0 / 2.0));
        Forest cherry{graft(0, Forest{Tree{1, {}}, Tree{1, {}}})};
        CHECK(b[but->index_of(cherry)] == doctest::Approx(0.5 * 4.0 / 3.0));
    }

    TEST_CASE("L-shaped path")
    {
        std::vector<double> t{0.0, 1.0, 2.0};
        support::Points x{{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}};
        SampledGroupPath g = signature_piecewise_linear(Kind::nilpotent, 2, t, x);
        const auto& sys = g.system();
        const GradedTensor& end = g.values().back();
        CHECK(g.value(0)[0] == 1.0);
        CHECK(end[sys.index_of(Word{0, 1})] == doctest::Approx(1.0));
        CHECK(end[sys.index_of(Word{1, 0})] == doctest::Approx(0.0));
        CHECK(end[sys.index_of(Word{0, 0})] == doctest::Approx(0.5));
        for (const Word& w : {Word{0, 1}, Word{1, 0}, Word{0, 0}, Word{1, 1}}) {
            auto est = oracles::quadrature_iterated_integral(x, w, 64);
            CHECK(std::abs(est.value - end[sys.index_of(w)]) <= std::max(est.error, 1e-10));
        }
        CHECK(max_abs_diff(g.increment(0, 2), end) <= 1e-15);
        CHECK(max_abs_diff(mul(g.increment(0, 1), g.increment(1, 2)), g.increment(0, 2)) <= 1e-15);
    }

    TEST_CASE("input validation")
    {
        CHECK_THROWS_AS(signature_piecewise_linear(Kind::nilpotent, 2, {}, {}), Error);
        CHECK_THROWS_AS(signature_piecewise_linear(Kind::nilpotent, 2, {0.0, 0.0}, {{0.0}, {1.0}}), Error);
        CHECK_THROWS_AS(signature_piecewise_linear(Kind::nilpotent, 2, {0.0, 1.0}, {{0.0}, {1.0, 2.0}}), Error);
        CHECK_THROWS_AS(signature_piecewise_linear(Kind::nilpotent, 2, {0.0}, {{3.0}}), Error);
    }

    TEST_CASE("homogeneous norm")
    {
        auto sys = HopfSystem::get(Kind::nilpotent, 1, 2);
        GradedTensor e = signature_of_segment(sys, std::vector<double>{1.0});
        CHECK(homogeneous_norm(e) == doctest::Approx(1.0 + std::sqrt(0.5)));
        CHECK(homogeneous_norm(dilate(e, 2.0)) == doctest::Approx(2.0 * (1.0 + std::sqrt(0.5))));
    }

    TEST_CASE("p-variation")
    {
        std::vector<double> t = support::uniform_times(6);
        support::Points still(6, std::vector<double>{1.0, 2.0});
        SampledGroupPath c = signature_piecewise_linear(Kind::nilpotent, 2, t, still);
        CHECK(p_variation(c, 2.0) == 0.0);

        support::Points line;
        for (double s : t)
            line.push_back({s});
        SampledGroupPath m = signature_piecewise_linear(Kind::nilpotent, 1, t, line);
        CHECK(p_variation(m, 1.0) == doctest::Approx(1.0));
        CHECK(p_variation(m, 2.0) == doctest::Approx(1.0));

        std::mt19937_64 rng(11);
        for (int k = 0; k < 5; ++k) {
            auto x = support::random_walk(rng, 2, 8);
            SampledGroupPath g = signature_piecewise_linear(Kind::nilpotent, 2, support::uniform_times(8), x);
            auto norms = increment_norms(g, 0, g.size() - 1);
            for (double p : {1.5, 2.2, 3.0})
                CHECK(p_variation(g, p) == doctest::Approx(oracles::exhaustive_pvariation(norms, p)).epsilon(1e-12));
        }
    }

    TEST_CASE("control")
    {
        std::mt19937_64 rng(12);
        auto x = support::random_walk(rng, 2, 20);
        SampledGroupPath g = signature_piecewise_linear(Kind::nilpotent, 2, support::uniform_times(20), x);
        const double p = 2.5;
        Control w = Control::from_pvar(g, p);
        for (std::size_t i = 0; i < g.size(); ++i)
            CHECK(w(i, i) == 0.0);
        for (std::size_t i = 0; i < g.size(); i += 3)
            for (std::size_t j = i; j < g.size(); j += 2)
                for (std::size_t k = j; k < g.size(); k += 5)
                    CHECK(w(i, j) + w(j, k) <= w(i, k) * (1.0 + 1e-12) + 1e-15);
        SampledGroupPath h = dilate(g, 3.0);
        Control wh = Control::from_pvar(h, p);
        CHECK(wh(0, g.size() - 1) == doctest::Approx(std::pow(3.0, p) * w(0, g.size() - 1)));
        CHECK(w.mesh(0, g.size() - 1) > 0.0);
        Control sum = w.plus(w);
        CHECK(sum(2, 9) == doctest::Approx(2.0 * w(2, 9)));
    }

    TEST_CASE("truncation and dilation of paths")
    {
        std::mt19937_64 rng(13);
        auto x = support::random_walk(rng, 2, 10);
        SampledGroupPath g = signature_piecewise_linear(Kind::butcher, 3, support::uniform_times(10), x);
        SampledGroupPath g2 = signature_piecewise_linear(Kind::butcher, 2, support::uniform_times(10), x);
        SampledGroupPath t = truncate(g, 2);
        for (std::size_t i = 0; i < g.size(); ++i)
            CHECK(max_abs_diff(t.value(i), g2.value(i)) <= 1e-14);
        support::Points x3 = x;
        for (auto& row : x3)
            for (double& v : row)
                v *= -0.5;
        SampledGroupPath d = dilate(g, -0.5);
        SampledGroupPath direct = signature_piecewise_linear(Kind::butcher, 3, support::uniform_times(10), x3);
        CHECK(max_abs_diff(d.values().back(), direct.values().back()) <= 1e-14);
    }
}
