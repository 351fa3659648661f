// One line per acceptance criterion; exit status is the number of failures.

#include "../support.hpp"

#include "cocycle/dominated.hpp"
#include "cocycle/extension.hpp"
#include "cocycle/maps.hpp"
#include "cocycle/one_form.hpp"
#include "cocycle/sewing.hpp"
#include "cocycle_oracles/oracles.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

using namespace cocycle;
using support::Points;
namespace orc = cocycle_oracles;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

std::string sci(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

double vec_diff(const std::vector<double>& a, const std::vector<double>& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

std::vector<double> tensor2(const std::vector<double>& a, const std::vector<double>& b)
{
    std::vector<double> out;
    for (double x : a)
        for (double y : b)
            out.push_back(x * y);
    return out;
}

// Slope over the finest dyadic levels; the coarse windows are pre-asymptotic.
double fine_slope(const LocalEstimateFit& fit, std::size_t levels = 4)
{
    std::size_t k = fit.omega.size() > levels ? fit.omega.size() - levels : 0;
    std::vector<double> w(fit.omega.begin() + k, fit.omega.end());
    std::vector<double> e(fit.deviation.begin() + k, fit.deviation.end());
    return loglog_slope(w, e);
}

// 1. Chen identity on random piecewise-linear paths.
void check_chen_identity(Outcome& o)
{
    std::mt19937_64 rng(101);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        auto t = support::uniform_times(64);
        Points x = support::random_walk(rng, 2, 64);
        auto sys = HopfSystem::get(Kind::nilpotent, 2, 4);
        // S_{s,t} as a running product of segment exponentials started at s.
        std::vector<std::vector<GradedTensor>> S(64);
        for (std::size_t s = 0; s < 64; ++s) {
            S[s].resize(64);
            S[s][s] = GradedTensor::unit(sys);
            for (std::size_t u = s + 1; u < 64; ++u) {
                std::vector<double> dx{x[u][0] - x[u - 1][0], x[u][1] - x[u - 1][1]};
                S[s][u] = mul(S[s][u - 1], signature_of_segment(sys, dx));
            }
        }
        for (std::size_t s = 0; s < 64; ++s)
            for (std::size_t u = s + 1; u < 64; ++u)
                for (std::size_t v = u + 1; v < 64; ++v)
                    worst = std::max(worst, max_abs_diff(mul(S[s][u], S[u][v]), S[s][v]));
        if (trial == 0) {
            // The level-two and level-three words agree with quadrature.
            for (const Word& w : {Word{0, 1}, Word{1, 0}, Word{0, 1, 1}}) {
                std::vector<int> letters;
                for (int c : w)
                    letters.push_back(c);
                auto est = orc::quadrature_iterated_integral(x, letters, 64);
                double got = S[0][63][sys->index_of(w)];
                o.require(std::abs(got - est.value) <= std::max(1e-8, est.error), "quadrature oracle");
            }
        }
    }
    o.detail << "max triple residual " << sci(worst) << " (tol 1e-12)";
    o.require(worst <= 1e-12, "residual");
}

// 2. Every signature value is grouplike.
void check_grouplike(Outcome& o)
{
    std::mt19937_64 rng(202);
    double worst = 0.0;
    for (Kind kind : {Kind::nilpotent, Kind::butcher})
        for (int d : {1, 2, 3})
            for (int n : {2, 3, 4}) {
                if (kind == Kind::butcher && d == 3 && n == 4)
                    continue;
                auto t = support::uniform_times(33);
                auto g = support::signature_path(kind, n, t, support::random_walk(rng, d, 33));
                for (const auto& v : g->values()) {
                    worst = std::max(worst, grouplike_defect(v));
                    o.require(grouplike_check(v, 1e-12), "grouplike_check");
                }
            }
    o.detail << "max defect " << sci(worst) << " over nilpotent and butcher signatures (tol 1e-12)";
}

// 3. Cocycle law of polynomial forms and level-raising forms.
void check_cocycle_law(Outcome& o)
{
    std::mt19937_64 rng(303);
    double poly = 0.0, raise = 0.0;
    for (int n : {2, 3}) {
        Polynomial q = support::random_polynomial(rng, 2, 4, n - 1, 0.7);
        PolynomialForm P(q, 2, n, n * n);
        for (int k = 0; k < 200; ++k) {
            GradedTensor a = random_grouplike(P.domain(), rng, 0.4);
            GradedTensor b = random_grouplike(P.domain(), rng, 0.4);
            GradedTensor c = random_grouplike(P.domain(), rng, 0.4);
            GradedTensor lhs = mul(P.eval(0, a, b), P.eval(0, mul(a, b), c));
            GradedTensor rhs = P.eval(0, a, mul(b, c));
            poly = std::max(poly, max_abs_diff(lhs, rhs));
        }
    }
    for (Kind kind : {Kind::nilpotent, Kind::butcher})
        for (int m : {2, 3})
            for (RaiseMode mode : {RaiseMode::pad, RaiseMode::lift}) {
                auto t = support::uniform_times(9);
                auto g = support::signature_path(kind, m, t, support::random_walk(rng, 2, 9));
                LevelRaisingForm beta(g, mode);
                for (int k = 0; k < 200; ++k) {
                    GradedTensor a = random_grouplike(g->system_ptr(), rng, 0.6);
                    GradedTensor b = random_grouplike(g->system_ptr(), rng, 0.6);
                    GradedTensor c = random_grouplike(g->system_ptr(), rng, 0.6);
                    std::size_t s = static_cast<std::size_t>(k) % g->size();
                    GradedTensor lhs = mul(beta.eval(s, a, b), beta.eval(s, mul(a, b), c));
                    raise = std::max(raise, max_abs_diff(lhs, beta.eval(s, a, mul(b, c))));
                }
            }
    o.detail << "polynomial " << sci(poly) << ", level-raising " << sci(raise) << " (tol 1e-10)";
    o.require(poly <= 1e-10 && raise <= 1e-10, "residual");
}

// 4. Sewn polynomial integral against its closed form, and mesh-halving decay.
void check_sewing_closed_form(Outcome& o)
{
    std::mt19937_64 rng(404);
    const int n = 4;
    const double p = 2.0;
    const double theta = (n + 1) / p;
    Polynomial q = support::random_polynomial(rng, 2, 4, 3, 0.5);
    auto t = support::uniform_times(1025);
    Points x = support::smooth_curve(2, 1025);
    auto fine = support::signature_path(Kind::nilpotent, n, t, x);
    auto form = std::make_shared<PolynomialForm>(q, 2, n, n);
    Control omega = Control::from_pvar(*fine, p);

    std::vector<SewingResult> results;
    for (std::size_t stride : {16, 8, 4, 2, 1}) {
        auto g = support::subsample(*fine, stride);
        Control w = Control::from_function(g->size(), [&](std::size_t i, std::size_t j) {
            return omega(i * stride, j * stride);
        });
        results.push_back(sew(form, g, w, theta, Schedule::omega));
    }
    const GradedTensor& total = results.back().total;
    auto closed = polynomial_increment(q, 2, *fine, 0, fine->size() - 1);
    double err = 0.0;
    for (int r = 0; r < 2; ++r)
        err = std::max(err, std::abs(total[1 + r] - closed[r]));

    // Independent check of the closed form itself.
    auto field = [&](const std::vector<double>& z) { return q(z); };
    auto oracle = orc::riemann_one_form_integral(field, 2, x, 64);
    double oerr = 0.0;
    for (int r = 0; r < 2; ++r) {
        double gap = std::abs(oracle[r].value - closed[r]);
        o.require(gap <= std::max(1e-8, oracle[r].error), "closed form vs quadrature");
        oerr = std::max(oerr, gap);
    }

    ConvergenceReport rep = refine_and_compare(results);
    o.detail << "level-1 error " << sci(err) << " (tol 1e-8), oracle gap " << sci(oerr) << ", halving exponent "
             << sci(rep.exponent) << " (need >= " << sci(theta - 1.1) << ")";
    o.require(err <= 1e-8, "closed form");
    o.require(rep.exponent >= theta - 1.0 - 0.1, "exponent");
}

// 5. Local estimate slope for rough one-forms.
void check_local_estimate(Outcome& o)
{
    struct Case {
        double p;
        double gamma;
    };
    bool first = true;
    for (Case c : {Case{1.5, 1.0}, Case{2.5, 2.0}, Case{3.5, 3.0}}) {
        const int level = static_cast<int>(std::floor(c.p));
        auto t = support::uniform_times(513);
        auto g = support::signature_path(Kind::nilpotent, level, t, support::smooth_curve(2, 513));
        LipFunction F = support::sine_field(2, 2, c.gamma, 7);
        KernelPtr beta = rough_one_form({F}, g, c.p);
        const double theta = (c.gamma + 1.0) / c.p;
        Control omega = Control::from_pvar(*g, c.p);
        SewingResult r = sew(beta, g, omega, theta, Schedule::omega);
        double slope = fine_slope(local_estimate_fit(r, omega));
        o.detail << (first ? "" : ", ") << "p=" << c.p << " slope " << sci(slope) << " vs theta " << sci(theta);
        first = false;
        o.require(std::isfinite(slope) && slope >= theta - 0.1, "slope at p=" + sci(c.p));
    }
}

// 6. Unique extension to higher levels.
void check_extension(Outcome& o)
{
    std::mt19937_64 rng(606);
    const double p = 2.5;
    auto t = support::uniform_times(65);
    Points x = support::random_walk(rng, 2, 65);
    auto g2 = support::signature_path(Kind::nilpotent, 2, t, x);
    double exact = 0.0;
    for (int n : {3, 4}) {
        auto direct = support::signature_path(Kind::nilpotent, n, t, x);
        Extension e = extend_to_level(g2, n, p);
        for (std::size_t i = 0; i < direct->size(); ++i) {
            exact = std::max(exact, max_abs_diff(e.path->value(i), direct->value(i)));
            o.require(grouplike_check(e.path->value(i), 1e-9), "group membership");
        }
    }
    Extension om = extend_to_level(g2, 4, p, Schedule::omega);
    double uniq = 0.0;
    for (Schedule s : {Schedule::dyadic, Schedule::ltr}) {
        Extension other = extend_to_level(g2, 4, p, s);
        for (std::size_t i = 0; i < g2->size(); ++i)
            uniq = std::max(uniq, max_abs_diff(om.path->value(i), other.path->value(i)));
    }
    const double c = 0.7;
    auto scaled = std::make_shared<const SampledGroupPath>(dilate(*g2, c));
    Extension es = extend_to_level(scaled, 4, p);
    double equi = 0.0;
    for (std::size_t i = 0; i < g2->size(); ++i)
        equi = std::max(equi, max_abs_diff(es.path->value(i), dilate(om.path->value(i), c)));

    std::vector<double> ratios;
    std::vector<double> tr = support::uniform_times(17);
    Points xr = support::random_walk(rng, 2, 17);
    for (int k = 0; k < 4; ++k) {
        auto g = support::signature_path(Kind::nilpotent, 2, tr, xr);
        ratios.push_back(extend_to_level(g, 4, p).ratio);
        support::refine(tr, xr, 2);
    }
    double spread = 0.0;
    for (double r : ratios)
        spread = std::max(spread, std::abs(r / ratios.front() - 1.0));

    o.detail << "vs signature " << sci(exact) << " (1e-9), schedules " << sci(uniq) << " (1e-10), dilation "
             << sci(equi) << " (1e-10), p-var ratio " << sci(ratios.front()) << " spread " << sci(spread)
             << " (0.1)";
    o.require(exact <= 1e-9, "signature");
    o.require(uniq <= 1e-10, "uniqueness");
    o.require(equi <= 1e-10, "dilation");
    o.require(spread <= 0.1, "ratio stability");
}

// 7. Splitting laws of I and I', and the I^m closed form.
void check_maps(Outcome& o)
{
    std::mt19937_64 rng(707);
    double law = 0.0, law_prime = 0.0, powers = 0.0;
    auto check = [&](const SystemPtr& sys, bool prime) {
        const int n = sys->n();
        for (int k = 0; k < 200; ++k) {
            GradedTensor a = random_grouplike(sys, rng, 0.8);
            GradedTensor b = random_grouplike(sys, rng, 0.8);
            GradedTensor ab = mul(a, b);
            GradedTensor one = GradedTensor::unit(sys);
            MultiTensor lhs = prime ? map_I_prime(ab) : map_I(ab);
            MultiTensor Ib = prime ? map_I_prime(b) : map_I(b);
            MultiTensor Ia = prime ? map_I_prime(a) : map_I(a);
            MultiTensor cross = outer(a - one, mul(a, b - one));
            MultiTensor rhs = prime ? Ia + project_n2_prime(*sys, act(a, Ib), n) + project_n2_prime(*sys, cross, n)
                                    : Ia + project_n2(*sys, act(a, Ib), n) + project_n2(*sys, cross, n);
            double r = max_abs(lhs - rhs);
            (prime ? law_prime : law) = std::max(prime ? law_prime : law, r);
        }
    };
    for (int n : {2, 3, 4}) {
        check(HopfSystem::get(Kind::nilpotent, 2, n), false);
        check(HopfSystem::get(Kind::nilpotent, 2, n), true);
    }
    check(HopfSystem::get(Kind::nilpotent, 3, 3), false);
    check(HopfSystem::get(Kind::butcher, 2, 2), false);
    for (int n : {2, 3})
        check(HopfSystem::get(Kind::butcher, 2, n), true);
    auto sys = HopfSystem::get(Kind::nilpotent, 2, 4);
    for (int k = 0; k < 200; ++k) {
        GradedTensor a = random_grouplike(sys, rng, 0.8);
        for (int m = 1; m <= 3; ++m)
            powers = std::max(powers, max_abs(map_I_power(a, m) - map_I_power_closed(a, m)));
    }
    o.detail << "I law " << sci(law) << ", I' law " << sci(law_prime) << " (tol 1e-11), I^m closed form "
             << sci(powers) << " (tol 1e-12)";
    o.require(law <= 1e-11 && law_prime <= 1e-11, "splitting law");
    o.require(powers <= 1e-12, "closed form");
}

// 8. Product of dominated paths.
void check_algebra(Outcome& o)
{
    std::mt19937_64 rng(808);
    const double p = 2.5;
    const double theta = 1.2;
    std::vector<double> t = support::uniform_times(65);
    Points x = support::random_walk(rng, 2, 65, 0.6);
    double trace_err = 0.0;
    std::vector<double> ratios;
    for (int k = 0; k < 3; ++k) {
        auto g = support::signature_path(Kind::nilpotent, 4, t, x);
        DominatedPath d1 = dominate(rough_one_form({support::sine_field(2, 2, INFINITY, 11)}, g, p), theta);
        DominatedPath d2 = dominate(rough_one_form({support::sine_field(2, 4, INFINITY, 12)}, g, p), theta);
        DominatedPath pr = product(d1, d2);
        for (std::size_t i = 0; i < g->size(); ++i)
            trace_err = std::max(trace_err, vec_diff(pr.trace[i], tensor2(d1.trace[i], d2.trace[i])));
        Control omega = Control::from_pvar(*g, p);
        double n1 = certify(d1, omega, p).norm, n2 = certify(d2, omega, p).norm;
        ratios.push_back(certify(pr, omega, p).norm / (n1 * n2));
        support::refine(t, x, 2);
    }
    double spread = 0.0;
    for (double r : ratios)
        spread = std::max(spread, std::abs(r / ratios.front() - 1.0));
    o.detail << "trace vs pointwise tensor " << sci(trace_err) << " (tol 1e-9), norm ratio " << sci(ratios.front())
             << " spread " << sci(spread) << " over 3 refinements";
    o.require(trace_err <= 1e-9, "trace");
    o.require(spread <= 0.25, "norm ratio stability");
}

// 9. Composition with polynomials and the exponent of the composed form.
void check_composition(Outcome& o)
{
    std::mt19937_64 rng(909);
    const double p = 2.5;
    double err_sq = 0.0, err_cubic = 0.0;
    {
        auto t = support::uniform_times(65);
        auto g = support::signature_path(Kind::nilpotent, 2, t, support::random_walk(rng, 1, 65));
        DominatedPath X = dominate(increment_form(g), 1.2);
        Polynomial sq(1, 1, {{0.0}, {0.0}, {2.0}});
        DominatedPath Y = compose(X, LipFunction::from_polynomial(sq), p);
        for (std::size_t i = 0; i < g->size(); ++i)
            err_sq = std::max(err_sq, std::abs(Y.trace[i][0] - X.trace[i][0] * X.trace[i][0]));
    }
    {
        auto t = support::uniform_times(65);
        auto g = support::signature_path(Kind::nilpotent, 6, t, support::random_walk(rng, 2, 65, 0.7));
        DominatedPath X = dominate(rough_one_form({support::sine_field(2, 4, INFINITY, 21)}, g, p), 1.2);
        Polynomial f = support::random_polynomial(rng, 2, 2, 3, 0.8);
        DominatedPath Y = compose(X, LipFunction::from_polynomial(f), p);
        auto f0 = f(std::vector<double>{0.0, 0.0});
        for (std::size_t i = 0; i < g->size(); ++i) {
            auto fx = f(X.trace[i]);
            for (int r = 0; r < 2; ++r)
                err_cubic = std::max(err_cubic, std::abs(Y.trace[i][r] - (fx[r] - f0[r])));
        }
    }
    // Exponent of the composed form with gamma / p below the input theta.
    const double gamma = 2.75;
    auto t = support::uniform_times(513);
    auto g = support::signature_path(Kind::nilpotent, 3, t, support::smooth_curve(2, 513));
    DominatedPath X = dominate(increment_form(g), 1.2);
    DominatedPath Y = compose(X, support::sine_field(2, 1, gamma, 31), p);
    const double expected = std::min({1.2, gamma / p, 3.0 / p});
    Control omega = Control::from_pvar(*g, p);
    SewingResult r = sew(Y.form, g, omega, Y.theta, Schedule::omega);
    double slope = fine_slope(local_estimate_fit(r, omega));
    o.detail << "x^2 " << sci(err_sq) << ", cubic " << sci(err_cubic) << " (tol 1e-8), theta-hat " << sci(Y.theta)
             << " expected " << sci(expected) << ", slope " << sci(slope);
    o.require(err_sq <= 1e-8 && err_cubic <= 1e-8, "trace");
    o.require(std::abs(Y.theta - expected) <= 1e-12, "theta-hat");
    o.require(std::isfinite(slope) && slope >= expected - 0.1, "slope");
}

// 10. Rebase of an iterated integral over the enhancement.
void check_transitivity(Outcome& o)
{
    std::mt19937_64 rng(1010);
    const double p = 2.5;
    const double theta = 1.2;
    auto t = support::uniform_times(65);
    auto g = support::signature_path(Kind::nilpotent, 4, t, support::random_walk(rng, 2, 65, 0.7));
    DominatedPath d = dominate(rough_one_form({support::sine_field(2, 4, INFINITY, 41)}, g, p), theta);
    GroupEnhancement enh = enhance(d, 2);
    DominatedPath z = dominate(increment_form(enh.gamma), theta);
    DominatedPath outer = iterated_integral(z, z);
    DominatedPath rebased = rebase(outer, enh);
    DominatedPath direct = iterated_integral(d, d);
    double err = 0.0;
    for (std::size_t i = 0; i < g->size(); ++i) {
        err = std::max(err, vec_diff(rebased.trace[i], outer.trace[i]));
        err = std::max(err, vec_diff(rebased.trace[i], direct.trace[i]));
    }
    double mult = 0.0;
    for (std::size_t s : {8, 16, 32, 48}) {
        GroupEnhancement from_s = enhance(dominate(d.form, theta, {}, s), 2);
        for (std::size_t u = s; u < g->size(); ++u)
            mult = std::max(mult, max_abs_diff(mul(enh.gamma->value(s), from_s.gamma->value(u)), enh.gamma->value(u)));
    }
    o.detail << "rebased vs direct " << sci(err) << " (tol 1e-8), multiplicativity " << sci(mult) << " (tol 1e-10)";
    o.require(err <= 1e-8, "rebase");
    o.require(mult <= 1e-10, "multiplicativity");
}

// 11. Rough integration of f(x) = x.
void check_rough_integration(Outcome& o)
{
    const double p = 2.5;
    Polynomial id(1, 1, {{0.0}, {1.0}});
    auto field = [](const std::vector<double>& z) { return std::vector<double>{z[0]}; };
    auto oracle_levels = [&](const Points& x) {
        auto y1 = orc::riemann_one_form_integral(field, 1, x, 64);
        auto y2 = orc::richardson(
            [&](int mesh) { return orc::nested_riemann(orc::riemann_integral_path(field, 1, x, mesh), {0, 0}); }, 64);
        return std::array<orc::Estimate, 2>{y1[0], y2};
    };

    auto t = support::uniform_times(65);
    Points x(65);
    for (std::size_t i = 0; i < 65; ++i)
        x[i] = {t[i]};
    auto g = support::signature_path(Kind::nilpotent, 4, t, x);
    GroupEnhancement Y = rough_integrate({LipFunction::from_polynomial(id)}, g, p, 1.2, 2);
    const GradedTensor& y = Y.gamma->values().back();
    auto orc_lin = oracle_levels(x);
    double e1 = std::abs(y[1] - 0.5), e2 = std::abs(y[2] - 0.125);
    o.require(e1 <= 1e-9 && e2 <= 1e-9, "exact values");
    o.require(std::abs(orc_lin[0].value - 0.5) <= std::max(1e-9, orc_lin[0].error), "oracle level 1");
    o.require(std::abs(orc_lin[1].value - 0.125) <= std::max(1e-9, orc_lin[1].error), "oracle level 2");

    const std::size_t N = 16385;
    auto tb = support::uniform_times(N);
    Points xb(N);
    for (std::size_t i = 0; i < N; ++i)
        xb[i] = {std::sin(2.0 * tb[i]) + 0.3 * tb[i]};
    auto gb = support::signature_path(Kind::butcher, 2, tb, xb);
    GroupEnhancement Yb = rough_integrate({LipFunction::from_polynomial(id)}, gb, p, 1.2, 2);
    const GradedTensor& yb = Yb.gamma->values().back();
    auto orc_b = oracle_levels(xb);
    double b1 = std::abs(yb[1] - orc_b[0].value), b2 = std::abs(yb[2] - orc_b[1].value);
    o.detail << "nilpotent levels err " << sci(e1) << ", " << sci(e2) << " (tol 1e-9); butcher vs oracle " << sci(b1)
             << ", " << sci(b2) << " (tol 1e-8)";
    o.require(b1 <= std::max(1e-8, orc_b[0].error) && b2 <= std::max(1e-8, orc_b[1].error), "butcher");
}

// 12. p-variation DP against exhaustive enumeration.
void check_pvariation(Outcome& o)
{
    std::mt19937_64 rng(1212);
    std::uniform_real_distribution<double> up(1.0, 4.0);
    int mismatches = 0;
    for (int trial = 0; trial < 100; ++trial) {
        auto t = support::uniform_times(10);
        Kind kind = trial % 2 ? Kind::butcher : Kind::nilpotent;
        auto g = support::signature_path(kind, 2, t, support::random_walk(rng, 2, 10));
        double p = up(rng);
        auto norms = increment_norms(*g, 0, 9);
        if (p_variation_from_norms(norms, p) != orc::exhaustive_pvariation(norms, p))
            ++mismatches;
    }
    o.detail << mismatches << " mismatches over 100 random 10-point instances";
    o.require(mismatches == 0, "exact agreement");
}

// 13. Integration by parts holds for nilpotent paths and fails for a non-geometric butcher path.
void check_integration_by_parts(Outcome& o)
{
    std::mt19937_64 rng(1313);
    const std::size_t N = 65;
    auto t = support::uniform_times(N);
    Points x = support::random_walk(rng, 2, N);
    auto symmetric_defect = [&](const PathPtr& g) {
        DominatedPath h = dominate(increment_form(g), 1.2);
        DominatedPath ii = iterated_integral(h, h);
        DominatedPath pr = product(h, h);
        double worst = 0.0;
        for (std::size_t s = 0; s < N; ++s)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    double sym = ii.trace[s][i * 2 + j] + ii.trace[s][j * 2 + i];
                    worst = std::max(worst, std::abs(sym - pr.trace[s][i * 2 + j]));
                }
        return worst;
    };
    auto nil = support::signature_path(Kind::nilpotent, 2, t, x);

    // Same increments, with a bracket term added to the ladders: a grouplike but non-geometric path.
    auto sys = HopfSystem::get(Kind::butcher, 2, 2);
    std::vector<GradedTensor> values{GradedTensor::unit(sys)};
    for (std::size_t k = 1; k < N; ++k) {
        double dt = t[k] - t[k - 1];
        std::array<double, 2> dx{x[k][0] - x[k - 1][0], x[k][1] - x[k - 1][1]};
        GradedTensor step = butcher_character(sys, [&](std::size_t idx) {
            const Tree& tree = sys->forest(idx).front();
            if (tree.children.empty())
                return dx[tree.label];
            int i = tree.label, j = tree.children.front().label;
            return dx[i] * dx[j] / 2.0 + (i == j ? dt / 2.0 : 0.0);
        });
        values.push_back(mul(values.back(), step));
    }
    auto but = std::make_shared<const SampledGroupPath>(t, std::move(values));
    double dn = symmetric_defect(nil), db = symmetric_defect(but);
    o.detail << "nilpotent defect " << sci(dn) << " (tol 1e-9), butcher defect " << sci(db) << " (expected about 1)";
    o.require(dn <= 1e-9, "nilpotent identity");
    o.require(db >= 0.5, "butcher defect");
}

// 14. Byte-identical CLI output across repeated runs.
std::string run_capture(const std::string& cmd)
{
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe)
        return "<popen failed>";
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0)
        out.append(buf, n);
    int status = pclose(pipe);
    return out + "\n<status " + std::to_string(status) + ">";
}

void check_cli_determinism(Outcome& o)
{
    const std::string cli = COCYCLE_CLI_PATH;
    const std::string fx = COCYCLE_FIXTURES;
    const std::string walk = fx + "/walk2d.csv";
    const std::vector<std::string> commands{
        "signature --depth 3 " + walk,
        "pvar --p 2.5 " + walk,
        "extend --to-level 4 --p 2.5 " + walk,
        "integrate --p 2.5 --form " + fx + "/form_area.json " + walk,
        "iterate --p 2.5 " + walk,
        "product --p 2.5 --form " + fx + "/form_area.json " + walk,
        "compose --p 2.5 --function " + fx + "/function_square.json " + walk,
        "enhance --p 2.5 " + walk,
        "certify --p 2.5 --form " + fx + "/form_area.json " + walk,
    };
    const std::array<std::string, 3> envs{"", "COCYCLE_THREADS=1 ", "COCYCLE_THREADS=3 "};
    int identical = 0;
    for (const auto& c : commands) {
        std::array<std::string, 3> outs;
        for (int r = 0; r < 3; ++r)
            outs[r] = run_capture(envs[r] + "'" + cli + "' " + c + " 2>/dev/null");
        bool same = outs[0] == outs[1] && outs[1] == outs[2];
        bool ok = outs[0].find("<status 0>") != std::string::npos && outs[0].size() > 40;
        if (same && ok)
            ++identical;
        else
            o.require(false, c.substr(0, c.find(' ')));
    }
    o.detail << identical << "/" << commands.size() << " subcommands byte-identical over 3 runs";
}

} // namespace

int main()
{
    struct Criterion {
        int id;
        const char* name;
        std::function<void(Outcome&)> run;
    };
    const std::vector<Criterion> criteria{
        {1, "chen identity", check_chen_identity},
        {2, "grouplike signatures", check_grouplike},
        {3, "cocycle law", check_cocycle_law},
        {4, "sewing vs closed form", check_sewing_closed_form},
        {5, "local estimate slope", check_local_estimate},
        {6, "unique extension", check_extension},
        {7, "maps I and I'", check_maps},
        {8, "dominated-path algebra", check_algebra},
        {9, "composition", check_composition},
        {10, "transitivity", check_transitivity},
        {11, "rough integration", check_rough_integration},
        {12, "p-variation", check_pvariation},
        {13, "integration by parts", check_integration_by_parts},
        {14, "cli determinism", check_cli_determinism},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        Outcome o;
        auto start = std::chrono::steady_clock::now();
        try {
            c.run(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " [exception: " << e.what() << "]";
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!o.pass)
            ++failures;
        std::printf("%s %2d %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.str().c_str(), secs);
        std::fflush(stdout);
    }
    return failures;
}
