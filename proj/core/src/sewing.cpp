#include "cocycle/sewing.hpp"

#include "cocycle/error.hpp"
#include "cocycle/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace cocycle {

std::string to_string(Schedule s)
{
    switch (s) {
    case Schedule::omega:
        return "omega";
    case Schedule::dyadic:
        return "dyadic";
    case Schedule::ltr:
        return "ltr";
    }
    return "omega";
}

Schedule schedule_from_string(const std::string& name)
{
    if (name == "omega" || name == "omega_guided")
        return Schedule::omega;
    if (name == "dyadic")
        return Schedule::dyadic;
    if (name == "ltr" || name == "left_to_right")
        return Schedule::ltr;
    reject("unknown schedule '" + name + "'");
}

GradedTensor SewingResult::increment(std::size_t i, std::size_t j) const
{
    return mul(inverse(value(i)), value(j));
}

namespace {

// Removal order of the interior points of [i0, i1].
std::vector<std::size_t> removal_order(Schedule schedule, std::size_t i0, std::size_t i1,
                                       const Control& omega)
{
    std::vector<std::size_t> order;
    if (i1 <= i0 + 1)
        return order;
    if (schedule == Schedule::ltr) {
        for (std::size_t j = i0 + 1; j < i1; ++j)
            order.push_back(j);
        return order;
    }
    std::vector<std::size_t> live;
    for (std::size_t j = i0; j <= i1; ++j)
        live.push_back(j);
    if (schedule == Schedule::dyadic) {
        while (live.size() > 2) {
            std::vector<std::size_t> keep;
            for (std::size_t k = 0; k < live.size(); ++k) {
                if (k % 2 == 1 && k + 1 < live.size())
                    order.push_back(live[k]);
                else
                    keep.push_back(live[k]);
            }
            live = std::move(keep);
        }
        return order;
    }
    const double total = omega(i0, i1);
    while (live.size() > 2) {
        const std::size_t l = live.size() - 1;
        std::size_t pick = 0;
        if (l == 2) {
            pick = 1;
        } else {
            const double bound = 2.0 / static_cast<double>(l - 1) * total;
            double best = std::numeric_limits<double>::infinity();
            std::size_t argmin = 1;
            for (std::size_t k = 1; k + 1 < live.size(); ++k) {
                double w = omega(live[k - 1], live[k + 1]);
                if (w <= bound) {
                    pick = k;
                    break;
                }
                if (w < best) {
                    best = w;
                    argmin = k;
                }
            }
            if (pick == 0)
                pick = argmin;
        }
        order.push_back(live[pick]);
        live.erase(live.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    return order;
}

} // namespace

SewingResult sew(FormPtr beta, PathPtr g, const Control& omega, double theta, Schedule schedule,
                 std::size_t i0, std::size_t i1)
{
    if (!beta || !g)
        reject("sew needs a form and a path");
    if (i1 == std::numeric_limits<std::size_t>::max())
        i1 = g->size() - 1;
    if (i1 >= g->size() || i0 > i1)
        reject("sew: bad grid window");
    if (!(theta > 1.0))
        throw Error(ErrorKind::certificate, "sewing needs theta > 1 (got " + std::to_string(theta) + ")");
    if (beta->domain() != g->system_ptr())
        reject("form domain does not match the path system");
    const bool have_control = omega.size() == g->size();
    if (schedule == Schedule::omega && !have_control)
        reject("the omega schedule needs a control on the path grid");

    SewingResult r;
    r.form = beta;
    r.path = g;
    r.i0 = i0;
    r.i1 = i1;
    r.theta = theta;
    r.schedule = schedule;
    if (have_control)
        r.mesh = omega.mesh(i0, i1);

    const std::size_t steps = i1 - i0;
    std::vector<GradedTensor> one(steps);
    parallel_for(steps, [&](std::size_t k) {
        std::size_t s = i0 + k;
        one[k] = beta->eval(s, g->value(s), g->increment(s, s + 1));
    });
    for (const auto& x : one)
        if (!all_finite(x))
            throw Error(ErrorKind::overflow, "non-finite one-step value");

    r.values.reserve(steps + 1);
    r.values.push_back(GradedTensor::unit(beta->target()));
    for (std::size_t k = 0; k < steps; ++k)
        r.values.push_back(mul(r.values.back(), one[k]));

    if (steps == 0) {
        r.total = r.values.front();
        return r;
    }

    // Linked partition over local positions 0..steps; block[k] and approx[k] belong to [k, next[k]].
    std::vector<std::size_t> prev(steps + 1), next(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) {
        prev[k] = k == 0 ? 0 : k - 1;
        next[k] = k + 1;
    }
    std::vector<GradedTensor> block = one;
    std::vector<GradedTensor> approx = std::move(one);
    block.emplace_back();
    approx.emplace_back();
    for (std::size_t j : removal_order(schedule, i0, i1, omega)) {
        std::size_t lj = j - i0;
        std::size_t la = prev[lj];
        std::size_t lc = next[lj];
        std::size_t a = i0 + la;
        std::size_t c = i0 + lc;
        GradedTensor merged = beta->eval(a, g->value(a), g->increment(a, c));
        double defect = max_sigma_norm(merged - mul(approx[la], approx[lj]));
        r.removals.push_back({j, defect});
        r.tracked_error += defect;
        block[la] = mul(block[la], block[lj]);
        approx[la] = std::move(merged);
        next[la] = lc;
        if (lc <= steps)
            prev[lc] = la;
    }
    r.total = std::move(block[0]);
    if (!all_finite(r.total))
        throw Error(ErrorKind::overflow, "non-finite sewn value");
    return r;
}

SewingResult certified_sew(FormPtr beta, PathPtr g, const Control& omega, double theta,
                           Schedule schedule, double max_constant, std::size_t max_points)
{
    if (!(theta > 1.0))
        throw Error(ErrorKind::certificate, "sewing needs theta > 1 (got " + std::to_string(theta) + ")");
    auto rep = integrable_condition_check(*beta, *g, omega, theta, max_points);
    if (!rep.finite || rep.constant > max_constant)
        throw Error(ErrorKind::certificate,
                    "integrable condition fails at (s, u, t) = (" + std::to_string(rep.worst_s) + ", " +
                        std::to_string(rep.worst_u) + ", " + std::to_string(rep.worst_t) +
                        "), constant " + std::to_string(rep.constant));
    return sew(std::move(beta), std::move(g), omega, theta, schedule);
}

double local_estimate(const SewingResult& r, std::size_t s, std::size_t t)
{
    if (s < r.i0 || t > r.i1 || s > t)
        reject("local_estimate: window outside the sewn range");
    GradedTensor one = r.form->eval(s, r.path->value(s), r.path->increment(s, t));
    return max_sigma_norm(r.increment(s, t) - one);
}

LocalEstimateFit local_estimate_fit(const SewingResult& r, const Control& omega, std::size_t min_steps)
{
    LocalEstimateFit fit;
    const std::size_t span = r.i1 - r.i0;
    for (std::size_t pieces = 1; span / pieces >= std::max<std::size_t>(min_steps, 1); pieces *= 2) {
        double wmax = 0.0;
        double dmax = 0.0;
        for (std::size_t q = 0; q < pieces; ++q) {
            std::size_t s = r.i0 + q * span / pieces;
            std::size_t t = r.i0 + (q + 1) * span / pieces;
            double w = omega(s, t);
            double dev = local_estimate(r, s, t);
            wmax = std::max(wmax, w);
            dmax = std::max(dmax, dev);
            if (w > 0.0)
                fit.constant = std::max(fit.constant, dev / std::pow(w, r.theta));
        }
        fit.omega.push_back(wmax);
        fit.deviation.push_back(dmax);
    }
    fit.slope = loglog_slope(fit.omega, fit.deviation);
    return fit;
}

ConvergenceReport refine_and_compare(const std::vector<SewingResult>& results)
{
    ConvergenceReport rep;
    for (std::size_t k = 0; k + 1 < results.size(); ++k) {
        const auto& coarse = results[k];
        const auto& fine = results[k + 1];
        const auto& ct = coarse.path->times();
        const auto& ft = fine.path->times();
        double c0 = ct[coarse.i0], c1 = ct[coarse.i1];
        double f0 = ft[fine.i0], f1 = ft[fine.i1];
        if (c0 != f0 || c1 != f1)
            reject("refine_and_compare: windows have different end times");
        for (std::size_t i = coarse.i0; i <= coarse.i1; ++i)
            if (!std::binary_search(ft.begin(), ft.end(), ct[i]))
                reject("refine_and_compare: grids are not nested");
        rep.deviation.push_back(max_sigma_norm(coarse.total - fine.total));
        rep.mesh.push_back(coarse.mesh);
    }
    rep.exponent = loglog_slope(rep.mesh, rep.deviation);
    return rep;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int n = 0;
    for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            continue;
        double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2)
        return std::numeric_limits<double>::quiet_NaN();
    double den = n * sxx - sx * sx;
    if (den == 0.0)
        return std::numeric_limits<double>::quiet_NaN();
    return (n * sxy - sx * sy) / den;
}

} // namespace cocycle
