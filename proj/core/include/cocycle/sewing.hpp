#pragma once

#include "cocycle/one_form.hpp"
#include "cocycle/path.hpp"

#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace cocycle {

enum class Schedule { omega, dyadic, ltr };

std::string to_string(Schedule s);
Schedule schedule_from_string(const std::string& name);

struct Removal {
    std::size_t point;
    // max_sigma |beta_a(g_a, g_{a,c}) - beta_a(g_a, g_{a,j}) beta_j(g_j, g_{j,c})|
    double defect;
};

struct SewingResult {
    FormPtr form;
    PathPtr path;
    std::size_t i0 = 0;
    std::size_t i1 = 0;
    double theta = 0.0;
    Schedule schedule = Schedule::omega;
    // Indefinite integral as a left fold; values[k] belongs to grid index i0 + k.
    std::vector<GradedTensor> values;
    // Full-grid product associated in the order the schedule merged the blocks.
    GradedTensor total;
    std::vector<Removal> removals;
    // Sum of the removal defects.
    double tracked_error = 0.0;
    // Largest omega over adjacent grid points of the window; NaN without a control.
    double mesh = std::numeric_limits<double>::quiet_NaN();

    const GradedTensor& value(std::size_t i) const { return values[i - i0]; }
    // Integral over [t_i, t_j] = value(i)^{-1} value(j).
    GradedTensor increment(std::size_t i, std::size_t j) const;
};

// Integral of beta against g over the grid window [i0, i1]. The omega schedule needs a
// control on the full grid; the other schedules accept an empty one.
SewingResult sew(FormPtr beta, PathPtr g, const Control& omega, double theta,
                 Schedule schedule = Schedule::omega, std::size_t i0 = 0,
                 std::size_t i1 = std::numeric_limits<std::size_t>::max());

// Runs integrable_condition_check first and refuses with a certificate error when the
// constant is not finite or exceeds max_constant.
SewingResult certified_sew(FormPtr beta, PathPtr g, const Control& omega, double theta,
                           Schedule schedule, double max_constant,
                           std::size_t max_points = 41);

// max_sigma |sigma(int_s^t) - sigma(beta_s(g_s, g_{s,t}))|
double local_estimate(const SewingResult& r, std::size_t s, std::size_t t);

struct LocalEstimateFit {
    // Per dyadic level: largest omega and largest deviation over the windows.
    std::vector<double> omega;
    std::vector<double> deviation;
    double slope = 0.0;
    // sup deviation / omega^theta over every window.
    double constant = 0.0;
};

LocalEstimateFit local_estimate_fit(const SewingResult& r, const Control& omega,
                                    std::size_t min_steps = 4);

struct ConvergenceReport {
    // deviation[k] = max_sigma |total_k - total_{k+1}| between consecutive grids.
    std::vector<double> deviation;
    std::vector<double> mesh;
    double exponent = 0.0;
};

// Results ordered from coarse to fine, each grid nested in the next.
ConvergenceReport refine_and_compare(const std::vector<SewingResult>& results);

// Least-squares slope of log y against log x over the pairs with x, y > 0.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace cocycle
