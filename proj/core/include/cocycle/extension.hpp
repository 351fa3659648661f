#pragma once

#include "cocycle/one_form.hpp"
#include "cocycle/sewing.hpp"

#include <vector>

namespace cocycle {

// Group element one level up with the same projection. Nilpotent: exp_{n+1}(log_n a).
// Butcher: non-tree forests of degree n + 1 get the product of their tree coefficients,
// new trees get zero.
GradedTensor lift_into_group(const GradedTensor& a, double tol = 1e-9);

enum class RaiseMode {
    // iota(c)^{-1} iota(cv) with iota the zero-padding into level m + 1.
    pad,
    // lift(c)^{-1} lift(cv) on group arguments; falls back to pad when sigma0(cv) != 1.
    lift,
};

// beta_s(a, b) built from c = (g_s)^{-1} a at level m, valued at level m + 1.
class LevelRaisingForm final : public OneForm {
public:
    LevelRaisingForm(PathPtr g, RaiseMode mode);

    const SystemPtr& domain() const override { return g_->system_ptr(); }
    const SystemPtr& target() const override { return target_; }
    GradedTensor eval(std::size_t s, const GradedTensor& a, const GradedTensor& v) const override;
    RaiseMode mode() const { return mode_; }

private:
    PathPtr g_;
    RaiseMode mode_;
    SystemPtr target_;
};

struct LevelStep {
    int level = 0;
    double theta = 0.0;
    double tracked_error = 0.0;
};

// Sews the level-raising form; needs m >= [p] and m + 1 > p.
SampledGroupPath extend_one_level(const PathPtr& g, double p, Schedule schedule = Schedule::omega,
                                  RaiseMode mode = RaiseMode::lift, LevelStep* info = nullptr);

struct Extension {
    PathPtr path;
    // |g^n|_{p-var} / |g|_{p-var}, 1 when nothing was extended.
    double ratio = 1.0;
    std::vector<LevelStep> steps;
};

Extension extend_to_level(const PathPtr& g, int n, double p, Schedule schedule = Schedule::omega,
                          RaiseMode mode = RaiseMode::lift);

} // namespace cocycle
