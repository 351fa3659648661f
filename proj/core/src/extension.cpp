#include "cocycle/extension.hpp"

#include "cocycle/error.hpp"

#include <cmath>

namespace cocycle {

GradedTensor lift_into_group(const GradedTensor& a, double tol)
{
    if (!grouplike_check(a, tol))
        reject("lift_into_group needs a group element (defect " + std::to_string(grouplike_defect(a)) + ")");
    const HopfSystem& sys = a.system();
    const int n = sys.n();
    if (sys.kind() == Kind::nilpotent) {
        GradedTensor out = exp(embed(log(a), n + 1));
        // Keep the projection exact rather than equal up to roundoff.
        std::copy(a.coeffs().begin(), a.coeffs().end(), out.coeffs().begin());
        return out;
    }
    GradedTensor out = embed(a, n + 1);
    const HopfSystem& up = out.system();
    for (std::size_t i = up.block_begin(n + 1); i < up.block_end(n + 1); ++i) {
        const Forest& f = up.forest(i);
        if (f.size() < 2)
            continue;
        double v = 1.0;
        for (const auto& t : f)
            v *= a[sys.index_of(Forest{t})];
        out[i] = v;
    }
    return out;
}

LevelRaisingForm::LevelRaisingForm(PathPtr g, RaiseMode mode) : g_(std::move(g)), mode_(mode)
{
    const HopfSystem& sys = g_->system();
    target_ = HopfSystem::get(sys.kind(), sys.d(), sys.n() + 1);
}

GradedTensor LevelRaisingForm::eval(std::size_t s, const GradedTensor& a, const GradedTensor& v) const
{
    const int up = target_->n();
    GradedTensor c = mul(g_->inverse_value(s), a);
    GradedTensor cv = mul(c, v);
    if (mode_ == RaiseMode::lift && std::abs(cv[0] - 1.0) < 1e-14)
        return mul(inverse(lift_into_group(c)), lift_into_group(cv));
    return mul(inverse(embed(c, up)), embed(cv, up));
}

SampledGroupPath extend_one_level(const PathPtr& g, double p, Schedule schedule, RaiseMode mode,
                                  LevelStep* info)
{
    const int m = g->level();
    if (m < static_cast<int>(std::floor(p)))
        reject("extension needs a path of level at least [p]");
    if (!(m + 1 > p))
        throw Error(ErrorKind::certificate, "extension needs m + 1 > p (Young threshold)");
    const double theta = (m + 1) / p;
    Control omega;
    if (schedule == Schedule::omega)
        omega = Control::from_pvar(*g, p);
    auto form = std::make_shared<LevelRaisingForm>(g, mode);
    SewingResult r = sew(form, g, omega, theta, schedule);
    if (info)
        *info = LevelStep{m + 1, theta, r.tracked_error};
    return SampledGroupPath(g->times(), std::move(r.values));
}

Extension extend_to_level(const PathPtr& g, int n, double p, Schedule schedule, RaiseMode mode)
{
    if (n < g->level())
        reject("extend_to_level: target level below the path level");
    Extension ext;
    ext.path = g;
    while (ext.path->level() < n) {
        LevelStep step;
        ext.path = std::make_shared<const SampledGroupPath>(extend_one_level(ext.path, p, schedule, mode, &step));
        ext.steps.push_back(step);
    }
    if (!ext.steps.empty()) {
        double base = p_variation(*g, p);
        ext.ratio = base > 0.0 ? p_variation(*ext.path, p) / base : 1.0;
    }
    return ext;
}

} // namespace cocycle
