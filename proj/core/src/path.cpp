#include "cocycle/path.hpp"

#include "cocycle/error.hpp"
#include "cocycle/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace cocycle {

SampledGroupPath::SampledGroupPath(std::vector<double> times, std::vector<GradedTensor> values)
    : times_(std::move(times)), values_(std::move(values))
{
    if (times_.empty())
        reject("path needs at least one sample");
    if (times_.size() != values_.size())
        reject("path: time and value counts differ");
    for (std::size_t i = 1; i < times_.size(); ++i)
        if (!(times_[i] > times_[i - 1]))
            reject("path times must be strictly increasing (row " + std::to_string(i) + ")");
    inverses_.reserve(values_.size());
    for (const auto& v : values_) {
        require_same_system(v, values_.front());
        inverses_.push_back(inverse(v));
    }
}

GradedTensor SampledGroupPath::increment(std::size_t i, std::size_t j) const
{
    return mul(inverses_[i], values_[j]);
}

GradedTensor signature_of_segment(const SystemPtr& sys, std::span<const double> v)
{
    if (static_cast<int>(v.size()) != sys->d())
        reject("segment dimension does not match d");
    if (sys->kind() == Kind::nilpotent) {
        GradedTensor x(sys);
        for (int i = 0; i < sys->d(); ++i)
            x[sys->letter(i)] = v[i];
        return exp(x);
    }
    GradedTensor out(sys);
    out[0] = 1.0;
    for (std::size_t i = 1; i < sys->size(); ++i) {
        const Forest& f = sys->forest(i);
        double prod = 1.0;
        auto visit = [&](auto&& self, const Tree& t) -> void {
            prod *= v[t.label];
            for (const auto& c : t.children)
                self(self, c);
        };
        for (const auto& t : f)
            visit(visit, t);
        out[i] = prod / forest_factorial(f);
    }
    return out;
}

SampledGroupPath signature_piecewise_linear(Kind kind, int n, const std::vector<double>& times,
                                            const std::vector<std::vector<double>>& points)
{
    if (points.size() < 2)
        reject("signature needs at least two points");
    if (times.size() != points.size())
        reject("signature: time and point counts differ");
    const int d = static_cast<int>(points.front().size());
    auto sys = HopfSystem::get(kind, d, n);
    std::vector<GradedTensor> values;
    values.reserve(points.size());
    values.push_back(GradedTensor::unit(sys));
    std::vector<double> step(d);
    for (std::size_t k = 1; k < points.size(); ++k) {
        if (static_cast<int>(points[k].size()) != d)
            reject("inconsistent point dimension at row " + std::to_string(k));
        for (int i = 0; i < d; ++i)
            step[i] = points[k][i] - points[k - 1][i];
        values.push_back(mul(values.back(), signature_of_segment(sys, step)));
    }
    return SampledGroupPath(times, std::move(values));
}

SampledGroupPath dilate(const SampledGroupPath& g, double c)
{
    std::vector<GradedTensor> v;
    v.reserve(g.size());
    for (const auto& x : g.values())
        v.push_back(dilate(x, c));
    return SampledGroupPath(g.times(), std::move(v));
}

SampledGroupPath truncate(const SampledGroupPath& g, int m)
{
    std::vector<GradedTensor> v;
    v.reserve(g.size());
    for (const auto& x : g.values())
        v.push_back(truncate(x, m));
    return SampledGroupPath(g.times(), std::move(v));
}

std::vector<std::vector<double>> increment_norms(const SampledGroupPath& g, std::size_t i0,
                                                 std::size_t i1)
{
    if (i1 >= g.size() || i0 > i1)
        reject("increment_norms: bad window");
    std::size_t m = i1 - i0 + 1;
    std::vector<std::vector<double>> out(m, std::vector<double>(m, 0.0));
    parallel_for(m, [&](std::size_t a) {
        for (std::size_t b = a + 1; b < m; ++b)
            out[a][b] = homogeneous_norm(g.increment(i0 + a, i0 + b));
    });
    return out;
}

double p_variation_from_norms(const std::vector<std::vector<double>>& norms, double p)
{
    if (p < 1.0)
        reject("p-variation needs p >= 1");
    std::size_t m = norms.size();
    if (m < 2)
        return 0.0;
    std::vector<double> best(m, 0.0);
    for (std::size_t j = 1; j < m; ++j) {
        double b = -1.0;
        for (std::size_t k = 0; k < j; ++k)
            b = std::max(b, best[k] + std::pow(norms[k][j], p));
        best[j] = b;
    }
    return std::pow(best[m - 1], 1.0 / p);
}

double p_variation(const SampledGroupPath& g, double p, std::size_t i0, std::size_t i1)
{
    if (i0 >= i1)
        return 0.0;
    return p_variation_from_norms(increment_norms(g, i0, i1), p);
}

double p_variation(const SampledGroupPath& g, double p)
{
    return p_variation(g, p, 0, g.size() - 1);
}

Control Control::from_pvar(const SampledGroupPath& g, double p)
{
    if (p < 1.0)
        reject("control needs p >= 1");
    std::size_t n = g.size();
    auto norms = increment_norms(g, 0, n - 1);
    std::vector<std::vector<double>> powered(n);
    for (std::size_t a = 0; a < n; ++a) {
        powered[a].resize(n, 0.0);
        for (std::size_t b = a + 1; b < n; ++b)
            powered[a][b] = std::pow(norms[a][b], p);
    }
    Control c;
    c.table_.resize(n);
    parallel_for(n, [&](std::size_t s) {
        std::vector<double>& row = c.table_[s];
        row.assign(n - s, 0.0);
        for (std::size_t j = s + 1; j < n; ++j) {
            double b = 0.0;
            for (std::size_t k = s; k < j; ++k)
                b = std::max(b, row[k - s] + powered[k][j]);
            row[j - s] = b;
        }
    });
    return c;
}

Control Control::from_function(std::size_t n, const std::function<double(std::size_t, std::size_t)>& f)
{
    Control c;
    c.table_.resize(n);
    for (std::size_t s = 0; s < n; ++s) {
        c.table_[s].assign(n - s, 0.0);
        for (std::size_t t = s + 1; t < n; ++t)
            c.table_[s][t - s] = f(s, t);
    }
    return c;
}

Control Control::plus(const Control& other) const
{
    if (other.size() != size())
        reject("control size mismatch");
    Control c = *this;
    for (std::size_t s = 0; s < size(); ++s)
        for (std::size_t k = 0; k < c.table_[s].size(); ++k)
            c.table_[s][k] += other.table_[s][k];
    return c;
}

double Control::operator()(std::size_t i, std::size_t j) const
{
    if (j <= i)
        return 0.0;
    return table_[i][j - i];
}

double Control::mesh(std::size_t i0, std::size_t i1) const
{
    double m = 0.0;
    for (std::size_t i = i0; i < i1; ++i)
        m = std::max(m, (*this)(i, i + 1));
    return m;
}

Control control_from_pvar(const SampledGroupPath& g, double p) { return Control::from_pvar(g, p); }

} // namespace cocycle
