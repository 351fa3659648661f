#pragma once

#include "cocycle/tensor.hpp"

#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace cocycle {

// Group-valued path sampled on a strictly increasing grid.
class SampledGroupPath {
public:
    SampledGroupPath(std::vector<double> times, std::vector<GradedTensor> values);

    std::size_t size() const { return times_.size(); }
    double time(std::size_t i) const { return times_[i]; }
    const std::vector<double>& times() const { return times_; }
    const GradedTensor& value(std::size_t i) const { return values_[i]; }
    const GradedTensor& inverse_value(std::size_t i) const { return inverses_[i]; }
    const std::vector<GradedTensor>& values() const { return values_; }
    // g_s^{-1} g_t
    GradedTensor increment(std::size_t i, std::size_t j) const;

    const HopfSystem& system() const { return values_.front().system(); }
    const SystemPtr& system_ptr() const { return values_.front().system_ptr(); }
    int level() const { return system().n(); }

private:
    std::vector<double> times_;
    std::vector<GradedTensor> values_;
    std::vector<GradedTensor> inverses_;
};

using PathPtr = std::shared_ptr<const SampledGroupPath>;

// Nilpotent: exp(v). Butcher: forest coefficient prod v_label / forest factorial.
GradedTensor signature_of_segment(const SystemPtr& sys, std::span<const double> v);

// Running Chen products of segment signatures; the value at the first point is the unit.
SampledGroupPath signature_piecewise_linear(Kind kind, int n, const std::vector<double>& times,
                                            const std::vector<std::vector<double>>& points);

SampledGroupPath dilate(const SampledGroupPath& g, double c);
SampledGroupPath truncate(const SampledGroupPath& g, int m);

// Matrix of homogeneous norms |g_{i,j}| for i < j inside [i0, i1], row-major over the window.
std::vector<std::vector<double>> increment_norms(const SampledGroupPath& g, std::size_t i0,
                                                 std::size_t i1);
// Exact supremum of sum |g_{t_k,t_{k+1}}|^p over grid sub-partitions, O(N^2).
double p_variation_from_norms(const std::vector<std::vector<double>>& norms, double p);
double p_variation(const SampledGroupPath& g, double p, std::size_t i0, std::size_t i1);
double p_variation(const SampledGroupPath& g, double p);

// Superadditive function on grid pairs, stored densely.
class Control {
public:
    Control() = default;
    static Control from_pvar(const SampledGroupPath& g, double p);
    static Control from_function(std::size_t n, const std::function<double(std::size_t, std::size_t)>& f);
    Control plus(const Control& other) const;

    std::size_t size() const { return table_.size(); }
    double operator()(std::size_t i, std::size_t j) const;
    // Largest omega over adjacent grid pairs inside [i0, i1].
    double mesh(std::size_t i0, std::size_t i1) const;

private:
    std::vector<std::vector<double>> table_;
};

Control control_from_pvar(const SampledGroupPath& g, double p);

} // namespace cocycle
