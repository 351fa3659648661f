#pragma once

#include "cocycle/tensor.hpp"

#include <map>
#include <vector>

namespace cocycle {

// Element of a tensor power of T^(n): sparse coefficients keyed by index tuples.
using MultiIndex = std::vector<std::size_t>;
using MultiTensor = std::map<MultiIndex, double>;

MultiTensor& add_into(MultiTensor& acc, const MultiTensor& x, double scale = 1.0);
MultiTensor operator+(const MultiTensor& a, const MultiTensor& b);
MultiTensor operator-(const MultiTensor& a, const MultiTensor& b);
double max_abs(const MultiTensor& x);
MultiTensor outer(const GradedTensor& x, const GradedTensor& y);
// (a ⊗ ... ⊗ a) X, slot-wise left multiplication.
MultiTensor act(const GradedTensor& a, const MultiTensor& x);
// Keep components V^{⊗j1} ⊗ V^{⊗j2} with j_i >= 1 and j1 + j2 <= n.
MultiTensor project_n2(const HopfSystem& sys, const MultiTensor& x, int n);
// As project_n2, with the right slot restricted to degree one.
MultiTensor project_n2_prime(const HopfSystem& sys, const MultiTensor& x, int n);

struct PairTerm {
    std::size_t x;
    std::size_t y;
    double c;
};

// Linear map T -> T ⊗ T, stored as the image of every basis vector.
class PairMap {
public:
    PairMap() = default;
    PairMap(SystemPtr sys, std::vector<std::vector<PairTerm>> by_source)
        : sys_(std::move(sys)), by_source_(std::move(by_source)) {}

    const std::vector<PairTerm>& image(std::size_t tau) const { return by_source_[tau]; }
    MultiTensor apply(const GradedTensor& v) const;
    const HopfSystem& system() const { return *sys_; }

private:
    SystemPtr sys_;
    std::vector<std::vector<PairTerm>> by_source_;
};

bool has_map_I(const HopfSystem& sys);
// Nilpotent: shuffle formula at any level. Butcher: ladder read-off, level 2 only.
const PairMap& map_I_table(const SystemPtr& sys);
// Nilpotent: map_I with right degree one. Butcher: grafted-tree read-off.
const PairMap& map_I_prime_table(const SystemPtr& sys);
MultiTensor map_I(const GradedTensor& a);
MultiTensor map_I_prime(const GradedTensor& a);

// I^m = (I^{m-1} ⊗ Id) ∘ I, nilpotent only, m <= n - 1.
MultiTensor map_I_power(const GradedTensor& a, int m);
// Ordered-shuffle expansion of I^m.
MultiTensor map_I_power_closed(const GradedTensor& a, int m);

// Tuples (sigma_1..sigma_l) with sum of degrees <= n, each paired with the
// linear read-off of sigma_1 * ... * sigma_l from a degree block.
struct StarEntry {
    MultiIndex sigmas;
    std::vector<std::pair<std::size_t, double>> source;
};
const std::vector<StarEntry>& star_table(const SystemPtr& sys, int l);

// sigma_1 * ... * sigma_l applied to a. Nilpotent: sigmas are degrees k_i and
// the result lives in V^{⊗k_1} ⊗ ... ; butcher: sigmas are forest indices and
// the result is the concatenated forest's coefficient.
MultiTensor star_map(const std::vector<std::size_t>& sigmas, const GradedTensor& a);
// sigma_1(a) ⊗ ... ⊗ sigma_l(a), for comparison on grouplike inputs.
MultiTensor pointwise_tensor(const std::vector<std::size_t>& sigmas, const GradedTensor& a);

} // namespace cocycle
