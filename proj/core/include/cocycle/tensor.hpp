#pragma once

#include "cocycle/hopf.hpp"

#include <functional>
#include <random>
#include <span>
#include <vector>

namespace cocycle {

// Element of the truncated algebra: one coefficient per index of the system.
class GradedTensor {
public:
    GradedTensor() = default;
    explicit GradedTensor(SystemPtr sys);
    GradedTensor(SystemPtr sys, std::vector<double> coeffs);

    static GradedTensor zero(SystemPtr sys) { return GradedTensor(std::move(sys)); }
    static GradedTensor unit(SystemPtr sys);

    const HopfSystem& system() const { return *sys_; }
    const SystemPtr& system_ptr() const { return sys_; }
    int level() const { return sys_->n(); }
    std::size_t size() const { return c_.size(); }

    double operator[](std::size_t i) const { return c_[i]; }
    double& operator[](std::size_t i) { return c_[i]; }
    const std::vector<double>& coeffs() const { return c_; }
    std::vector<double>& coeffs() { return c_; }
    std::span<const double> block(int k) const;

    GradedTensor& operator+=(const GradedTensor& o);
    GradedTensor& operator-=(const GradedTensor& o);
    GradedTensor& operator*=(double s);

private:
    SystemPtr sys_;
    std::vector<double> c_;
};

GradedTensor operator+(GradedTensor a, const GradedTensor& b);
GradedTensor operator-(GradedTensor a, const GradedTensor& b);
GradedTensor operator*(double s, GradedTensor a);
// Product induced by the coproduct table.
GradedTensor operator*(const GradedTensor& a, const GradedTensor& b);

GradedTensor mul(const GradedTensor& a, const GradedTensor& b);
GradedTensor inverse(const GradedTensor& a);
GradedTensor log(const GradedTensor& a);
GradedTensor exp(const GradedTensor& a);
GradedTensor dilate(const GradedTensor& a, double c);
// Drop every degree above m; the result lives in the level-m system.
GradedTensor truncate(const GradedTensor& a, int m);
// Zero-pad into the level-m system, m >= level(a).
GradedTensor embed(const GradedTensor& a, int m);
// a - sigma0(a) * unit
GradedTensor reduced(const GradedTensor& a);

double norm(const GradedTensor& a);
// sum over sigma of ||sigma(a)||^(1/|sigma|); nilpotent sigma are degree blocks.
double homogeneous_norm(const GradedTensor& a);
// max over sigma of ||sigma(a)||, sigma as in homogeneous_norm, degree 0 included.
double max_sigma_norm(const GradedTensor& a);
double max_abs_diff(const GradedTensor& a, const GradedTensor& b);
// Largest relative residual of the shuffle (nilpotent) or forest-product (butcher) relations.
double grouplike_defect(const GradedTensor& a);
bool grouplike_check(const GradedTensor& a, double tol);
bool all_finite(const GradedTensor& a);

void require_same_system(const GradedTensor& a, const GradedTensor& b);

// Butcher character: trees take the given values, forests the product over their trees.
GradedTensor butcher_character(const SystemPtr& sys, const std::function<double(std::size_t)>& tree_value);
// Nilpotent: product of n + 1 random segment exponentials. Butcher: random character.
GradedTensor random_grouplike(const SystemPtr& sys, std::mt19937_64& rng, double scale = 1.0);

} // namespace cocycle
