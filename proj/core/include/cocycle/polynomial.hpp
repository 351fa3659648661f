#pragma once

#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace cocycle {

// Polynomial map R^in -> R^out given by its derivatives at the origin.
// coeffs[l] has out * in^l entries, row-major, the derivative slots last.
class Polynomial {
public:
    Polynomial() = default;
    Polynomial(int in_dim, int out_dim, std::vector<std::vector<double>> coeffs);

    int in_dim() const { return in_; }
    int out_dim() const { return out_; }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<std::vector<double>>& coeffs() const { return coeffs_; }

    // D^l q(x) by Taylor expansion around the origin.
    std::vector<double> derivative(int l, std::span<const double> x) const;
    std::vector<double> operator()(std::span<const double> x) const { return derivative(0, x); }
    // Largest asymmetry over permutations of the derivative slots.
    double symmetry_defect() const;

private:
    int in_ = 0;
    int out_ = 0;
    std::vector<std::vector<double>> coeffs_;
};

// Contract the last slot of an array of shape (rows, in) with x.
std::vector<double> contract_last(const std::vector<double>& a, std::span<const double> x);

// Function with a derivative stack D^l f, l = 0..max_order, same layout as Polynomial.
// For one-forms f: R^d -> L(R^d, R^m) the output index is r * d + j.
struct LipFunction {
    int in_dim = 0;
    int out_dim = 0;
    double gamma = std::numeric_limits<double>::infinity();
    int max_order = 0;
    std::function<std::vector<double>(int, std::span<const double>)> derivative;

    static LipFunction from_polynomial(const Polynomial& q);
};

} // namespace cocycle
