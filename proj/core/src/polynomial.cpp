#include "cocycle/polynomial.hpp"

#include "cocycle/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cocycle {

static std::size_t ipow(std::size_t b, int e)
{
    std::size_t r = 1;
    for (int i = 0; i < e; ++i)
        r *= b;
    return r;
}

Polynomial::Polynomial(int in_dim, int out_dim, std::vector<std::vector<double>> coeffs)
    : in_(in_dim), out_(out_dim), coeffs_(std::move(coeffs))
{
    if (in_ < 1 || out_ < 1)
        reject("polynomial dimensions must be positive");
    if (coeffs_.empty())
        reject("polynomial needs at least the value at the origin");
    for (std::size_t l = 0; l < coeffs_.size(); ++l)
        if (coeffs_[l].size() != static_cast<std::size_t>(out_) * ipow(in_, static_cast<int>(l)))
            reject("polynomial derivative " + std::to_string(l) + " has the wrong size");
}

std::vector<double> contract_last(const std::vector<double>& a, std::span<const double> x)
{
    std::size_t in = x.size();
    std::vector<double> out(a.size() / in, 0.0);
    for (std::size_t r = 0; r < out.size(); ++r) {
        double s = 0.0;
        for (std::size_t i = 0; i < in; ++i)
            s += a[r * in + i] * x[i];
        out[r] = s;
    }
    return out;
}

std::vector<double> Polynomial::derivative(int l, std::span<const double> x) const
{
    if (static_cast<int>(x.size()) != in_)
        reject("polynomial evaluated at a point of the wrong dimension");
    std::size_t n = static_cast<std::size_t>(out_) * ipow(in_, l);
    std::vector<double> out(n, 0.0);
    double fact = 1.0;
    for (int j = 0; l + j <= degree(); ++j) {
        if (j > 0)
            fact *= j;
        std::vector<double> a = coeffs_[l + j];
        for (int c = 0; c < j; ++c)
            a = contract_last(a, x);
        for (std::size_t i = 0; i < n; ++i)
            out[i] += a[i] / fact;
    }
    return out;
}

double Polynomial::symmetry_defect() const
{
    double worst = 0.0;
    for (int l = 2; l <= degree(); ++l) {
        const auto& a = coeffs_[l];
        std::size_t block = ipow(in_, l);
        std::vector<int> digits(l);
        for (std::size_t r = 0; r < static_cast<std::size_t>(out_); ++r) {
            for (std::size_t k = 0; k < block; ++k) {
                std::size_t rem = k;
                for (int p = l - 1; p >= 0; --p) {
                    digits[p] = static_cast<int>(rem % in_);
                    rem /= in_;
                }
                std::vector<int> sorted = digits;
                std::sort(sorted.begin(), sorted.end());
                std::size_t canon = 0;
                for (int dgt : sorted)
                    canon = canon * in_ + dgt;
                worst = std::max(worst, std::abs(a[r * block + k] - a[r * block + canon]));
            }
        }
    }
    return worst;
}

LipFunction LipFunction::from_polynomial(const Polynomial& q)
{
    LipFunction f;
    f.in_dim = q.in_dim();
    f.out_dim = q.out_dim();
    f.gamma = std::numeric_limits<double>::infinity();
    f.max_order = std::max(q.degree(), 8);
    f.derivative = [q](int l, std::span<const double> x) { return q.derivative(l, x); };
    return f;
}

} // namespace cocycle
