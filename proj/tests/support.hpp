#pragma once

#include "cocycle/path.hpp"
#include "cocycle/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <random>
#include <span>
#include <vector>

namespace support {

using Points = std::vector<std::vector<double>>;

inline std::vector<double> uniform_times(std::size_t n)
{
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i)
        t[i] = n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
    return t;
}

// Gaussian steps with total variance scale^2 per coordinate.
inline Points random_walk(std::mt19937_64& rng, int d, std::size_t n, double scale = 1.0)
{
    std::normal_distribution<double> step(0.0, scale / std::sqrt(static_cast<double>(std::max<std::size_t>(n - 1, 1))));
    Points x(n, std::vector<double>(d, 0.0));
    for (std::size_t i = 1; i < n; ++i)
        for (int k = 0; k < d; ++k)
            x[i][k] = x[i - 1][k] + step(rng);
    return x;
}

// Smooth curve on [0, 1] starting at the origin.
inline Points smooth_curve(int d, std::size_t n)
{
    Points x(n, std::vector<double>(d, 0.0));
    auto t = uniform_times(n);
    for (std::size_t i = 0; i < n; ++i)
        for (int k = 0; k < d; ++k)
            x[i][k] = std::sin((k + 1.3) * t[i] * std::numbers::pi) / (k + 1) + 0.4 * k * t[i] * t[i];
    return x;
}

// Inserts r - 1 equally spaced points inside every segment.
inline void refine(std::vector<double>& times, Points& x, int r)
{
    std::vector<double> t2;
    Points x2;
    for (std::size_t i = 0; i + 1 < times.size(); ++i)
        for (int q = 0; q < r; ++q) {
            double a = static_cast<double>(q) / r;
            t2.push_back(times[i] + a * (times[i + 1] - times[i]));
            std::vector<double> p(x[i].size());
            for (std::size_t k = 0; k < p.size(); ++k)
                p[k] = x[i][k] + a * (x[i + 1][k] - x[i][k]);
            x2.push_back(std::move(p));
        }
    t2.push_back(times.back());
    x2.push_back(x.back());
    times = std::move(t2);
    x = std::move(x2);
}

inline cocycle::PathPtr signature_path(cocycle::Kind kind, int n, const std::vector<double>& times,
                                       const Points& x)
{
    return std::make_shared<const cocycle::SampledGroupPath>(
        cocycle::signature_piecewise_linear(kind, n, times, x));
}

// Grid points i * stride of an existing path.
inline cocycle::PathPtr subsample(const cocycle::SampledGroupPath& g, std::size_t stride)
{
    std::vector<double> t;
    std::vector<cocycle::GradedTensor> v;
    for (std::size_t i = 0; i < g.size(); i += stride) {
        t.push_back(g.time(i));
        v.push_back(g.value(i));
    }
    return std::make_shared<const cocycle::SampledGroupPath>(std::move(t), std::move(v));
}

// Random polynomial with symmetric derivative arrays.
inline cocycle::Polynomial random_polynomial(std::mt19937_64& rng, int in, int out, int degree, double scale = 1.0)
{
    std::uniform_real_distribution<double> u(-scale, scale);
    std::vector<std::vector<double>> coeffs;
    for (int l = 0; l <= degree; ++l) {
        std::size_t slots = 1;
        for (int q = 0; q < l; ++q)
            slots *= static_cast<std::size_t>(in);
        std::vector<double> c(static_cast<std::size_t>(out) * slots);
        for (int r = 0; r < out; ++r) {
            std::map<std::vector<int>, double> seen;
            for (std::size_t m = 0; m < slots; ++m) {
                std::vector<int> idx(l);
                std::size_t rem = m;
                for (int q = l - 1; q >= 0; --q) {
                    idx[q] = static_cast<int>(rem % in);
                    rem /= in;
                }
                std::sort(idx.begin(), idx.end());
                auto it = seen.find(idx);
                if (it == seen.end())
                    it = seen.emplace(idx, u(rng)).first;
                c[r * slots + m] = it->second;
            }
        }
        coeffs.push_back(std::move(c));
    }
    return cocycle::Polynomial(in, out, std::move(coeffs));
}

// Components sin(a_k . x + b_k) with derivatives to any order and a chosen gamma.
inline cocycle::LipFunction sine_field(int in, int out, double gamma, unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto a = std::make_shared<std::vector<std::vector<double>>>(out, std::vector<double>(in));
    auto b = std::make_shared<std::vector<double>>(out);
    for (int k = 0; k < out; ++k) {
        for (int j = 0; j < in; ++j)
            (*a)[k][j] = u(rng);
        (*b)[k] = u(rng);
    }
    cocycle::LipFunction f;
    f.in_dim = in;
    f.out_dim = out;
    f.gamma = gamma;
    f.max_order = 8;
    f.derivative = [a, b, in, out](int l, std::span<const double> x) {
        std::size_t slots = 1;
        for (int q = 0; q < l; ++q)
            slots *= static_cast<std::size_t>(in);
        std::vector<double> r(static_cast<std::size_t>(out) * slots);
        for (int k = 0; k < out; ++k) {
            double arg = (*b)[k];
            for (int j = 0; j < in; ++j)
                arg += (*a)[k][j] * x[j];
            double c = std::sin(arg + l * std::numbers::pi / 2);
            for (std::size_t m = 0; m < slots; ++m) {
                double v = c;
                std::size_t rem = m;
                for (int q = 0; q < l; ++q) {
                    v *= (*a)[k][rem % in];
                    rem /= in;
                }
                r[k * slots + m] = v;
            }
        }
        return r;
    };
    return f;
}

} // namespace support
