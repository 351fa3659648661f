#pragma once

#include "cocycle/path.hpp"
#include "cocycle/polynomial.hpp"
#include "cocycle/tensor.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace cocycle {

// Time-varying cocyclic one-form: beta_s(a, v) for grid index s, group element a
// of the domain and direction v, linear in v.
class OneForm {
public:
    virtual ~OneForm() = default;
    virtual const SystemPtr& domain() const = 0;
    virtual const SystemPtr& target() const = 0;
    virtual GradedTensor eval(std::size_t s, const GradedTensor& a, const GradedTensor& v) const = 0;
};

using FormPtr = std::shared_ptr<const OneForm>;

// beta(a, b) = alpha(a)^{-1} alpha(ab) for a linear alpha with alpha(G) inside H.
class ConstantForm final : public OneForm {
public:
    using Alpha = std::function<GradedTensor(const GradedTensor&)>;

    // Probes alpha on random group elements and rejects images outside the target group.
    ConstantForm(SystemPtr domain, SystemPtr target, Alpha alpha, double tol = 1e-10, int probes = 8);

    const SystemPtr& domain() const override { return domain_; }
    const SystemPtr& target() const override { return target_; }
    GradedTensor eval(std::size_t s, const GradedTensor& a, const GradedTensor& v) const override;
    GradedTensor alpha(const GradedTensor& a) const { return alpha_(a); }

private:
    SystemPtr domain_;
    SystemPtr target_;
    Alpha alpha_;
};

// alpha = 1_m, so beta(a, b) = 1_m(b).
FormPtr truncation_form(const SystemPtr& domain, int m);
// alpha = identity, so beta(a, b) = b.
FormPtr identity_form(const SystemPtr& domain);

// Cocyclic lift of a polynomial one-form p: R^d -> L(R^d, R^m) of degree <= n - 1 into
// the step-n nilpotent group over R^m. The domain is the step-L nilpotent group over R^d;
// L = n * n gives the exact form, L = n the truncated variant.
class PolynomialForm final : public OneForm {
public:
    PolynomialForm(Polynomial p, int m, int n, int domain_level);

    const SystemPtr& domain() const override { return domain_; }
    const SystemPtr& target() const override { return target_; }
    GradedTensor eval(std::size_t s, const GradedTensor& a, const GradedTensor& v) const override;
    const Polynomial& polynomial() const { return p_; }

private:
    struct Entry {
        std::vector<std::size_t> words;
        std::vector<std::pair<std::size_t, double>> source;
    };

    Polynomial p_;
    int m_;
    int n_;
    SystemPtr domain_;
    SystemPtr target_;
    std::vector<Entry> entries_;
};

// Level-one closed form sum_l (D^l p)(x_s) x^{l+1}_{s,t} for a polynomial one-form,
// read from a path of level >= degree + 1.
std::vector<double> polynomial_increment(const Polynomial& p, int m, const SampledGroupPath& g,
                                         std::size_t s, std::size_t t);

// One-form with flat target U = R^m, stored as the step-1 nilpotent system over R^m:
// beta_s(a, v) = sigma0(v) + K_s(g_s^{-1} a (v - sigma0(v))).
class KernelForm final : public OneForm {
public:
    // kernels holds one out_dim x domain-size matrix (row-major) per grid time, or a
    // single matrix shared by all times.
    KernelForm(PathPtr base, int out_dim, std::vector<std::vector<double>> kernels);

    const SystemPtr& domain() const override { return base_->system_ptr(); }
    const SystemPtr& target() const override { return target_; }
    GradedTensor eval(std::size_t s, const GradedTensor& a, const GradedTensor& v) const override;

    const PathPtr& base() const { return base_; }
    int out_dim() const { return out_; }
    const std::vector<double>& kernel(std::size_t s) const;
    std::vector<double> apply(std::size_t s, const GradedTensor& w) const;
    // U part of beta_s(g_s, g_{s,t}).
    std::vector<double> one_step(std::size_t s, std::size_t t) const;

private:
    PathPtr base_;
    int out_;
    SystemPtr target_;
    std::vector<std::vector<double>> kernels_;
};

using KernelPtr = std::shared_ptr<const KernelForm>;

KernelPtr add(const KernelForm& a, const KernelForm& b);
KernelPtr scale(const KernelForm& a, double c);
KernelPtr zero_form(const PathPtr& base, int out_dim);
// Level-one increment form: beta_s(a, v) = pi_1(g_s^{-1} a (v - sigma0 v)).
KernelPtr increment_form(const PathPtr& base);
GradedTensor flat_vector(const SystemPtr& target, const std::vector<double>& u);

// beta_s(a, b) = sum_{l < [p]} c_l (D^l F_s)(x_s) pi_{l+1}(g_s^{-1} a (b - 1)), x_s = pi_1(g_s).
// Nilpotent bases use words (i_1..i_l, j) with c_l = 1; butcher bases use corollas with
// c_l = 1 / l!. F holds one function per grid time or a single one. The output index of
// F is r * d + j for U-coordinate r and direction j.
KernelPtr rough_one_form(const std::vector<LipFunction>& F, const PathPtr& g, double p);

struct RegularityReport {
    // quotients[l]: sup |((D^l F_t) - (D^l F_s))(x_t)| / omega(s,t)^(theta - (l+1)/p)
    std::vector<double> quotients;
    double constant = 0.0;
    bool finite = true;
    std::size_t worst_s = 0;
    std::size_t worst_t = 0;
    int worst_l = 0;
};

// Compensated regularity of a time-varying family F_s along x_t = pi_1(g_t).
RegularityReport time_varying_regularity(const std::vector<LipFunction>& F, const SampledGroupPath& g,
                                         const Control& omega, double theta, double p,
                                         std::size_t max_points = 129);

struct SlowVaryingReport {
    double M = 0.0;
    double theta = 0.0;
    double p = 0.0;
    // quotients[k - 1]: sup over probed pairs of |(beta_t - beta_s)(g_t, .)|_k / omega(s,t)^(theta - k/p)
    std::vector<double> quotients;
    double norm = 0.0;
    bool finite = true;
    std::size_t worst_s = 0;
    std::size_t worst_t = 0;
    int worst_k = 0;
    std::size_t points = 0;
};

// Probes the coefficient basis on at most max_points evenly spaced grid times.
SlowVaryingReport slowly_varying_certificate(const OneForm& beta, const SampledGroupPath& g,
                                             const Control& omega, double theta, double p,
                                             std::size_t max_points = 129);

struct IntegrableReport {
    double M = 0.0;
    double constant = 0.0;
    double theta = 0.0;
    bool finite = true;
    std::size_t worst_s = 0;
    std::size_t worst_u = 0;
    std::size_t worst_t = 0;
    std::size_t points = 0;
};

// M = sup max_sigma |sigma(beta_s(g_s, g_{s,t}))| and the smallest C with
// max_sigma |sigma((beta_u - beta_s)(g_u, g_{u,t}))| <= C omega(s,t)^theta over grid triples.
IntegrableReport integrable_condition_check(const OneForm& beta, const SampledGroupPath& g,
                                            const Control& omega, double theta,
                                            std::size_t max_points = 41);

// At most max_points indices, evenly spread over [0, n), both ends included.
std::vector<std::size_t> probe_indices(std::size_t n, std::size_t max_points);

} // namespace cocycle
