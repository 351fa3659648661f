#pragma once

#include "cocycle/one_form.hpp"
#include "cocycle/polynomial.hpp"
#include "cocycle/sewing.hpp"

#include <vector>

namespace cocycle {

// Path h in U = R^m coupled to the base path by a kernel form: h_t = h0 + int_start^t beta(g) dg.
struct DominatedPath {
    KernelPtr form;
    std::vector<double> h0;
    double theta = 0.0;
    std::size_t start = 0;
    // One entry per grid index; entries before start equal h0.
    std::vector<std::vector<double>> trace;

    const PathPtr& base() const { return form->base(); }
    int dim() const { return form->out_dim(); }
    std::vector<double> increment(std::size_t s, std::size_t t) const;
};

// Sews the form from grid index start; h0 defaults to zero.
DominatedPath dominate(KernelPtr form, double theta, std::vector<double> h0 = {}, std::size_t start = 0);

// Forms add, so traces add.
DominatedPath operator+(const DominatedPath& a, const DominatedPath& b);

// ||beta||_theta^omega of the coupling, probing at most max_points grid times.
SlowVaryingReport certify(const DominatedPath& d, const Control& omega, double p,
                          std::size_t max_points = 129);
// sup |h_t - h_s - beta_s(g_s, g_{s,t})| / omega(s,t)^theta over probed pairs.
double remainder_constant(const DominatedPath& d, const Control& omega, std::size_t max_points = 129);

// int (h1_u - h1_start) ⊗ dh2_u, valued in U1 ⊗ U2 flattened as i * m2 + j. Needs the map I.
DominatedPath iterated_integral(const DominatedPath& d1, const DominatedPath& d2);

// Coupling of the pointwise product h1 ⊗ h2 through the star maps sigma1 * sigma2.
DominatedPath product(const DominatedPath& d1, const DominatedPath& d2);
// The three kernel summands of product() at grid time s: h1 ⊗ beta2, beta1 ⊗ h2, star part.
std::vector<KernelPtr> product_summands(const DominatedPath& d1, const DominatedPath& d2);

// f(h_t) - f(h_start) for f: U -> W with gamma > p; theta becomes min(theta, gamma/p, ([p]+1)/p).
DominatedPath compose(const DominatedPath& d, const LipFunction& f, double p);

// Gamma_{start,t} = 1 + x^1 + ... + x^K in the step-K nilpotent group over U, built by
// repeated iterated integrals.
struct GroupEnhancement {
    PathPtr base;
    std::size_t start = 0;
    int levels = 0;
    // Kernel of the enhanced path (degree one of the result).
    KernelPtr form;
    // x^1..x^K as dominated paths in U^{⊗k}.
    std::vector<DominatedPath> parts;
    // Gamma_{start,t}; unit before start.
    PathPtr gamma;

    // B_{s,s}(g_s, .): rows over the step-K system of U, columns over the base system.
    std::vector<double> B(std::size_t s) const;
    const HopfSystem& target_system() const { return gamma->system(); }
};

GroupEnhancement enhance(const DominatedPath& d, int levels);

// Coupling over g whose trace equals that of outer, a dominated path over enh.gamma.
DominatedPath rebase(const DominatedPath& outer, const GroupEnhancement& enh);

// Y = enhancement of y = int f(x) dx over g, levels 1..[p].
GroupEnhancement rough_integrate(const std::vector<LipFunction>& F, const PathPtr& g, double p,
                                 double theta, int levels = 0);
// X_{s,t} = 1 + sum_k B^k_s (g_{s,t} - 1), the one-step comparator of Gamma_{s,t}.
GradedTensor comparator(const GroupEnhancement& enh, std::size_t s, std::size_t t);

// Path with a form over the degree-([p]-1) truncation: columns of higher degree vanish.
struct ControlledPath {
    KernelPtr form;
    std::vector<std::vector<double>> trace;
    double p = 0.0;

    const PathPtr& base() const { return form->base(); }
    int dim() const { return form->out_dim(); }
};

ControlledPath as_controlled(const DominatedPath& d, double p);

struct ControlledReport {
    // sup |gamma_t - gamma_s - beta_s(g_s, g_{s,t})| / omega^(theta - 1/p)
    double remainder = 0.0;
    // sup |(beta_t - beta_s)(g_t, .)|_k / omega^(theta - (1+k)/p), k = 1..[p]-1
    SlowVaryingReport variation;
    double M = 0.0;
    bool finite = true;
    std::size_t worst_s = 0;
    std::size_t worst_t = 0;
};

ControlledReport weakly_controlled_certificate(const ControlledPath& c, const Control& omega,
                                               double theta, std::size_t max_points = 129);

// (gamma1_s - gamma1_0) ⊗ (gamma2_t - gamma2_s) + (beta1_s ⊗ beta2_s) I(g_{s,t})
std::vector<double> controlled_one_step(const ControlledPath& c1, const ControlledPath& c2,
                                        std::size_t s, std::size_t t);
// Sum of adjacent one-step values: the sewn integral over the augmented path gamma2 ⊕ g.
std::vector<std::vector<double>> controlled_iterated_integral(const ControlledPath& c1,
                                                              const ControlledPath& c2);
// int (gamma_u - gamma_0) ⊗ dx_u through I', valued in U ⊗ R^d. Any level, both systems.
std::vector<std::vector<double>> controlled_integral_against_path(const ControlledPath& c);

// Step-2 butcher path over R^m: x(•i) = gamma^i increments, forests by products and
// x(i[j]) = int (gamma^j - gamma^j_0) dgamma^i.
SampledGroupPath butcher_enhancement(const ControlledPath& c);

} // namespace cocycle
