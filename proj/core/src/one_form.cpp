#include "cocycle/one_form.hpp"

#include "cocycle/error.hpp"
#include "cocycle/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace cocycle {

namespace {

std::size_t word_code(const Word& w, std::size_t begin, std::size_t end, int d)
{
    std::size_t c = 0;
    for (std::size_t i = begin; i < end; ++i)
        c = c * static_cast<std::size_t>(d) + static_cast<std::size_t>(w[i]);
    return c;
}

std::size_t ipow(std::size_t b, int e)
{
    std::size_t r = 1;
    for (int i = 0; i < e; ++i)
        r *= b;
    return r;
}

std::vector<double> level_one(const GradedTensor& a)
{
    const HopfSystem& sys = a.system();
    std::vector<double> x(sys.d());
    for (int i = 0; i < sys.d(); ++i)
        x[i] = a[sys.letter(i)];
    return x;
}

// Quotient num / omega^e with the convention 0 / 0 = 0 below a roundoff floor.
double quotient(double num, double omega, double e, double floor)
{
    if (num <= floor)
        return 0.0;
    if (omega <= 0.0)
        return e > 0.0 ? std::numeric_limits<double>::infinity() : num;
    return num / std::pow(omega, e);
}

double value_norm(const GradedTensor& x)
{
    double s = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i)
        s += std::abs(x[i]);
    return s;
}

} // namespace

ConstantForm::ConstantForm(SystemPtr domain, SystemPtr target, Alpha alpha, double tol, int probes)
    : domain_(std::move(domain)), target_(std::move(target)), alpha_(std::move(alpha))
{
    std::mt19937_64 rng(0x5eed);
    for (int i = 0; i < probes; ++i) {
        GradedTensor a = random_grouplike(domain_, rng, 0.7);
        GradedTensor img = alpha_(a);
        if (img.system_ptr() != target_)
            reject("alpha maps into a different system than the declared target");
        if (!grouplike_check(img, tol))
            reject("alpha maps a group element outside the target group (defect " +
                   std::to_string(grouplike_defect(img)) + ")");
    }
}

GradedTensor ConstantForm::eval(std::size_t, const GradedTensor& a, const GradedTensor& v) const
{
    return mul(inverse(alpha_(a)), alpha_(mul(a, v)));
}

FormPtr truncation_form(const SystemPtr& domain, int m)
{
    if (m < 0 || m > domain->n())
        reject("truncation level out of range");
    auto target = HopfSystem::get(domain->kind(), domain->d(), m);
    return std::make_shared<ConstantForm>(domain, target,
                                          [m](const GradedTensor& a) { return truncate(a, m); });
}

FormPtr identity_form(const SystemPtr& domain)
{
    return std::make_shared<ConstantForm>(domain, domain, [](const GradedTensor& a) { return a; });
}

PolynomialForm::PolynomialForm(Polynomial p, int m, int n, int domain_level)
    : p_(std::move(p)), m_(m), n_(n)
{
    const int d = p_.in_dim();
    if (m < 1 || n < 1)
        reject("polynomial form needs m >= 1 and n >= 1");
    if (p_.out_dim() != m * d)
        reject("polynomial one-form output must have m * d components");
    if (p_.degree() > n - 1)
        reject("polynomial degree " + std::to_string(p_.degree()) + " exceeds n - 1 = " +
               std::to_string(n - 1));
    if (domain_level < n)
        reject("polynomial form needs a domain level of at least n");
    domain_ = HopfSystem::get(Kind::nilpotent, d, domain_level);
    target_ = HopfSystem::get(Kind::nilpotent, m, n);
    const HopfSystem& dom = *domain_;
    const std::size_t words_end = dom.block_end(n);
    std::vector<std::size_t> tuple;
    auto rec = [&](auto&& self, int used) -> void {
        if (!tuple.empty()) {
            std::vector<Word> blocks;
            for (std::size_t w : tuple)
                blocks.push_back(dom.word(w));
            Entry e{tuple, {}};
            for (const auto& [w, c] : ordered_shuffle(blocks))
                e.source.push_back({dom.index_of(w), c});
            entries_.push_back(std::move(e));
        }
        if (static_cast<int>(tuple.size()) == n)
            return;
        for (std::size_t w = 1; w < words_end; ++w) {
            if (used + dom.degree(w) > domain_level)
                continue;
            tuple.push_back(w);
            self(self, used + dom.degree(w));
            tuple.pop_back();
        }
    };
    rec(rec, 0);
}

GradedTensor PolynomialForm::eval(std::size_t, const GradedTensor& a, const GradedTensor& v) const
{
    if (a.system_ptr() != domain_ || v.system_ptr() != domain_)
        reject("polynomial form evaluated outside its domain");
    const HopfSystem& dom = *domain_;
    const HopfSystem& tgt = *target_;
    const int d = dom.d();
    std::vector<double> x = level_one(a);
    std::vector<std::vector<double>> D(n_);
    for (int l = 0; l < n_; ++l)
        D[l] = l <= p_.degree() ? p_.derivative(l, x) : std::vector<double>();
    // C[w * m + r] = (D^{|w|-1} p)(x)[r][last w][init w]
    const std::size_t words_end = dom.block_end(n_);
    std::vector<double> C(words_end * m_, 0.0);
    for (std::size_t w = 1; w < words_end; ++w) {
        int l = dom.degree(w) - 1;
        if (D[l].empty())
            continue;
        const Word& word = dom.word(w);
        std::size_t code = word_code(word, 0, l, d);
        std::size_t block = ipow(d, l);
        for (int r = 0; r < m_; ++r)
            C[w * m_ + r] = D[l][(static_cast<std::size_t>(r) * d + word.back()) * block + code];
    }
    GradedTensor out(target_);
    out[0] = v[0];
    std::vector<int> digits;
    for (const auto& e : entries_) {
        double f = 0.0;
        for (const auto& [i, c] : e.source)
            f += c * v[i];
        if (f == 0.0)
            continue;
        const int k = static_cast<int>(e.words.size());
        digits.assign(k, 0);
        const std::size_t base = tgt.block_begin(k);
        const std::size_t count = ipow(m_, k);
        for (std::size_t code = 0; code < count; ++code) {
            std::size_t rem = code;
            for (int q = k - 1; q >= 0; --q) {
                digits[q] = static_cast<int>(rem % m_);
                rem /= m_;
            }
            double prod = f;
            for (int q = 0; q < k && prod != 0.0; ++q)
                prod *= C[e.words[q] * m_ + digits[q]];
            out[base + code] += prod;
        }
    }
    return out;
}

std::vector<double> polynomial_increment(const Polynomial& p, int m, const SampledGroupPath& g,
                                         std::size_t s, std::size_t t)
{
    const HopfSystem& sys = g.system();
    if (sys.kind() != Kind::nilpotent)
        reject("polynomial increment needs a nilpotent path");
    if (sys.n() < p.degree() + 1)
        reject("path level too low for the polynomial degree");
    const int d = sys.d();
    std::vector<double> x = level_one(g.value(s));
    GradedTensor inc = g.increment(s, t);
    std::vector<double> out(m, 0.0);
    for (int l = 0; l <= p.degree(); ++l) {
        std::vector<double> D = p.derivative(l, x);
        std::size_t block = ipow(d, l);
        for (std::size_t w = sys.block_begin(l + 1); w < sys.block_end(l + 1); ++w) {
            const Word& word = sys.word(w);
            std::size_t code = word_code(word, 0, l, d);
            for (int r = 0; r < m; ++r)
                out[r] += D[(static_cast<std::size_t>(r) * d + word.back()) * block + code] * inc[w];
        }
    }
    return out;
}

KernelForm::KernelForm(PathPtr base, int out_dim, std::vector<std::vector<double>> kernels)
    : base_(std::move(base)), out_(out_dim), kernels_(std::move(kernels))
{
    if (out_ < 1)
        reject("kernel form needs a positive output dimension");
    if (kernels_.size() != 1 && kernels_.size() != base_->size())
        reject("kernel form needs one kernel or one per grid time");
    const std::size_t expect = static_cast<std::size_t>(out_) * base_->system().size();
    for (const auto& k : kernels_)
        if (k.size() != expect)
            reject("kernel matrix has the wrong size");
    target_ = HopfSystem::get(Kind::nilpotent, out_, 1);
}

const std::vector<double>& KernelForm::kernel(std::size_t s) const
{
    return kernels_.size() == 1 ? kernels_.front() : kernels_[s];
}

std::vector<double> KernelForm::apply(std::size_t s, const GradedTensor& w) const
{
    const auto& K = kernel(s);
    const std::size_t dim = w.size();
    std::vector<double> u(out_, 0.0);
    for (int r = 0; r < out_; ++r) {
        const double* row = K.data() + static_cast<std::size_t>(r) * dim;
        double acc = 0.0;
        for (std::size_t i = 1; i < dim; ++i)
            acc += row[i] * w[i];
        u[r] = acc;
    }
    return u;
}

GradedTensor KernelForm::eval(std::size_t s, const GradedTensor& a, const GradedTensor& v) const
{
    if (a.system_ptr() != domain() || v.system_ptr() != domain())
        reject("kernel form evaluated outside its domain");
    GradedTensor w = mul(base_->inverse_value(s), mul(a, reduced(v)));
    std::vector<double> u = apply(s, w);
    GradedTensor out(target_);
    out[0] = v[0];
    for (int r = 0; r < out_; ++r)
        out[1 + r] = u[r];
    return out;
}

std::vector<double> KernelForm::one_step(std::size_t s, std::size_t t) const
{
    GradedTensor w = base_->increment(s, t);
    w[0] = 0.0;
    return apply(s, w);
}

GradedTensor flat_vector(const SystemPtr& target, const std::vector<double>& u)
{
    GradedTensor out = GradedTensor::unit(target);
    for (std::size_t r = 0; r < u.size(); ++r)
        out[1 + r] = u[r];
    return out;
}

KernelPtr add(const KernelForm& a, const KernelForm& b)
{
    if (a.base() != b.base() || a.out_dim() != b.out_dim())
        reject("forms to add must share base path and output dimension");
    std::size_t n = a.base()->size();
    std::vector<std::vector<double>> k(n);
    for (std::size_t s = 0; s < n; ++s) {
        k[s] = a.kernel(s);
        const auto& kb = b.kernel(s);
        for (std::size_t i = 0; i < k[s].size(); ++i)
            k[s][i] += kb[i];
    }
    return std::make_shared<KernelForm>(a.base(), a.out_dim(), std::move(k));
}

KernelPtr scale(const KernelForm& a, double c)
{
    std::size_t n = a.base()->size();
    std::vector<std::vector<double>> k(n);
    for (std::size_t s = 0; s < n; ++s) {
        k[s] = a.kernel(s);
        for (double& x : k[s])
            x *= c;
    }
    return std::make_shared<KernelForm>(a.base(), a.out_dim(), std::move(k));
}

KernelPtr zero_form(const PathPtr& base, int out_dim)
{
    std::vector<std::vector<double>> k{std::vector<double>(out_dim * base->system().size(), 0.0)};
    return std::make_shared<KernelForm>(base, out_dim, std::move(k));
}

KernelPtr increment_form(const PathPtr& base)
{
    const HopfSystem& sys = base->system();
    const int d = sys.d();
    std::vector<double> k(d * sys.size(), 0.0);
    for (int r = 0; r < d; ++r)
        k[r * sys.size() + sys.letter(r)] = 1.0;
    return std::make_shared<KernelForm>(base, d, std::vector<std::vector<double>>{std::move(k)});
}

KernelPtr rough_one_form(const std::vector<LipFunction>& F, const PathPtr& g, double p)
{
    if (F.empty() || (F.size() != 1 && F.size() != g->size()))
        reject("rough one-form needs one function or one per grid time");
    const HopfSystem& sys = g->system();
    const int d = sys.d();
    const int order = static_cast<int>(std::floor(p));
    if (sys.n() < order)
        reject("rough one-form needs a base path of level at least [p]");
    const int m = F.front().out_dim / d;
    for (const auto& f : F) {
        if (f.in_dim != d || f.out_dim != m * d)
            reject("rough one-form function has mismatched dimensions");
        if (!(f.gamma > p - 1.0))
            throw Error(ErrorKind::certificate, "rough one-form needs gamma > p - 1 (gamma = " +
                                                    std::to_string(f.gamma) + ", p = " +
                                                    std::to_string(p) + ")");
        if (f.max_order < order - 1)
            reject("rough one-form function lacks derivatives up to order [p] - 1");
    }
    const std::size_t dim = sys.size();
    // Even a single function gives one kernel per grid time, since it is read at x_s.
    std::vector<std::vector<double>> kernels(g->size());
    parallel_for(g->size(), [&](std::size_t s) {
        const LipFunction& f = F.size() == 1 ? F.front() : F[s];
        std::vector<double> x = level_one(g->value(s));
        std::vector<double>& K = kernels[s];
        K.assign(m * dim, 0.0);
        double fact = 1.0;
        for (int l = 0; l < order; ++l) {
            if (l > 0)
                fact *= l;
            std::vector<double> D = f.derivative(l, x);
            const std::size_t block = ipow(d, l);
            if (sys.kind() == Kind::nilpotent) {
                for (std::size_t w = sys.block_begin(l + 1); w < sys.block_end(l + 1); ++w) {
                    const Word& word = sys.word(w);
                    std::size_t code = word_code(word, 0, l, d);
                    for (int r = 0; r < m; ++r)
                        K[r * dim + w] = D[(static_cast<std::size_t>(r) * d + word.back()) * block + code];
                }
            } else {
                std::vector<int> leaves(l);
                for (std::size_t code = 0; code < block; ++code) {
                    std::size_t rem = code;
                    for (int q = l - 1; q >= 0; --q) {
                        leaves[q] = static_cast<int>(rem % d);
                        rem /= d;
                    }
                    Forest kids;
                    for (int q = 0; q < l; ++q)
                        kids.push_back(Tree{leaves[q], {}});
                    std::sort(kids.begin(), kids.end());
                    for (int j = 0; j < d; ++j) {
                        std::size_t tau = sys.index_of(Forest{graft(j, kids)});
                        for (int r = 0; r < m; ++r)
                            K[r * dim + tau] += D[(static_cast<std::size_t>(r) * d + j) * block + code] / fact;
                    }
                }
            }
        }
    });
    return std::make_shared<KernelForm>(g, m, std::move(kernels));
}

RegularityReport time_varying_regularity(const std::vector<LipFunction>& F, const SampledGroupPath& g,
                                         const Control& omega, double theta, double p,
                                         std::size_t max_points)
{
    RegularityReport rep;
    if (F.size() != g.size())
        reject("time-varying regularity needs one function per grid time");
    const int order = static_cast<int>(std::floor(p));
    auto probes = probe_indices(g.size(), max_points);
    double worst = -1.0;
    for (std::size_t b = 0; b < probes.size(); ++b) {
        std::size_t t = probes[b];
        std::vector<double> x = level_one(g.value(t));
        for (int l = 0; l < order; ++l) {
            std::vector<double> Dt = F[t].derivative(l, x);
            for (std::size_t a = 0; a < b; ++a) {
                std::size_t s = probes[a];
                std::vector<double> Ds = F[s].derivative(l, x);
                double num = 0.0;
                for (std::size_t i = 0; i < Dt.size(); ++i)
                    num = std::max(num, std::abs(Dt[i] - Ds[i]));
                double q = quotient(num, omega(s, t), theta - (l + 1) / p, 1e-13);
                rep.quotients.resize(order, 0.0);
                rep.quotients[l] = std::max(rep.quotients[l], q);
                if (q > worst) {
                    worst = q;
                    rep.worst_s = s;
                    rep.worst_t = t;
                    rep.worst_l = l;
                }
            }
        }
    }
    rep.quotients.resize(order, 0.0);
    rep.constant = std::max(0.0, worst);
    rep.finite = std::isfinite(rep.constant);
    return rep;
}

std::vector<std::size_t> probe_indices(std::size_t n, std::size_t max_points)
{
    std::vector<std::size_t> idx;
    if (n == 0)
        return idx;
    if (n <= max_points || max_points < 2) {
        for (std::size_t i = 0; i < n; ++i)
            idx.push_back(i);
        return idx;
    }
    for (std::size_t k = 0; k < max_points; ++k) {
        std::size_t i = static_cast<std::size_t>(
            std::llround(static_cast<double>(k) * static_cast<double>(n - 1) / static_cast<double>(max_points - 1)));
        if (idx.empty() || idx.back() != i)
            idx.push_back(i);
    }
    return idx;
}


SlowVaryingReport slowly_varying_certificate(const OneForm& beta, const SampledGroupPath& g,
                                             const Control& omega, double theta, double p,
                                             std::size_t max_points)
{
    if (omega.size() != g.size())
        reject("control and path grids differ");
    const SystemPtr& dom = beta.domain();
    const int n = dom->n();
    const std::size_t dim = dom->size();
    auto probes = probe_indices(g.size(), max_points);
    const std::size_t P = probes.size();
    std::vector<GradedTensor> basis;
    basis.reserve(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        GradedTensor e(dom);
        e[i] = 1.0;
        basis.push_back(std::move(e));
    }
    // own[t][sigma] = beta_t(g_t, e_sigma)
    std::vector<std::vector<GradedTensor>> own(P);
    parallel_for(P, [&](std::size_t a) {
        std::size_t t = probes[a];
        own[a].reserve(dim);
        for (std::size_t i = 0; i < dim; ++i)
            own[a].push_back(beta.eval(t, g.value(t), basis[i]));
    });
    SlowVaryingReport rep;
    rep.theta = theta;
    rep.p = p;
    rep.points = P;
    for (std::size_t a = 0; a < P; ++a)
        for (std::size_t i = 1; i < dim; ++i)
            rep.M = std::max(rep.M, value_norm(own[a][i]));
    const double floor = 1e-12 * std::max(1.0, rep.M);
    struct Worst {
        std::vector<double> q;
        std::vector<std::pair<std::size_t, std::size_t>> at;
    };
    std::vector<Worst> per(P, Worst{std::vector<double>(n, 0.0), std::vector<std::pair<std::size_t, std::size_t>>(n)});
    parallel_for(P, [&](std::size_t b) {
        std::size_t t = probes[b];
        for (std::size_t a = 0; a < b; ++a) {
            std::size_t s = probes[a];
            double w = omega(s, t);
            std::vector<double> num(n + 1, 0.0);
            for (std::size_t i = 1; i < dim; ++i) {
                GradedTensor diff = own[b][i] - beta.eval(s, g.value(t), basis[i]);
                int k = dom->degree(i);
                num[k] = std::max(num[k], value_norm(diff));
            }
            for (int k = 1; k <= n; ++k) {
                double q = quotient(num[k], w, theta - k / p, floor);
                if (q > per[b].q[k - 1]) {
                    per[b].q[k - 1] = q;
                    per[b].at[k - 1] = {s, t};
                }
            }
        }
    });
    rep.quotients.assign(n, 0.0);
    double worst = -1.0;
    for (std::size_t b = 0; b < P; ++b) {
        for (int k = 1; k <= n; ++k) {
            double q = per[b].q[k - 1];
            rep.quotients[k - 1] = std::max(rep.quotients[k - 1], q);
            if (q > worst) {
                worst = q;
                rep.worst_s = per[b].at[k - 1].first;
                rep.worst_t = per[b].at[k - 1].second;
                rep.worst_k = k;
            }
        }
    }
    rep.norm = rep.M;
    for (double q : rep.quotients)
        rep.norm = std::max(rep.norm, q);
    rep.finite = std::isfinite(rep.norm);
    return rep;
}

IntegrableReport integrable_condition_check(const OneForm& beta, const SampledGroupPath& g,
                                            const Control& omega, double theta,
                                            std::size_t max_points)
{
    if (omega.size() != g.size())
        reject("control and path grids differ");
    auto probes = probe_indices(g.size(), max_points);
    const std::size_t P = probes.size();
    IntegrableReport rep;
    rep.theta = theta;
    rep.points = P;
    struct Row {
        double M = 0.0;
        double C = 0.0;
        std::size_t u = 0;
        std::size_t t = 0;
    };
    std::vector<Row> rows(P);
    parallel_for(P, [&](std::size_t a) {
        std::size_t s = probes[a];
        Row& row = rows[a];
        for (std::size_t c = a + 1; c < P; ++c) {
            std::size_t t = probes[c];
            row.M = std::max(row.M, max_sigma_norm(beta.eval(s, g.value(s), g.increment(s, t))));
            double w = omega(s, t);
            for (std::size_t b = a + 1; b < c; ++b) {
                std::size_t u = probes[b];
                GradedTensor inc = g.increment(u, t);
                GradedTensor diff = beta.eval(u, g.value(u), inc) - beta.eval(s, g.value(u), inc);
                double q = quotient(max_sigma_norm(diff), w, theta, 1e-12);
                if (q > row.C) {
                    row.C = q;
                    row.u = u;
                    row.t = t;
                }
            }
        }
    });
    double worst = -1.0;
    for (std::size_t a = 0; a < P; ++a) {
        rep.M = std::max(rep.M, rows[a].M);
        if (rows[a].C > worst) {
            worst = rows[a].C;
            rep.constant = rows[a].C;
            rep.worst_s = probes[a];
            rep.worst_u = rows[a].u;
            rep.worst_t = rows[a].t;
        }
    }
    rep.finite = std::isfinite(rep.M) && std::isfinite(rep.constant);
    return rep;
}

} // namespace cocycle
