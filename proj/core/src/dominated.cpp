#include "cocycle/dominated.hpp"

#include "cocycle/error.hpp"
#include "cocycle/maps.hpp"
#include "cocycle/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cocycle {

namespace {

using Matrix = std::vector<double>;

double l1(const std::vector<double>& x)
{
    double s = 0.0;
    for (double v : x)
        s += std::abs(v);
    return s;
}

std::vector<double> column(const Matrix& K, int rows, std::size_t cols, std::size_t c)
{
    std::vector<double> out(rows);
    for (int r = 0; r < rows; ++r)
        out[r] = K[r * cols + c];
    return out;
}

void require_same_base(const DominatedPath& a, const DominatedPath& b)
{
    if (a.base() != b.base())
        reject("dominated paths must share the base path");
    if (a.start != b.start)
        reject("dominated paths must start at the same grid index");
}

struct PairSource {
    std::size_t x;
    std::size_t y;
    double c;
};

// For each target index tau, the pairs (sigma1, sigma2) whose star product reads tau.
std::vector<std::vector<PairSource>> star_pairs(const SystemPtr& sys)
{
    std::vector<std::vector<PairSource>> out(sys->size());
    for (const auto& e : star_table(sys, 2))
        for (const auto& [tau, c] : e.source)
            out[tau].push_back({e.sigmas[0], e.sigmas[1], c});
    return out;
}

KernelPtr make_kernel(const PathPtr& base, int out, std::vector<Matrix> kernels)
{
    return std::make_shared<KernelForm>(base, out, std::move(kernels));
}

} // namespace

std::vector<double> DominatedPath::increment(std::size_t s, std::size_t t) const
{
    std::vector<double> out(trace[t]);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] -= trace[s][i];
    return out;
}

DominatedPath dominate(KernelPtr form, double theta, std::vector<double> h0, std::size_t start)
{
    const int m = form->out_dim();
    if (h0.empty())
        h0.assign(m, 0.0);
    if (static_cast<int>(h0.size()) != m)
        reject("initial value has the wrong dimension");
    PathPtr base = form->base();
    SewingResult r = sew(form, base, Control{}, theta, Schedule::ltr, start);
    DominatedPath d;
    d.form = std::move(form);
    d.h0 = h0;
    d.theta = theta;
    d.start = start;
    d.trace.assign(base->size(), h0);
    for (std::size_t t = start; t < base->size(); ++t)
        for (int i = 0; i < m; ++i)
            d.trace[t][i] += r.value(t)[1 + i];
    return d;
}

DominatedPath operator+(const DominatedPath& a, const DominatedPath& b)
{
    require_same_base(a, b);
    std::vector<double> h0 = a.h0;
    for (std::size_t i = 0; i < h0.size(); ++i)
        h0[i] += b.h0[i];
    return dominate(add(*a.form, *b.form), std::min(a.theta, b.theta), h0, a.start);
}

SlowVaryingReport certify(const DominatedPath& d, const Control& omega, double p, std::size_t max_points)
{
    return slowly_varying_certificate(*d.form, *d.base(), omega, d.theta, p, max_points);
}

double remainder_constant(const DominatedPath& d, const Control& omega, std::size_t max_points)
{
    auto probes = probe_indices(d.base()->size(), max_points);
    std::vector<double> best(probes.size(), 0.0);
    parallel_for(probes.size(), [&](std::size_t b) {
        std::size_t t = probes[b];
        if (t < d.start)
            return;
        for (std::size_t a = 0; a < b; ++a) {
            std::size_t s = probes[a];
            if (s < d.start)
                continue;
            std::vector<double> r = d.increment(s, t);
            std::vector<double> one = d.form->one_step(s, t);
            for (std::size_t i = 0; i < r.size(); ++i)
                r[i] -= one[i];
            double num = l1(r);
            double w = omega(s, t);
            if (num <= 1e-13)
                continue;
            best[b] = std::max(best[b], w > 0.0 ? num / std::pow(w, d.theta)
                                                : std::numeric_limits<double>::infinity());
        }
    });
    return *std::max_element(best.begin(), best.end());
}

DominatedPath iterated_integral(const DominatedPath& d1, const DominatedPath& d2)
{
    require_same_base(d1, d2);
    const PathPtr& base = d1.base();
    if (!has_map_I(base->system()))
        throw Error(ErrorKind::unsupported, "iterated integration needs the map I (butcher level <= 2)");
    const PairMap& I = map_I_table(base->system_ptr());
    const int m1 = d1.dim(), m2 = d2.dim();
    const std::size_t D = base->system().size();
    const std::size_t N = base->size();
    std::vector<Matrix> kernels(N);
    parallel_for(N, [&](std::size_t s) {
        Matrix& out = kernels[s];
        out.assign(static_cast<std::size_t>(m1) * m2 * D, 0.0);
        if (s < d1.start)
            return;
        const Matrix& K1 = d1.form->kernel(s);
        const Matrix& K2 = d2.form->kernel(s);
        std::vector<double> y1 = d1.increment(d1.start, s);
        for (int i = 0; i < m1; ++i)
            for (int j = 0; j < m2; ++j) {
                double* row = out.data() + (static_cast<std::size_t>(i) * m2 + j) * D;
                const double* k1 = K1.data() + i * D;
                const double* k2 = K2.data() + j * D;
                for (std::size_t tau = 1; tau < D; ++tau) {
                    double v = y1[i] * k2[tau];
                    for (const auto& term : I.image(tau))
                        v += term.c * k1[term.x] * k2[term.y];
                    row[tau] = v;
                }
            }
    });
    double theta = std::min(d1.theta, d2.theta);
    return dominate(make_kernel(base, m1 * m2, std::move(kernels)), theta, {}, d1.start);
}

std::vector<KernelPtr> product_summands(const DominatedPath& d1, const DominatedPath& d2)
{
    require_same_base(d1, d2);
    const PathPtr& base = d1.base();
    const auto pairs = star_pairs(base->system_ptr());
    const int m1 = d1.dim(), m2 = d2.dim();
    const std::size_t D = base->system().size();
    const std::size_t N = base->size();
    const std::size_t rows = static_cast<std::size_t>(m1) * m2;
    std::vector<Matrix> left(N), right(N), star(N);
    parallel_for(N, [&](std::size_t s) {
        left[s].assign(rows * D, 0.0);
        right[s].assign(rows * D, 0.0);
        star[s].assign(rows * D, 0.0);
        const Matrix& K1 = d1.form->kernel(s);
        const Matrix& K2 = d2.form->kernel(s);
        const auto& h1 = d1.trace[s];
        const auto& h2 = d2.trace[s];
        for (int i = 0; i < m1; ++i)
            for (int j = 0; j < m2; ++j) {
                std::size_t row = (static_cast<std::size_t>(i) * m2 + j) * D;
                const double* k1 = K1.data() + i * D;
                const double* k2 = K2.data() + j * D;
                for (std::size_t tau = 1; tau < D; ++tau) {
                    left[s][row + tau] = h1[i] * k2[tau];
                    right[s][row + tau] = k1[tau] * h2[j];
                    double v = 0.0;
                    for (const auto& q : pairs[tau])
                        v += q.c * k1[q.x] * k2[q.y];
                    star[s][row + tau] = v;
                }
            }
    });
    return {make_kernel(base, static_cast<int>(rows), std::move(left)),
            make_kernel(base, static_cast<int>(rows), std::move(right)),
            make_kernel(base, static_cast<int>(rows), std::move(star))};
}

DominatedPath product(const DominatedPath& d1, const DominatedPath& d2)
{
    auto parts = product_summands(d1, d2);
    KernelPtr form = add(*add(*parts[0], *parts[1]), *parts[2]);
    std::vector<double> h0;
    for (double a : d1.trace[d1.start])
        for (double b : d2.trace[d2.start])
            h0.push_back(a * b);
    return dominate(form, std::min(d1.theta, d2.theta), h0, d1.start);
}

DominatedPath compose(const DominatedPath& d, const LipFunction& f, double p)
{
    const int m = d.dim();
    if (f.in_dim != m)
        reject("compose: function input dimension differs from the path dimension");
    if (!(f.gamma > p))
        throw Error(ErrorKind::certificate, "compose needs gamma > p (gamma = " + std::to_string(f.gamma) +
                                                ", p = " + std::to_string(p) + ")");
    const PathPtr& base = d.base();
    const SystemPtr& sys = base->system_ptr();
    const int n = sys->n();
    const int top = std::min(n, f.max_order);
    const int w = f.out_dim;
    const std::size_t D = sys->size();
    struct Term {
        std::vector<std::size_t> sigmas;
        std::size_t tau;
        double c;
    };
    std::vector<std::vector<Term>> terms(top + 1);
    for (int l = 1; l <= top; ++l)
        for (const auto& e : star_table(sys, l))
            for (const auto& [tau, c] : e.source)
                terms[l].push_back({e.sigmas, tau, c});
    std::vector<Matrix> kernels(base->size());
    parallel_for(base->size(), [&](std::size_t s) {
        Matrix& out = kernels[s];
        out.assign(static_cast<std::size_t>(w) * D, 0.0);
        if (s < d.start)
            return;
        const Matrix& K = d.form->kernel(s);
        const auto& X = d.trace[s];
        double fact = 1.0;
        for (int l = 1; l <= top; ++l) {
            fact *= l;
            std::vector<double> Dl = f.derivative(l, X);
            for (const auto& t : terms[l]) {
                std::vector<double> v = Dl;
                for (int q = l - 1; q >= 0; --q)
                    v = contract_last(v, column(K, m, D, t.sigmas[q]));
                for (int r = 0; r < w; ++r)
                    out[r * D + t.tau] += t.c * v[r] / fact;
            }
        }
    });
    const double top_p = std::floor(p) + 1.0;
    double theta = std::min({d.theta, f.gamma / p, top_p / p});
    return dominate(make_kernel(base, w, std::move(kernels)), theta, {}, d.start);
}

std::vector<double> GroupEnhancement::B(std::size_t s) const
{
    const HopfSystem& U = gamma->system();
    const HopfSystem& V = base->system();
    const int m = U.d();
    const std::size_t R = U.size();
    const std::size_t D = V.size();
    const Matrix& K = form->kernel(s);
    Matrix out(R * D, 0.0);
    for (int r = 0; r < m; ++r)
        for (std::size_t tau = 1; tau < D; ++tau)
            out[(U.block_begin(1) + r) * D + tau] = K[r * D + tau];
    if (levels < 2)
        return out;
    const PairMap& I = map_I_table(base->system_ptr());
    for (int k = 2; k <= levels; ++k) {
        const std::size_t prev0 = U.block_begin(k - 1);
        const std::size_t prev_count = U.block_end(k - 1) - prev0;
        const std::size_t cur0 = U.block_begin(k);
        for (std::size_t tau = 1; tau < D; ++tau) {
            for (const auto& term : I.image(tau)) {
                for (std::size_t a = 0; a < prev_count; ++a) {
                    double left = out[(prev0 + a) * D + term.x];
                    if (left == 0.0)
                        continue;
                    for (int r = 0; r < m; ++r)
                        out[(cur0 + a * m + r) * D + tau] += term.c * left * K[r * D + term.y];
                }
            }
        }
    }
    return out;
}

GroupEnhancement enhance(const DominatedPath& d, int levels)
{
    if (levels < 1)
        reject("enhance needs at least one level");
    if (levels >= 2 && !has_map_I(d.base()->system()))
        throw Error(ErrorKind::unsupported, "enhancement needs the map I (butcher level <= 2)");
    GroupEnhancement enh;
    enh.base = d.base();
    enh.start = d.start;
    enh.levels = levels;
    enh.form = d.form;
    DominatedPath x1 = d;
    x1.h0.assign(d.dim(), 0.0);
    for (std::size_t t = 0; t < x1.trace.size(); ++t)
        x1.trace[t] = t < d.start ? x1.h0 : d.increment(d.start, t);
    enh.parts.push_back(x1);
    for (int k = 2; k <= levels; ++k)
        enh.parts.push_back(iterated_integral(enh.parts.back(), x1));
    auto U = HopfSystem::get(Kind::nilpotent, d.dim(), levels);
    std::vector<GradedTensor> values;
    values.reserve(d.trace.size());
    for (std::size_t t = 0; t < d.trace.size(); ++t) {
        GradedTensor v = GradedTensor::unit(U);
        for (int k = 1; k <= levels; ++k) {
            const auto& x = enh.parts[k - 1].trace[t];
            std::copy(x.begin(), x.end(), v.coeffs().begin() + static_cast<std::ptrdiff_t>(U->block_begin(k)));
        }
        values.push_back(std::move(v));
    }
    enh.gamma = std::make_shared<const SampledGroupPath>(d.base()->times(), std::move(values));
    return enh;
}

DominatedPath rebase(const DominatedPath& outer, const GroupEnhancement& enh)
{
    if (outer.base() != enh.gamma)
        reject("rebase: the outer path is not coupled to this enhancement");
    const std::size_t R = enh.gamma->system().size();
    const std::size_t D = enh.base->system().size();
    const int mo = outer.dim();
    std::vector<Matrix> kernels(enh.base->size());
    parallel_for(enh.base->size(), [&](std::size_t s) {
        Matrix& out = kernels[s];
        out.assign(static_cast<std::size_t>(mo) * D, 0.0);
        if (s < outer.start)
            return;
        const Matrix& Kz = outer.form->kernel(s);
        Matrix B = enh.B(s);
        for (int r = 0; r < mo; ++r)
            for (std::size_t q = 1; q < R; ++q) {
                double z = Kz[r * R + q];
                if (z == 0.0)
                    continue;
                for (std::size_t tau = 1; tau < D; ++tau)
                    out[r * D + tau] += z * B[q * D + tau];
            }
    });
    return dominate(make_kernel(enh.base, mo, std::move(kernels)), outer.theta, outer.h0, outer.start);
}

GroupEnhancement rough_integrate(const std::vector<LipFunction>& F, const PathPtr& g, double p,
                                 double theta, int levels)
{
    if (levels <= 0)
        levels = static_cast<int>(std::floor(p));
    DominatedPath y = dominate(rough_one_form(F, g, p), theta);
    return enhance(y, levels);
}

GradedTensor comparator(const GroupEnhancement& enh, std::size_t s, std::size_t t)
{
    const std::size_t D = enh.base->system().size();
    Matrix B = enh.B(s);
    GradedTensor w = enh.base->increment(s, t);
    w[0] = 0.0;
    GradedTensor X = GradedTensor::unit(enh.gamma->system_ptr());
    for (std::size_t q = 1; q < X.size(); ++q) {
        double v = 0.0;
        for (std::size_t tau = 1; tau < D; ++tau)
            v += B[q * D + tau] * w[tau];
        X[q] = v;
    }
    return X;
}

ControlledPath as_controlled(const DominatedPath& d, double p)
{
    const HopfSystem& sys = d.base()->system();
    const int keep = static_cast<int>(std::floor(p)) - 1;
    const std::size_t D = sys.size();
    const int m = d.dim();
    std::vector<Matrix> kernels(d.base()->size());
    for (std::size_t s = 0; s < kernels.size(); ++s) {
        kernels[s] = d.form->kernel(s);
        for (int r = 0; r < m; ++r)
            for (std::size_t tau = 1; tau < D; ++tau)
                if (sys.degree(tau) > keep)
                    kernels[s][r * D + tau] = 0.0;
    }
    ControlledPath c;
    c.form = make_kernel(d.base(), m, std::move(kernels));
    c.trace = d.trace;
    c.p = p;
    return c;
}

ControlledReport weakly_controlled_certificate(const ControlledPath& c, const Control& omega,
                                               double theta, std::size_t max_points)
{
    const SampledGroupPath& g = *c.base();
    ControlledReport rep;
    const double e = theta - 1.0 / c.p;
    auto probes = probe_indices(g.size(), max_points);
    double worst = -1.0;
    for (std::size_t b = 0; b < probes.size(); ++b) {
        std::size_t t = probes[b];
        for (std::size_t a = 0; a < b; ++a) {
            std::size_t s = probes[a];
            std::vector<double> one = c.form->one_step(s, t);
            double num = 0.0;
            for (std::size_t i = 0; i < one.size(); ++i)
                num += std::abs(c.trace[t][i] - c.trace[s][i] - one[i]);
            double w = omega(s, t);
            double q = num <= 1e-13 ? 0.0
                       : w > 0.0    ? num / std::pow(w, e)
                                    : std::numeric_limits<double>::infinity();
            if (q > worst) {
                worst = q;
                rep.worst_s = s;
                rep.worst_t = t;
            }
        }
    }
    rep.remainder = std::max(0.0, worst);
    rep.variation = slowly_varying_certificate(*c.form, g, omega, e, c.p, max_points);
    rep.M = std::max(rep.remainder, rep.variation.norm);
    rep.finite = std::isfinite(rep.M);
    return rep;
}

std::vector<double> controlled_one_step(const ControlledPath& c1, const ControlledPath& c2,
                                        std::size_t s, std::size_t t)
{
    if (c1.base() != c2.base())
        reject("controlled paths must share the base path");
    const SampledGroupPath& g = *c1.base();
    if (!has_map_I(g.system()))
        throw Error(ErrorKind::unsupported, "controlled iterated integration needs the map I");
    const int m1 = c1.dim(), m2 = c2.dim();
    const std::size_t D = g.system().size();
    const Matrix& K1 = c1.form->kernel(s);
    const Matrix& K2 = c2.form->kernel(s);
    std::vector<double> out(static_cast<std::size_t>(m1) * m2, 0.0);
    for (int i = 0; i < m1; ++i)
        for (int j = 0; j < m2; ++j)
            out[i * m2 + j] = (c1.trace[s][i] - c1.trace[0][i]) * (c2.trace[t][j] - c2.trace[s][j]);
    for (const auto& [idx, v] : map_I(g.increment(s, t))) {
        for (int i = 0; i < m1; ++i) {
            double a = K1[i * D + idx[0]];
            if (a == 0.0)
                continue;
            for (int j = 0; j < m2; ++j)
                out[i * m2 + j] += v * a * K2[j * D + idx[1]];
        }
    }
    return out;
}

std::vector<std::vector<double>> controlled_iterated_integral(const ControlledPath& c1,
                                                              const ControlledPath& c2)
{
    const std::size_t N = c1.base()->size();
    std::vector<std::vector<double>> steps(N > 0 ? N - 1 : 0);
    parallel_for(steps.size(), [&](std::size_t k) { steps[k] = controlled_one_step(c1, c2, k, k + 1); });
    std::vector<std::vector<double>> out(N, std::vector<double>(static_cast<std::size_t>(c1.dim()) * c2.dim(), 0.0));
    for (std::size_t k = 0; k + 1 < N; ++k)
        for (std::size_t i = 0; i < out[k].size(); ++i)
            out[k + 1][i] = out[k][i] + steps[k][i];
    return out;
}

std::vector<std::vector<double>> controlled_integral_against_path(const ControlledPath& c)
{
    const SampledGroupPath& g = *c.base();
    const HopfSystem& sys = g.system();
    const int m = c.dim();
    const int d = sys.d();
    const std::size_t D = sys.size();
    const std::size_t N = g.size();
    std::vector<std::vector<double>> steps(N > 0 ? N - 1 : 0);
    parallel_for(steps.size(), [&](std::size_t k) {
        std::vector<double>& out = steps[k];
        out.assign(static_cast<std::size_t>(m) * d, 0.0);
        GradedTensor inc = g.increment(k, k + 1);
        const Matrix& K = c.form->kernel(k);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < d; ++j)
                out[i * d + j] = (c.trace[k][i] - c.trace[0][i]) * inc[sys.letter(j)];
        for (const auto& [idx, v] : map_I_prime(inc)) {
            int j = static_cast<int>(idx[1] - sys.letter(0));
            for (int i = 0; i < m; ++i)
                out[i * d + j] += v * K[i * D + idx[0]];
        }
    });
    std::vector<std::vector<double>> out(N, std::vector<double>(static_cast<std::size_t>(m) * d, 0.0));
    for (std::size_t k = 0; k + 1 < N; ++k)
        for (std::size_t i = 0; i < out[k].size(); ++i)
            out[k + 1][i] = out[k][i] + steps[k][i];
    return out;
}

SampledGroupPath butcher_enhancement(const ControlledPath& c)
{
    const int m = c.dim();
    auto sys = HopfSystem::get(Kind::butcher, m, 2);
    auto J = controlled_iterated_integral(c, c);
    std::vector<GradedTensor> values;
    values.reserve(c.trace.size());
    for (std::size_t t = 0; t < c.trace.size(); ++t) {
        GradedTensor v = GradedTensor::unit(sys);
        std::vector<double> x(m);
        for (int i = 0; i < m; ++i) {
            x[i] = c.trace[t][i] - c.trace[0][i];
            v[sys->letter(i)] = x[i];
        }
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                Tree leaf{j, {}};
                v[sys->index_of(Forest{graft(i, {leaf})})] = J[t][j * m + i];
                if (i <= j)
                    v[sys->index_of(concat(Forest{Tree{i, {}}}, Forest{leaf}))] = x[i] * x[j];
            }
        values.push_back(std::move(v));
    }
    return SampledGroupPath(c.base()->times(), std::move(values));
}

} // namespace cocycle
