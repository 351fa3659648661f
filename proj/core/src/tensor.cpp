#include "cocycle/tensor.hpp"

#include "cocycle/error.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <tuple>

namespace cocycle {

GradedTensor::GradedTensor(SystemPtr sys) : sys_(std::move(sys)), c_(sys_->size(), 0.0) {}

GradedTensor::GradedTensor(SystemPtr sys, std::vector<double> coeffs)
    : sys_(std::move(sys)), c_(std::move(coeffs))
{
    if (c_.size() != sys_->size())
        reject("coefficient count does not match the index set");
}

GradedTensor GradedTensor::unit(SystemPtr sys)
{
    GradedTensor u(std::move(sys));
    u.c_[0] = 1.0;
    return u;
}

std::span<const double> GradedTensor::block(int k) const
{
    return std::span<const double>(c_.data() + sys_->block_begin(k),
                                   sys_->block_end(k) - sys_->block_begin(k));
}

void require_same_system(const GradedTensor& a, const GradedTensor& b)
{
    if (a.system_ptr() != b.system_ptr())
        reject("system mismatch: " + to_string(a.system().kind()) + " d=" +
               std::to_string(a.system().d()) + " n=" + std::to_string(a.level()) + " vs " +
               to_string(b.system().kind()) + " d=" + std::to_string(b.system().d()) +
               " n=" + std::to_string(b.level()));
}

GradedTensor& GradedTensor::operator+=(const GradedTensor& o)
{
    require_same_system(*this, o);
    for (std::size_t i = 0; i < c_.size(); ++i)
        c_[i] += o.c_[i];
    return *this;
}

GradedTensor& GradedTensor::operator-=(const GradedTensor& o)
{
    require_same_system(*this, o);
    for (std::size_t i = 0; i < c_.size(); ++i)
        c_[i] -= o.c_[i];
    return *this;
}

GradedTensor& GradedTensor::operator*=(double s)
{
    for (auto& v : c_)
        v *= s;
    return *this;
}

GradedTensor operator+(GradedTensor a, const GradedTensor& b) { return a += b; }
GradedTensor operator-(GradedTensor a, const GradedTensor& b) { return a -= b; }
GradedTensor operator*(double s, GradedTensor a) { return a *= s; }

GradedTensor mul(const GradedTensor& a, const GradedTensor& b)
{
    require_same_system(a, b);
    const HopfSystem& sys = a.system();
    GradedTensor out(a.system_ptr());
    for (std::size_t i = 0; i < sys.size(); ++i) {
        double acc = 0.0;
        for (const auto& t : sys.coproduct(i))
            acc += t.count * a[t.left] * b[t.right];
        out[i] = acc;
    }
    return out;
}

GradedTensor operator*(const GradedTensor& a, const GradedTensor& b) { return mul(a, b); }

GradedTensor reduced(const GradedTensor& a)
{
    GradedTensor r = a;
    r[0] = 0.0;
    return r;
}

GradedTensor inverse(const GradedTensor& a)
{
    if (a[0] != 1.0)
        reject("inverse requires sigma0(a) = 1");
    GradedTensor x = reduced(a);
    // Horner form of 1 - x + x^2 - ... + (-x)^n
    GradedTensor unit = GradedTensor::unit(a.system_ptr());
    GradedTensor acc = unit;
    for (int k = 0; k < a.level(); ++k)
        acc = unit - mul(x, acc);
    return acc;
}

GradedTensor log(const GradedTensor& a)
{
    if (a[0] != 1.0)
        reject("log requires sigma0(a) = 1");
    GradedTensor x = reduced(a);
    GradedTensor out = GradedTensor::zero(a.system_ptr());
    GradedTensor power = x;
    for (int k = 1; k <= a.level(); ++k) {
        double c = (k % 2 == 1 ? 1.0 : -1.0) / k;
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] += c * power[i];
        if (k < a.level())
            power = mul(power, x);
    }
    return out;
}

GradedTensor exp(const GradedTensor& a)
{
    if (a[0] != 0.0)
        reject("exp requires sigma0(a) = 0");
    GradedTensor unit = GradedTensor::unit(a.system_ptr());
    GradedTensor acc = unit;
    // Horner form of sum x^k / k!
    for (int k = a.level(); k >= 1; --k)
        acc = unit + (1.0 / k) * mul(a, acc);
    return acc;
}

GradedTensor dilate(const GradedTensor& a, double c)
{
    GradedTensor out = a;
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] *= std::pow(c, a.system().degree(i));
    return out;
}

GradedTensor truncate(const GradedTensor& a, int m)
{
    if (m > a.level())
        reject("truncate: target level above current level");
    if (m < 0)
        reject("truncate: negative level");
    const HopfSystem& sys = a.system();
    auto target = HopfSystem::get(sys.kind(), sys.d(), m);
    std::vector<double> c(a.coeffs().begin(), a.coeffs().begin() + target->size());
    return GradedTensor(target, std::move(c));
}

GradedTensor embed(const GradedTensor& a, int m)
{
    if (m < a.level())
        reject("embed: target level below current level");
    const HopfSystem& sys = a.system();
    auto target = HopfSystem::get(sys.kind(), sys.d(), m);
    std::vector<double> c(target->size(), 0.0);
    std::copy(a.coeffs().begin(), a.coeffs().end(), c.begin());
    return GradedTensor(target, std::move(c));
}

double norm(const GradedTensor& a)
{
    double s = 0.0;
    for (double v : a.coeffs())
        s += std::abs(v);
    return s;
}

template <class F>
static void for_each_sigma(const GradedTensor& a, int min_degree, F&& f)
{
    const HopfSystem& sys = a.system();
    if (sys.kind() == Kind::nilpotent) {
        for (int k = min_degree; k <= sys.n(); ++k) {
            double s = 0.0;
            for (double v : a.block(k))
                s += std::abs(v);
            f(k, s);
        }
    } else {
        for (std::size_t i = sys.block_begin(min_degree); i < sys.size(); ++i)
            f(sys.degree(i), std::abs(a[i]));
    }
}

double homogeneous_norm(const GradedTensor& a)
{
    double s = 0.0;
    for_each_sigma(a, 1, [&](int k, double v) { s += std::pow(v, 1.0 / k); });
    return s;
}

double max_sigma_norm(const GradedTensor& a)
{
    double m = 0.0;
    for_each_sigma(a, 0, [&](int, double v) { m = std::max(m, v); });
    return m;
}

double max_abs_diff(const GradedTensor& a, const GradedTensor& b)
{
    require_same_system(a, b);
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

bool all_finite(const GradedTensor& a)
{
    for (double v : a.coeffs())
        if (!std::isfinite(v))
            return false;
    return true;
}

namespace {

struct Relation {
    std::size_t x;
    std::size_t y;
    std::vector<std::pair<std::size_t, double>> rhs;
};

const std::vector<Relation>& relations(const HopfSystem& sys)
{
    static std::mutex mutex;
    static std::map<std::tuple<Kind, int, int>, std::vector<Relation>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto key = std::make_tuple(sys.kind(), sys.d(), sys.n());
    if (auto it = cache.find(key); it != cache.end())
        return it->second;
    std::vector<Relation> rel;
    for (std::size_t x = 1; x < sys.size(); ++x) {
        for (std::size_t y = x; y < sys.size(); ++y) {
            if (sys.degree(x) + sys.degree(y) > sys.n())
                continue;
            Relation r{x, y, {}};
            if (sys.kind() == Kind::nilpotent) {
                for (const auto& [w, c] : shuffle(sys.word(x), sys.word(y)))
                    r.rhs.push_back({sys.index_of(w), c});
            } else {
                r.rhs.push_back({sys.index_of(concat(sys.forest(x), sys.forest(y))), 1.0});
            }
            rel.push_back(std::move(r));
        }
    }
    return cache.emplace(key, std::move(rel)).first->second;
}

} // namespace

double grouplike_defect(const GradedTensor& a)
{
    double worst = std::abs(a[0] - 1.0);
    for (const auto& r : relations(a.system())) {
        double lhs = a[r.x] * a[r.y];
        double rhs = 0.0;
        double scale = std::max(1.0, std::abs(lhs));
        for (const auto& [i, c] : r.rhs) {
            rhs += c * a[i];
            scale = std::max(scale, std::abs(c * a[i]));
        }
        worst = std::max(worst, std::abs(lhs - rhs) / scale);
    }
    return worst;
}

bool grouplike_check(const GradedTensor& a, double tol)
{
    return grouplike_defect(a) <= tol;
}

GradedTensor butcher_character(const SystemPtr& sys, const std::function<double(std::size_t)>& tree_value)
{
    if (sys->kind() != Kind::butcher)
        reject("butcher_character needs a butcher system");
    GradedTensor out(sys);
    out[0] = 1.0;
    for (std::size_t i = 1; i < sys->size(); ++i) {
        const Forest& f = sys->forest(i);
        double v = 1.0;
        for (const auto& t : f)
            v *= tree_value(sys->index_of(Forest{t}));
        out[i] = v;
    }
    return out;
}

GradedTensor random_grouplike(const SystemPtr& sys, std::mt19937_64& rng, double scale)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    if (sys->kind() == Kind::butcher) {
        std::vector<double> values(sys->size());
        for (std::size_t i = 1; i < sys->size(); ++i)
            values[i] = std::pow(scale, sys->degree(i)) * normal(rng);
        return butcher_character(sys, [&](std::size_t i) { return values[i]; });
    }
    GradedTensor out = GradedTensor::unit(sys);
    for (int k = 0; k <= sys->n(); ++k) {
        GradedTensor x(sys);
        for (int i = 0; i < sys->d(); ++i)
            x[sys->letter(i)] = scale * normal(rng);
        out = mul(out, exp(x));
    }
    return out;
}

} // namespace cocycle
