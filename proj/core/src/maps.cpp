#include "cocycle/maps.hpp"

#include "cocycle/error.hpp"

#include <cmath>
#include <mutex>
#include <tuple>

namespace cocycle {

MultiTensor& add_into(MultiTensor& acc, const MultiTensor& x, double scale)
{
    for (const auto& [k, v] : x)
        acc[k] += scale * v;
    return acc;
}

MultiTensor operator+(const MultiTensor& a, const MultiTensor& b)
{
    MultiTensor out = a;
    return add_into(out, b);
}

MultiTensor operator-(const MultiTensor& a, const MultiTensor& b)
{
    MultiTensor out = a;
    return add_into(out, b, -1.0);
}

double max_abs(const MultiTensor& x)
{
    double m = 0.0;
    for (const auto& [k, v] : x)
        m = std::max(m, std::abs(v));
    return m;
}

MultiTensor outer(const GradedTensor& x, const GradedTensor& y)
{
    MultiTensor out;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0.0)
            continue;
        for (std::size_t j = 0; j < y.size(); ++j)
            if (y[j] != 0.0)
                out[{i, j}] += x[i] * y[j];
    }
    return out;
}

MultiTensor act(const GradedTensor& a, const MultiTensor& x)
{
    const HopfSystem& sys = a.system();
    std::vector<GradedTensor> cache(sys.size());
    std::vector<bool> have(sys.size(), false);
    auto left = [&](std::size_t i) -> const GradedTensor& {
        if (!have[i]) {
            GradedTensor e(a.system_ptr());
            e[i] = 1.0;
            cache[i] = mul(a, e);
            have[i] = true;
        }
        return cache[i];
    };
    MultiTensor out;
    for (const auto& [idx, c] : x) {
        MultiTensor partial{{MultiIndex{}, c}};
        for (std::size_t slot : idx) {
            const GradedTensor& img = left(slot);
            MultiTensor next;
            for (const auto& [p, v] : partial) {
                for (std::size_t j = 0; j < img.size(); ++j) {
                    if (img[j] == 0.0)
                        continue;
                    MultiIndex q = p;
                    q.push_back(j);
                    next[q] += v * img[j];
                }
            }
            partial = std::move(next);
        }
        add_into(out, partial);
    }
    return out;
}

MultiTensor project_n2(const HopfSystem& sys, const MultiTensor& x, int n)
{
    MultiTensor out;
    for (const auto& [idx, v] : x) {
        int j1 = sys.degree(idx.at(0));
        int j2 = sys.degree(idx.at(1));
        if (j1 >= 1 && j2 >= 1 && j1 + j2 <= n)
            out[idx] += v;
    }
    return out;
}

MultiTensor project_n2_prime(const HopfSystem& sys, const MultiTensor& x, int n)
{
    MultiTensor out;
    for (const auto& [idx, v] : x) {
        int j1 = sys.degree(idx.at(0));
        int j2 = sys.degree(idx.at(1));
        if (j1 >= 1 && j2 == 1 && j1 + j2 <= n)
            out[idx] += v;
    }
    return out;
}

MultiTensor PairMap::apply(const GradedTensor& v) const
{
    MultiTensor out;
    for (std::size_t tau = 0; tau < by_source_.size(); ++tau) {
        if (v[tau] == 0.0)
            continue;
        for (const auto& t : by_source_[tau])
            out[{t.x, t.y}] += t.c * v[tau];
    }
    return out;
}

namespace {

using Key = std::tuple<Kind, int, int>;

Key key_of(const HopfSystem& sys) { return {sys.kind(), sys.d(), sys.n()}; }

PairMap build_I(const SystemPtr& sys, bool prime)
{
    std::vector<std::vector<PairTerm>> by_source(sys->size());
    const int n = sys->n();
    if (sys->kind() == Kind::nilpotent) {
        for (std::size_t x = 1; x < sys->size(); ++x) {
            for (std::size_t y = 1; y < sys->size(); ++y) {
                int k1 = sys->degree(x);
                int k2 = sys->degree(y);
                if (k1 + k2 > n || (prime && k2 != 1))
                    continue;
                const Word& u = sys->word(x);
                const Word& w = sys->word(y);
                Word head(w.begin(), w.end() - 1);
                for (const auto& [head_word, c] : shuffle(u, head)) {
                    Word s = head_word;
                    s.push_back(w.back());
                    by_source[sys->index_of(s)].push_back({x, y, c});
                }
            }
        }
        return PairMap(sys, std::move(by_source));
    }
    if (!prime) {
        if (n >= 3)
            throw Error(ErrorKind::unsupported,
                        "map I for the butcher system is only available at level 2");
        if (n == 2) {
            for (int i = 0; i < sys->d(); ++i)
                for (int j = 0; j < sys->d(); ++j) {
                    Tree leaf = graft(j, {});
                    std::size_t tau = sys->index_of(Forest{graft(i, {leaf})});
                    by_source[tau].push_back({sys->letter(j), sys->letter(i), 1.0});
                }
        }
        return PairMap(sys, std::move(by_source));
    }
    for (std::size_t s = 1; s < sys->size(); ++s) {
        if (sys->degree(s) > n - 1)
            continue;
        for (int i = 0; i < sys->d(); ++i) {
            std::size_t tau = sys->index_of(Forest{graft(i, sys->forest(s))});
            by_source[tau].push_back({s, sys->letter(i), 1.0});
        }
    }
    return PairMap(sys, std::move(by_source));
}

const PairMap& cached_I(const SystemPtr& sys, bool prime)
{
    static std::mutex mutex;
    static std::map<std::pair<Key, bool>, PairMap> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto key = std::make_pair(key_of(*sys), prime);
    if (auto it = cache.find(key); it != cache.end())
        return it->second;
    return cache.emplace(key, build_I(sys, prime)).first->second;
}

} // namespace

bool has_map_I(const HopfSystem& sys)
{
    return sys.kind() == Kind::nilpotent || sys.n() <= 2;
}

const PairMap& map_I_table(const SystemPtr& sys) { return cached_I(sys, false); }
const PairMap& map_I_prime_table(const SystemPtr& sys) { return cached_I(sys, true); }

MultiTensor map_I(const GradedTensor& a) { return map_I_table(a.system_ptr()).apply(a); }
MultiTensor map_I_prime(const GradedTensor& a) { return map_I_prime_table(a.system_ptr()).apply(a); }

static void check_power_args(const GradedTensor& a, int m)
{
    if (a.system().kind() != Kind::nilpotent)
        throw Error(ErrorKind::unsupported, "I^m is only available for the nilpotent system");
    if (m < 1 || m > a.level() - 1)
        reject("I^m: m must lie in 1..n-1");
}

MultiTensor map_I_power(const GradedTensor& a, int m)
{
    check_power_args(a, m);
    const PairMap& I = map_I_table(a.system_ptr());
    std::map<std::pair<int, std::size_t>, MultiTensor> memo;
    auto power = [&](auto&& self, int k, std::size_t tau) -> const MultiTensor& {
        auto key = std::make_pair(k, tau);
        if (auto it = memo.find(key); it != memo.end())
            return it->second;
        MultiTensor out;
        for (const auto& t : I.image(tau)) {
            if (k == 1) {
                out[{t.x, t.y}] += t.c;
                continue;
            }
            for (const auto& [idx, v] : self(self, k - 1, t.x)) {
                MultiIndex q = idx;
                q.push_back(t.y);
                out[q] += t.c * v;
            }
        }
        return memo.emplace(key, std::move(out)).first->second;
    };
    MultiTensor out;
    for (std::size_t tau = 0; tau < a.size(); ++tau)
        if (a[tau] != 0.0)
            add_into(out, power(power, m, tau), a[tau]);
    return out;
}

MultiTensor map_I_power_closed(const GradedTensor& a, int m)
{
    check_power_args(a, m);
    const HopfSystem& sys = a.system();
    const int n = sys.n();
    MultiTensor out;
    MultiIndex cur;
    std::vector<Word> blocks;
    auto rec = [&](auto&& self, int used) -> void {
        if (static_cast<int>(cur.size()) == m + 1) {
            double v = 0.0;
            for (const auto& [w, c] : ordered_shuffle(blocks))
                v += c * a[sys.index_of(w)];
            if (v != 0.0)
                out[cur] += v;
            return;
        }
        int slots_left = m + 1 - static_cast<int>(cur.size());
        for (std::size_t x = 1; x < sys.size(); ++x) {
            int k = sys.degree(x);
            if (used + k + (slots_left - 1) > n)
                break;
            cur.push_back(x);
            blocks.push_back(sys.word(x));
            self(self, used + k);
            cur.pop_back();
            blocks.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

namespace {

std::vector<StarEntry> build_star(const SystemPtr& sys, int l)
{
    std::vector<StarEntry> out;
    MultiIndex cur;
    auto rec = [&](auto&& self, int used) -> void {
        if (static_cast<int>(cur.size()) == l) {
            StarEntry e{cur, {}};
            if (sys->kind() == Kind::nilpotent) {
                std::map<Word, double> acc{{Word{}, 1.0}};
                for (std::size_t s : cur) {
                    std::map<Word, double> next;
                    for (const auto& [w, c] : acc)
                        for (const auto& [v, m] : shuffle(w, sys->word(s)))
                            next[v] += c * m;
                    acc = std::move(next);
                }
                for (const auto& [w, c] : acc)
                    e.source.push_back({sys->index_of(w), c});
            } else {
                Forest f;
                for (std::size_t s : cur)
                    f = concat(f, sys->forest(s));
                e.source.push_back({sys->index_of(f), 1.0});
            }
            out.push_back(std::move(e));
            return;
        }
        int slots_left = l - static_cast<int>(cur.size());
        for (std::size_t x = 1; x < sys->size(); ++x) {
            int k = sys->degree(x);
            if (used + k + (slots_left - 1) > sys->n())
                break;
            cur.push_back(x);
            self(self, used + k);
            cur.pop_back();
        }
    };
    if (l >= 1)
        rec(rec, 0);
    return out;
}

} // namespace

const std::vector<StarEntry>& star_table(const SystemPtr& sys, int l)
{
    static std::mutex mutex;
    static std::map<std::pair<Key, int>, std::vector<StarEntry>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto key = std::make_pair(key_of(*sys), l);
    if (auto it = cache.find(key); it != cache.end())
        return it->second;
    return cache.emplace(key, build_star(sys, l)).first->second;
}

static int total_degree(const HopfSystem& sys, const std::vector<std::size_t>& sigmas)
{
    int s = 0;
    for (std::size_t x : sigmas)
        s += sys.kind() == Kind::nilpotent ? static_cast<int>(x) : sys.degree(x);
    return s;
}

MultiTensor star_map(const std::vector<std::size_t>& sigmas, const GradedTensor& a)
{
    const HopfSystem& sys = a.system();
    if (total_degree(sys, sigmas) > sys.n())
        reject("star_map: total degree exceeds truncation level");
    MultiTensor out;
    int l = static_cast<int>(sigmas.size());
    for (const auto& e : star_table(a.system_ptr(), l)) {
        bool match = true;
        for (int i = 0; i < l && match; ++i) {
            if (sys.kind() == Kind::nilpotent)
                match = sys.degree(e.sigmas[i]) == static_cast<int>(sigmas[i]);
            else
                match = e.sigmas[i] == sigmas[i];
        }
        if (!match)
            continue;
        double v = 0.0;
        for (const auto& [tau, c] : e.source)
            v += c * a[tau];
        out[e.sigmas] += v;
    }
    return out;
}

MultiTensor pointwise_tensor(const std::vector<std::size_t>& sigmas, const GradedTensor& a)
{
    const HopfSystem& sys = a.system();
    MultiTensor out;
    int l = static_cast<int>(sigmas.size());
    for (const auto& e : star_table(a.system_ptr(), l)) {
        bool match = true;
        for (int i = 0; i < l && match; ++i) {
            if (sys.kind() == Kind::nilpotent)
                match = sys.degree(e.sigmas[i]) == static_cast<int>(sigmas[i]);
            else
                match = e.sigmas[i] == sigmas[i];
        }
        if (!match)
            continue;
        double v = 1.0;
        for (std::size_t s : e.sigmas)
            v *= a[s];
        out[e.sigmas] += v;
    }
    return out;
}

} // namespace cocycle
