#include "cocycle/hopf.hpp"

#include "cocycle/error.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>
#include <tuple>

namespace cocycle {

std::string to_string(Kind kind)
{
    return kind == Kind::nilpotent ? "nilpotent" : "butcher";
}

Kind kind_from_string(const std::string& name)
{
    if (name == "nilpotent")
        return Kind::nilpotent;
    if (name == "butcher")
        return Kind::butcher;
    reject("unknown system '" + name + "' (expected nilpotent or butcher)");
}

int Tree::size() const
{
    int s = 1;
    for (const auto& c : children)
        s += c.size();
    return s;
}

std::strong_ordering Tree::operator<=>(const Tree& other) const
{
    if (auto c = label <=> other.label; c != 0)
        return c;
    return std::lexicographical_compare_three_way(children.begin(), children.end(),
                                                  other.children.begin(), other.children.end());
}

Tree graft(int root_label, const Forest& children)
{
    Tree t;
    t.label = root_label;
    t.children = children;
    std::sort(t.children.begin(), t.children.end());
    return t;
}

Forest concat(const Forest& a, const Forest& b)
{
    Forest out;
    out.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

int forest_size(const Forest& f)
{
    int s = 0;
    for (const auto& t : f)
        s += t.size();
    return s;
}

static double tree_factorial(const Tree& t)
{
    double v = t.size();
    for (const auto& c : t.children)
        v *= tree_factorial(c);
    return v;
}

double forest_factorial(const Forest& f)
{
    double v = 1.0;
    for (const auto& t : f)
        v *= tree_factorial(t);
    return v;
}

std::map<Word, double> shuffle(const Word& u, const Word& w)
{
    std::map<Word, double> out;
    if (u.empty()) {
        out[w] = 1.0;
        return out;
    }
    if (w.empty()) {
        out[u] = 1.0;
        return out;
    }
    Word u_head(u.begin(), u.end() - 1);
    Word w_head(w.begin(), w.end() - 1);
    for (const auto& [head_word, c] : shuffle(u_head, w)) {
        Word s = head_word;
        s.push_back(u.back());
        out[s] += c;
    }
    for (const auto& [head_word, c] : shuffle(u, w_head)) {
        Word s = head_word;
        s.push_back(w.back());
        out[s] += c;
    }
    return out;
}

std::map<Word, double> ordered_shuffle(const std::vector<Word>& blocks)
{
    std::map<Word, double> acc;
    if (blocks.empty()) {
        acc[Word{}] = 1.0;
        return acc;
    }
    acc[blocks.front()] = 1.0;
    for (std::size_t b = 1; b < blocks.size(); ++b) {
        const Word& blk = blocks[b];
        if (blk.empty())
            reject("ordered shuffle blocks must be non-empty");
        Word head(blk.begin(), blk.end() - 1);
        std::map<Word, double> next;
        for (const auto& [word, c] : acc) {
            for (const auto& [head_word, m] : shuffle(word, head)) {
                Word s = head_word;
                s.push_back(blk.back());
                next[s] += c * m;
            }
        }
        acc = std::move(next);
    }
    return acc;
}

namespace {

using Pairs = std::vector<std::pair<Forest, Forest>>;

Pairs coproduct_forest(const Forest& f, std::map<Tree, Pairs>& memo);

// Pruned part on the left, root part on the right.
const Pairs& coproduct_tree(const Tree& t, std::map<Tree, Pairs>& memo)
{
    if (auto it = memo.find(t); it != memo.end())
        return it->second;
    Pairs out;
    out.push_back({Forest{t}, Forest{}});
    for (const auto& [l, r] : coproduct_forest(t.children, memo))
        out.push_back({l, Forest{graft(t.label, r)}});
    return memo.emplace(t, std::move(out)).first->second;
}

Pairs coproduct_forest(const Forest& f, std::map<Tree, Pairs>& memo)
{
    Pairs acc{{Forest{}, Forest{}}};
    for (const auto& t : f) {
        const Pairs& ct = coproduct_tree(t, memo);
        Pairs next;
        next.reserve(acc.size() * ct.size());
        for (const auto& a : acc)
            for (const auto& b : ct)
                next.push_back({concat(a.first, b.first), concat(a.second, b.second)});
        acc = std::move(next);
    }
    return acc;
}

std::string tree_label(const Tree& t)
{
    std::string s = std::to_string(t.label + 1);
    if (!t.children.empty()) {
        s += "[";
        for (std::size_t i = 0; i < t.children.size(); ++i) {
            if (i)
                s += ",";
            s += tree_label(t.children[i]);
        }
        s += "]";
    }
    return s;
}

} // namespace

HopfSystem::HopfSystem(Kind kind, int d, int n) : kind_(kind), d_(d), n_(n)
{
    if (d < 1)
        reject("alphabet size d must be at least 1");
    if (n < 0)
        reject("truncation level n must be non-negative");
    if (kind == Kind::nilpotent)
        build_words();
    else
        build_forests();
    for (std::size_t i = 0; i < size(); ++i)
        label_index_[label(i)] = i;
}

std::shared_ptr<const HopfSystem> HopfSystem::get(Kind kind, int d, int n)
{
    static std::mutex mutex;
    static std::map<std::tuple<Kind, int, int>, std::shared_ptr<const HopfSystem>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto key = std::make_tuple(kind, d, n);
    if (auto it = cache.find(key); it != cache.end())
        return it->second;
    auto sys = std::make_shared<const HopfSystem>(kind, d, n);
    cache.emplace(key, sys);
    return sys;
}

void HopfSystem::build_words()
{
    offset_.assign(n_ + 2, 0);
    std::size_t block = 1;
    for (int k = 0; k <= n_; ++k) {
        offset_[k + 1] = offset_[k] + block;
        for (std::size_t j = 0; j < block; ++j) {
            Word w(k);
            std::size_t r = j;
            for (int pos = k - 1; pos >= 0; --pos) {
                w[pos] = static_cast<int>(r % d_);
                r /= d_;
            }
            words_.push_back(std::move(w));
            degree_.push_back(k);
        }
        block *= static_cast<std::size_t>(d_);
    }
    coproduct_.resize(size());
    for (std::size_t i = 0; i < size(); ++i) {
        const Word& w = words_[i];
        for (std::size_t cut = 0; cut <= w.size(); ++cut) {
            Word l(w.begin(), w.begin() + cut);
            Word r(w.begin() + cut, w.end());
            coproduct_[i].push_back({index_of(l), index_of(r), 1.0});
        }
    }
}

void HopfSystem::build_forests()
{
    std::vector<Tree> all_trees;
    std::vector<std::vector<Forest>> by_size(n_ + 1);
    by_size[0].push_back(Forest{});

    auto forests_of_size = [&](int total) {
        std::vector<Forest> out;
        Forest cur;
        std::vector<Tree> pool;
        for (const auto& t : all_trees)
            if (t.size() <= total)
                pool.push_back(t);
        std::sort(pool.begin(), pool.end());
        auto rec = [&](auto&& self, std::size_t pos, int remaining) -> void {
            if (remaining == 0) {
                out.push_back(cur);
                return;
            }
            for (std::size_t q = pos; q < pool.size(); ++q) {
                int s = pool[q].size();
                if (s > remaining)
                    continue;
                cur.push_back(pool[q]);
                self(self, q, remaining - s);
                cur.pop_back();
            }
        };
        rec(rec, 0, total);
        return out;
    };

    for (int k = 1; k <= n_; ++k) {
        // trees of size k: a root over a forest of size k-1
        for (int label = 0; label < d_; ++label)
            for (const auto& f : by_size[k - 1])
                all_trees.push_back(graft(label, f));
        by_size[k] = forests_of_size(k);
        std::sort(by_size[k].begin(), by_size[k].end());
    }

    offset_.assign(n_ + 2, 0);
    for (int k = 0; k <= n_; ++k) {
        offset_[k + 1] = offset_[k] + by_size[k].size();
        for (auto& f : by_size[k]) {
            forest_index_[f] = forests_.size();
            forests_.push_back(f);
            degree_.push_back(k);
        }
    }

    std::map<Tree, Pairs> memo;
    coproduct_.resize(size());
    for (std::size_t i = 0; i < size(); ++i) {
        std::map<std::pair<std::size_t, std::size_t>, double> agg;
        for (const auto& [l, r] : coproduct_forest(forests_[i], memo))
            agg[{index_of(l), index_of(r)}] += 1.0;
        for (const auto& [key, c] : agg)
            coproduct_[i].push_back({key.first, key.second, c});
    }
}

std::vector<CoproductTerm> HopfSystem::reduced_coproduct(std::size_t i) const
{
    std::vector<CoproductTerm> out;
    for (const auto& t : coproduct_[i])
        if (degree_[t.left] >= 1 && degree_[t.right] >= 1)
            out.push_back(t);
    return out;
}

std::size_t HopfSystem::structural_bound() const
{
    std::size_t bound = size();
    for (std::size_t i = 0; i < size(); ++i) {
        double pairs = 0;
        for (const auto& t : reduced_coproduct(i))
            pairs += t.count;
        bound = std::max(bound, static_cast<std::size_t>(pairs));
    }
    return bound;
}

const Word& HopfSystem::word(std::size_t i) const
{
    if (kind_ != Kind::nilpotent)
        reject("word() requires a nilpotent system");
    return words_[i];
}

const Forest& HopfSystem::forest(std::size_t i) const
{
    if (kind_ != Kind::butcher)
        reject("forest() requires a butcher system");
    return forests_[i];
}

std::size_t HopfSystem::index_of(const Word& w) const
{
    int k = static_cast<int>(w.size());
    if (k > n_)
        reject("word longer than truncation level");
    std::size_t r = 0;
    for (int letter : w) {
        if (letter < 0 || letter >= d_)
            reject("letter out of range");
        r = r * d_ + static_cast<std::size_t>(letter);
    }
    return offset_[k] + r;
}

std::size_t HopfSystem::index_of(const Forest& f) const
{
    auto it = forest_index_.find(f);
    if (it == forest_index_.end())
        reject("forest not in index set");
    return it->second;
}

bool HopfSystem::contains(const Forest& f) const
{
    return forest_index_.count(f) != 0;
}

bool HopfSystem::is_tree(std::size_t i) const
{
    if (kind_ == Kind::nilpotent)
        return degree_[i] >= 1;
    return forests_[i].size() == 1;
}

std::string HopfSystem::label(std::size_t i) const
{
    std::string s;
    if (kind_ == Kind::nilpotent) {
        for (std::size_t j = 0; j < words_[i].size(); ++j) {
            if (j)
                s += ",";
            s += std::to_string(words_[i][j] + 1);
        }
        return s;
    }
    const Forest& f = forests_[i];
    for (std::size_t j = 0; j < f.size(); ++j) {
        if (j)
            s += " ";
        s += tree_label(f[j]);
    }
    return s;
}

std::size_t HopfSystem::index_of_label(const std::string& label) const
{
    auto it = label_index_.find(label);
    if (it == label_index_.end())
        reject("unknown index label '" + label + "'");
    return it->second;
}

} // namespace cocycle
