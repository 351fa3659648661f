#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace cocycle {

enum class Kind { nilpotent, butcher };

std::string to_string(Kind kind);
Kind kind_from_string(const std::string& name);

// Labelled rooted tree. Children are kept sorted, so equal trees compare equal.
struct Tree {
    int label = 0;
    std::vector<Tree> children;

    int size() const;
    bool operator==(const Tree& other) const = default;
    std::strong_ordering operator<=>(const Tree& other) const;
};

// Sorted multiset of trees. The empty forest is the unit index.
using Forest = std::vector<Tree>;
using Word = std::vector<int>;

Tree graft(int root_label, const Forest& children);
Forest concat(const Forest& a, const Forest& b);
int forest_size(const Forest& f);
// Tree factorial taken multiplicatively over the trees of a forest.
double forest_factorial(const Forest& f);

// Every shuffle of u and w, with multiplicity.
std::map<Word, double> shuffle(const Word& u, const Word& w);
// Ordered shuffle: the final letters of the blocks appear in block order.
std::map<Word, double> ordered_shuffle(const std::vector<Word>& blocks);

struct CoproductTerm {
    std::size_t left;
    std::size_t right;
    double count;
};

// Index set P_n with its coproduct table, for words or labelled forests.
// Indices are ordered by degree first, so level n is a prefix of level n+1.
class HopfSystem {
public:
    static std::shared_ptr<const HopfSystem> get(Kind kind, int d, int n);

    Kind kind() const { return kind_; }
    int d() const { return d_; }
    int n() const { return n_; }
    std::size_t size() const { return degree_.size(); }
    int degree(std::size_t i) const { return degree_[i]; }
    std::size_t block_begin(int k) const { return offset_[k]; }
    std::size_t block_end(int k) const { return offset_[k + 1]; }

    // Full coproduct, including the unit terms.
    const std::vector<CoproductTerm>& coproduct(std::size_t i) const { return coproduct_[i]; }
    // Terms with both sides of degree at least one.
    std::vector<CoproductTerm> reduced_coproduct(std::size_t i) const;
    // Max of the index count and every reduced pair count.
    std::size_t structural_bound() const;

    const Word& word(std::size_t i) const;
    const Forest& forest(std::size_t i) const;
    std::size_t index_of(const Word& w) const;
    std::size_t index_of(const Forest& f) const;
    bool contains(const Forest& f) const;

    std::string label(std::size_t i) const;
    std::size_t index_of_label(const std::string& label) const;

    // Degree-one index for letter i (0-based).
    std::size_t letter(int i) const { return 1 + static_cast<std::size_t>(i); }
    // For butcher: number of trees in forest i. For nilpotent: 1 when degree >= 1.
    bool is_tree(std::size_t i) const;

    HopfSystem(Kind kind, int d, int n);

private:
    void build_words();
    void build_forests();

    Kind kind_;
    int d_;
    int n_;
    std::vector<int> degree_;
    std::vector<std::size_t> offset_;
    std::vector<std::vector<CoproductTerm>> coproduct_;
    std::vector<Word> words_;
    std::vector<Forest> forests_;
    std::map<Forest, std::size_t> forest_index_;
    std::map<std::string, std::size_t> label_index_;
};

using SystemPtr = std::shared_ptr<const HopfSystem>;

} // namespace cocycle
