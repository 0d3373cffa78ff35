#pragma once

// Shuffles of a tree pair: enumeration through the inductive bijection, and
// verification of shuffle-hood under the three equivalent characterizations
// (local definition, branchwise classical shuffles, maximal treelike subset).

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "treeshuffle/tree.hpp"

namespace treeshuffle {

using TreePtr = std::shared_ptr<const Tree>;
using EdgePair = std::pair<EdgeId, EdgeId>;

inline TreePtr share(Tree t) { return std::make_shared<const Tree>(std::move(t)); }

class ResourceLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class StepKind { s_step, t_step };

// Interleaving word for a classical shuffle of two linear trees; the number
// of s-steps (t-steps) equals the vertex count of the first (second) branch.
using BranchShuffle = std::vector<StepKind>;

// A shuffle stored as its sorted edge-pair set plus the induced tree
// structure. Identity is by edge-pair set; step kinds are derived data.
struct Shuffle {
    TreePtr S, T;
    std::vector<EdgePair> edges;  // sorted lexicographically; edges[0] is the root pair
    std::vector<int> parent;      // index into edges, -1 for the root pair

    int size() const { return static_cast<int>(edges.size()); }
    int index_of(EdgePair p) const;  // -1 when absent
    bool contains(EdgePair p) const { return index_of(p) >= 0; }
    std::vector<std::vector<int>> children_lists() const;
    // Step kind of the vertex above edge pair i; i must not be a leaf pair.
    StepKind step_kind(int i) const;
    // The interleaving word read along the branch ending at leaf pair (ls,lt).
    BranchShuffle branch_word(EdgeId leaf_s, EdgeId leaf_t) const;

    bool same_pair(const Shuffle& other) const;
    friend bool operator==(const Shuffle& a, const Shuffle& b) {
        return a.edges == b.edges && a.same_pair(b);
    }
};

// Rebuilds a Shuffle from a bare edge-pair set, deriving parents from the
// product order. Throws std::invalid_argument when the set is not treelike.
Shuffle make_shuffle(TreePtr S, TreePtr T, std::vector<EdgePair> edges);

// All shuffles of S and T in the canonical lattice order: the left summand
// of the inductive bijection first, products ordered lexicographically with
// children sorted by subtree canonical code. The first element has copies of
// T atop S, the last copies of S atop T. Throws ResourceLimitError when more
// than max_results shuffles exist; stump-free inputs only.
std::vector<Shuffle> enumerate_shuffles(const Tree& S, const Tree& T,
                                        std::uint64_t max_results = 1000000);

// Streaming form of the same enumeration, same order.
void for_each_shuffle(const Tree& S, const Tree& T, const std::function<void(const Shuffle&)>& fn,
                      std::uint64_t max_results = 1000000);

// Minimal shuffle: copies of T on top of each leaf of S.
Shuffle min_shuffle(TreePtr S, TreePtr T);
// Maximal shuffle: copies of S on top of each leaf of T.
Shuffle max_shuffle(TreePtr S, TreePtr T);

// Swaps the two coordinates; an involution Sh(S,T) -> Sh(T,S).
Shuffle transpose(const Shuffle& a);

// --- verification ----------------------------------------------------------

// Precomputed product-order tables for one tree pair; the verifier backend.
// Masks index candidate subsets of E(S) x E(T) as bit i = s * |E(T)| + t.
// The mask interface requires pair_count() <= 64; the vector interface works
// for any size.
class ShuffleChecker {
public:
    ShuffleChecker(const Tree& S, const Tree& T);

    int pair_count() const { return n_; }
    bool mask_supported() const { return n_ <= 64; }
    int bit(EdgeId s, EdgeId t) const { return s * et_ + t; }
    EdgePair pair_of(int b) const { return {b / et_, b % et_}; }

    std::uint64_t to_mask(const std::vector<EdgePair>& edges) const;
    // Root pair and all leaf pairs: a subset of every shuffle.
    std::uint64_t forced_mask() const { return forced_; }

    bool definition(std::uint64_t mask, std::string* why = nullptr) const;
    bool branches(std::uint64_t mask) const;
    bool maximality(std::uint64_t mask) const;

    bool definition(const std::vector<EdgePair>& edges, std::string* why = nullptr) const;
    bool branches(const std::vector<EdgePair>& edges) const;
    bool maximality(const std::vector<EdgePair>& edges) const;

private:
    friend std::vector<Shuffle> brute_force_shuffles(const Tree&, const Tree&, int);

    bool treelike(std::uint64_t mask, int* least = nullptr) const;
    std::uint64_t maximal_elements(std::uint64_t mask) const;

    // Generic (any-size) implementations over vector<EdgePair>.
    bool definition_general(const std::vector<EdgePair>& edges, std::string* why) const;
    bool branches_general(const std::vector<EdgePair>& edges) const;
    bool maximality_general(const std::vector<EdgePair>& edges) const;
    bool treelike_general(const std::vector<EdgePair>& sorted, std::vector<int>* parent,
                          int* least) const;

    const Tree* s_;
    const Tree* t_;
    int es_, et_, n_;
    std::uint64_t forced_ = 0, leaf_pairs_ = 0;
    // Tables for the mask path only.
    std::vector<std::uint64_t> up_, down_, cmp_;  // strict up/down sets, comparables incl. self
    std::vector<int> depth_;
};

// The three characterizations as free functions (Definition 1.5, the
// branchwise condition, and maximality of a treelike subset).
bool verify_definition(const Tree& S, const Tree& T, const std::vector<EdgePair>& edges,
                       std::string* why = nullptr);
bool verify_branches(const Tree& S, const Tree& T, const std::vector<EdgePair>& edges);
bool verify_maximality(const Tree& S, const Tree& T, const std::vector<EdgePair>& edges);

bool verify_definition(const Tree& S, const Tree& T, const Shuffle& a, std::string* why = nullptr);
bool verify_branches(const Tree& S, const Tree& T, const Shuffle& a);
bool verify_maximality(const Tree& S, const Tree& T, const Shuffle& a);

// Exhaustive oracle: scans subsets of E(S) x E(T) for maximal treelike
// subsets whose maximal elements are the leaf pairs. Requires
// |E(S)|*|E(T)| <= max_bits (default 24).
std::vector<Shuffle> brute_force_shuffles(const Tree& S, const Tree& T, int max_bits = 24);

// Extends a classical shuffle of the branches below the leaves leaf_s and
// leaf_t to a shuffle of S and T. Off the chosen branch the completion is
// minimal (the left summand at every free choice). Throws
// std::invalid_argument when the word is not a valid interleaving.
Shuffle extend_branch_shuffle(TreePtr S, TreePtr T, EdgeId leaf_s, EdgeId leaf_t,
                              const BranchShuffle& word);

// --- stumps -----------------------------------------------------------------

enum class StumpSide { from_s, from_t, from_both };

// A shuffle of the stump-freed trees, decorated with the stump reinserted
// above each leaf pair whose coordinates are not both leaves of the
// original trees.
struct StumpShuffle {
    Shuffle base;  // shuffle of the trees with stump vertices removed (edges kept)
    std::vector<std::pair<EdgePair, StumpSide>> stumps;
};

// Shuffles of trees that may contain stumps, in bijection with the shuffles
// of the pruned trees.
std::vector<StumpShuffle> shuffles_with_stumps(const Tree& S, const Tree& T,
                                               std::uint64_t max_results = 1000000);

// --- serialization -----------------------------------------------------------

// {"S":tree,"T":tree,"edges":[[s,t],...],"parent":{"s,t":"s,t"|null}}
std::string shuffle_to_json(const Shuffle& a);
Shuffle shuffle_from_json(const std::string& json_text);

// DOT rendering: s-step vertices as open circles, t-step vertices filled.
std::string shuffle_to_dot(const Shuffle& a);

}  // namespace treeshuffle
