#pragma once

// The partial order on Sh(S,T): the isomorphism with upward-closed subsets
// of V(S) x V(T)^op, percolation steps (the cover relation), distributive
// lattice operations, composition of shuffles, and automorphisms.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "treeshuffle/shuffle.hpp"

namespace treeshuffle {

using VertexPair = std::pair<VertexId, VertexId>;

// Product of the vertex poset of S with the reversed vertex poset of T:
// (v,w) <= (v',w')  iff  v <=_S v' and w >=_T w'.
class PairPoset {
public:
    PairPoset(TreePtr S, TreePtr T);

    const Tree& S() const { return *s_; }
    const Tree& T() const { return *t_; }
    int size() const { return n_; }

    int index(VertexPair p) const { return p.first * vt_ + p.second; }
    VertexPair element(int i) const { return {i / vt_, i % vt_}; }

    bool leq(VertexPair a, VertexPair b) const {
        return s_->vertex_leq(a.first, b.first) && t_->vertex_leq(b.second, a.second);
    }
    bool strictly_above(VertexPair a, VertexPair b) const { return a != b && leq(b, a); }

    std::vector<VertexPair> elements() const;

private:
    TreePtr s_, t_;
    int vt_, n_;
};

// An upward-closed set, stored as its antichain of minimal elements.
struct OpenSet {
    std::vector<VertexPair> minimal_elements;  // sorted, pairwise incomparable

    friend bool operator==(const OpenSet&, const OpenSet&) = default;
};

// Normalizes an arbitrary element list to an OpenSet. With
// require_upward_closed the list must already be its own upward closure;
// otherwise the upward closure is taken. Throws std::invalid_argument on a
// closure violation.
OpenSet make_open_set(const PairPoset& poset, std::vector<VertexPair> elements,
                      bool require_upward_closed = true);

bool open_set_contains(const PairPoset& poset, const OpenSet& u, VertexPair p);
// All elements of the upward closure, sorted.
std::vector<VertexPair> open_set_elements(const PairPoset& poset, const OpenSet& u);

// The percolation isomorphism: a shuffle corresponds to the set of vertex
// pairs (v,w) such that the T-vertex w sits below the S-vertex v in the
// shuffle. Mutually inverse, order-preserving both ways.
OpenSet to_open_set(const Shuffle& a);
Shuffle from_open_set(TreePtr S, TreePtr T, const OpenSet& u);

// All shuffles one percolation step above a: open sets u + {x} for x
// outside u with everything strictly above x already in u.
std::vector<Shuffle> percolation_successors(const Shuffle& a);

// Distributive lattice structure (intersection/union of open sets).
Shuffle meet(const Shuffle& a, const Shuffle& b);
Shuffle join(const Shuffle& a, const Shuffle& b);
bool shuffle_leq(const Shuffle& a, const Shuffle& b);
Shuffle bottom(TreePtr S, TreePtr T);  // copies of T atop S, open set empty
Shuffle top(TreePtr S, TreePtr T);     // copies of S atop T, open set full

struct HasseDiagram {
    std::vector<Shuffle> nodes;                 // canonical enumeration order
    std::vector<std::pair<int, int>> edges;     // (lower node, upper node) covers
};

HasseDiagram hasse(const Tree& S, const Tree& T, std::uint64_t max_results = 1000000);
std::string hasse_to_dot(const HasseDiagram& h);

// Composition Sh(S,T) x Sh(R,S) -> Sh(R,T): f read as a sup-semilattice map
// O(V(T)) -> O(V(S)) and g as O(V(S)) -> O(V(R)). The middle trees must be
// isomorphic; vertices are matched through the canonical order. Associative,
// with identity_shuffle as two-sided unit.
Shuffle compose(const Shuffle& f, const Shuffle& g);
Shuffle identity_shuffle(TreePtr S);

// Automorphisms of the pair poset (equivalently of the shuffle lattice),
// found by backtracking with invariant refinement. Throws
// ResourceLimitError when the poset exceeds max_poset_size.
AutomorphismGroup poset_automorphisms(const Tree& S, const Tree& T, int max_poset_size = 30);

struct AutReport {
    BigInt tree_aut_order;   // |Aut(S)| * |Aut(T)| after reduction
    BigInt poset_aut_order;  // |Aut(Sh(S,T))|
    bool exceptional;        // S and T linear, isomorphic, with >= 2 vertices
    bool matches_theorem;    // poset order == tree order * (2 if exceptional)
};

// Compares |Aut(Sh(S,T))| with |Aut(S)|*|Aut(T)|, reducing the trees first
// and flagging the exceptional linear case.
AutReport check_aut_theorem(const Tree& S, const Tree& T, int max_poset_size = 30);

}  // namespace treeshuffle
