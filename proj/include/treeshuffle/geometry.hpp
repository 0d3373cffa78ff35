#pragma once

// Intersections of shuffles and the chain/branch correspondence: pairwise
// (and iterated) intersections are again trees over edge pairs with the same
// root and leaves, the diagram of all such intersections, and the maximal
// chains of E(S) x E(T) realized as branches of shuffles.

#include <cstdint>
#include <string>
#include <vector>

#include "treeshuffle/shuffle.hpp"

namespace treeshuffle {

// A treelike set of edge pairs with the shuffle root and leaf pairs; shares
// the Shuffle representation but need not be maximal.
using PairTree = Shuffle;

// Set intersection of the two edge-pair sets with the induced order. The
// result is verified to be a tree with root (r_S, r_T) and leaf set
// leaves(S) x leaves(T); a violation throws std::logic_error, since it
// would contradict the underlying theorem rather than reject bad input.
PairTree intersect_shuffles(const PairTree& a, const PairTree& b);

struct DiagramNode {
    PairTree tree;                    // the intersection A_I
    std::vector<int> shuffle_indices; // I = every shuffle containing this tree
};

struct IntersectionDiagram {
    std::vector<Shuffle> shuffles;            // canonical enumeration order
    std::vector<DiagramNode> nodes;           // deduplicated by edge-pair set
    std::vector<std::pair<int, int>> arrows;  // covers of reverse index-set inclusion
};

// Closure of the shuffle set under pairwise intersection; nodes with equal
// intersections merge, keeping the union of their index sets.
IntersectionDiagram intersection_diagram(const Tree& S, const Tree& T,
                                         std::uint64_t max_shuffles = 10000);
std::string diagram_to_dot(const IntersectionDiagram& d);

// A saturated chain in E(S) x E(T) from the root pair to a leaf pair.
using MaximalChain = std::vector<EdgePair>;

std::vector<MaximalChain> maximal_chains(const Tree& S, const Tree& T,
                                         std::uint64_t max_results = 1000000);

// True when the maximal chains coincide with the branches of the shuffles:
// every chain lies on some shuffle and every shuffle branch is a maximal
// chain.
bool chains_cover_check(const Tree& S, const Tree& T, std::uint64_t max_results = 1000000);

// [[s,t],...] per chain, one JSON array of chains.
std::string chains_to_json(const std::vector<MaximalChain>& chains);

}  // namespace treeshuffle
