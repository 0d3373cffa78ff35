#pragma once

// Rooted unordered trees with open root and leaf edges.
//
// A tree is stored as an indexed set of edges and vertices. Edge 0 is the
// root edge. Every vertex has exactly one outgoing (rootward) edge and a
// stored list of incoming edges; the stored child order is a parsing
// artefact, equality and hashing go through the canonical code.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace treeshuffle {

using BigInt = boost::multiprecision::cpp_int;

using EdgeId = int;
using VertexId = int;

inline constexpr int kNone = -1;

class ParseError : public std::runtime_error {
public:
    ParseError(std::string msg, std::size_t offset)
        : std::runtime_error(std::move(msg)), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

// AHU-style canonical code: leaf edge -> "e", edge into a vertex ->
// "(" + concatenation of children codes, sorted lexicographically + ")".
// Two trees have equal codes iff they are isomorphic as rooted unordered
// trees. A stump renders as "()".
struct CanonicalCode {
    std::string code;

    friend bool operator==(const CanonicalCode&, const CanonicalCode&) = default;
    friend auto operator<=>(const CanonicalCode&, const CanonicalCode&) = default;
};

class Tree {
public:
    struct Edge {
        VertexId parent_vertex = kNone;  // kNone: root opening below
        VertexId child_vertex = kNone;   // kNone: leaf opening above
    };
    struct Vertex {
        EdgeId out_edge = kNone;
        std::vector<EdgeId> in_edges;  // storage order only, not semantic
    };

    // The unit tree: a single edge, no vertices.
    Tree();

    int edge_count() const { return static_cast<int>(edges_.size()); }
    int vertex_count() const { return static_cast<int>(vertices_.size()); }
    EdgeId root_edge() const { return 0; }

    const Edge& edge(EdgeId e) const { return edges_[e]; }
    const Vertex& vertex(VertexId v) const { return vertices_[v]; }

    bool is_leaf_edge(EdgeId e) const { return edges_[e].child_vertex == kNone; }
    bool is_unit() const { return vertices_.empty(); }
    bool is_stump_vertex(VertexId v) const { return vertices_[v].in_edges.empty(); }
    bool has_stumps() const;

    // Edges above the vertex above e; empty when e is a leaf.
    const std::vector<EdgeId>& children_of_edge(EdgeId e) const;
    // Outgoing edge of the vertex below e, or kNone for the root edge.
    EdgeId parent_edge(EdgeId e) const;
    // Vertex below v, or kNone when v is the root vertex.
    VertexId parent_vertex_of(VertexId v) const;

    std::vector<EdgeId> leaves() const;
    std::vector<VertexId> top_vertices() const;  // vertices all of whose children are leaves

    // e <= f in the treelike edge order (e on the path from the root to f).
    bool edge_leq(EdgeId e, EdgeId f) const;
    bool vertex_leq(VertexId v, VertexId w) const;
    int edge_depth(EdgeId e) const;   // root edge has depth 0
    int vertex_depth(VertexId v) const;

    // Number of vertices on the branch from the root up to (and including)
    // the vertex below `leaf`; equals the branch height |alpha|.
    int branch_height(EdgeId leaf) const;

    // --- construction -------------------------------------------------

    // Grammar:  Tree ::= "e" | "(" Tree* ")"      ("()" is a stump)
    // Whitespace between tokens is ignored; edge and vertex ids are
    // assigned in parse order with the root edge first.
    static Tree parse(std::string_view text);

    // Grafts m = subtrees.size() trees onto a corolla. Empty list gives the
    // stump tree "()".
    static Tree graft(const std::vector<Tree>& subtrees);

    static Tree linear(int n);  // L_n: n unary vertices
    static Tree corolla(int m);
    static Tree full_binary(int p);  // B_p: all branches have p vertices

    // Copy of the subtree whose root edge is e.
    Tree subtree_above(EdgeId e) const;

    // --- canonical form / rendering ------------------------------------

    const CanonicalCode& canonical_form() const;
    // Canonical grammar string; parse(render(t)) is isomorphic to t.
    std::string render() const { return canonical_form().code; }
    // Canonical code of the subtree above e (leaf -> "e").
    std::string edge_code(EdgeId e) const;
    // All edges, in canonical DFS order starting at the root edge; children
    // visited by ascending subtree code (ties by edge id). Two isomorphic
    // trees list corresponding edges at the same positions.
    std::vector<EdgeId> canonical_edge_order() const;
    std::vector<VertexId> canonical_vertex_order() const;

    bool isomorphic(const Tree& other) const {
        return canonical_form() == other.canonical_form();
    }

private:
    friend class TreeBuilder;
    std::vector<Edge> edges_;
    std::vector<Vertex> vertices_;
    mutable std::optional<CanonicalCode> canon_;
};

// --- decompositions ----------------------------------------------------

struct Decomposition {
    bool is_unit = false;
    int arity = 0;                // 0 for a stump root
    std::vector<Tree> subtrees;   // sorted by canonical code
};

// Splits t = C_m[S_1,...,S_m] (subtrees order-normalized), or unit.
Decomposition decompose(const Tree& t);

// Reduction: prune leaves until every top vertex carries exactly one leaf.
// The vertex poset is unchanged. reduce(unit) = unit.
Tree reduce(const Tree& t);
bool is_reduced(const Tree& t);

struct PrunedTree {
    Tree tree;  // stump-free
    // For each pruned stump, the edge id in the original tree whose whole
    // subtree collapsed into the stump cascade.
    std::vector<EdgeId> pruned_edges;
};

// Removes stump vertices together with their edges, cascading until the
// tree is stump-free. Throws std::invalid_argument when the whole tree
// would collapse to a bare root edge.
PrunedTree prune_stumps(const Tree& t);

// Number of vertices on the longest branch; 0 for the unit tree.
int height(const Tree& t);

// S! = product over vertices v of the vertex count of the maximal subtree
// rooted at v; 1 for the unit tree.
BigInt tree_factorial(const Tree& t);

// Branches as linear trees, one per leaf, in leaf id order.
std::vector<Tree> branches(const Tree& t);

// A finite poset presented by parent pointers (kNone for minimal elements
// that are roots of the forest; trees here always have a single root).
struct Poset {
    std::vector<int> parent;

    int size() const { return static_cast<int>(parent.size()); }
    bool leq(int a, int b) const {
        for (int x = b; x != kNone; x = parent[x])
            if (x == a) return true;
        return false;
    }
    std::vector<int> covers_of(int a) const {
        std::vector<int> out;
        for (int x = 0; x < size(); ++x)
            if (parent[x] == a) out.push_back(x);
        return out;
    }
    std::vector<int> minimal_elements() const {
        std::vector<int> out;
        for (int x = 0; x < size(); ++x)
            if (parent[x] == kNone) out.push_back(x);
        return out;
    }
    std::vector<int> maximal_elements() const {
        std::vector<bool> has_child(parent.size(), false);
        for (int x = 0; x < size(); ++x)
            if (parent[x] != kNone) has_child[parent[x]] = true;
        std::vector<int> out;
        for (int x = 0; x < size(); ++x)
            if (!has_child[x]) out.push_back(x);
        return out;
    }
};

Poset edge_poset(const Tree& t);
Poset vertex_poset(const Tree& t);

// --- automorphisms ------------------------------------------------------

struct AutomorphismGroup {
    BigInt order;
    // Generators as edge permutations (the action on vertices alone is not
    // faithful: swapping two leaves of a corolla moves no vertex).
    std::vector<std::vector<EdgeId>> generators;
};

// Automorphism group of t as a rooted unordered tree; equivalently the
// order-automorphism group of its edge poset.
AutomorphismGroup tree_automorphisms(const Tree& t);

// JSON export per the external schema:
// {"edges":[{"id","parent_vertex","child_vertex"}],"root":id}
std::string tree_to_json(const Tree& t);
Tree tree_from_json(const std::string& json_text);

}  // namespace treeshuffle
