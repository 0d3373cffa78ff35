#include "treeshuffle/tree.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include <nlohmann/json.hpp>

namespace treeshuffle {

namespace {

const std::vector<EdgeId> kNoChildren;

}  // namespace

class TreeBuilder {
public:
    // The default-constructed Tree already carries the open root edge.
    VertexId add_vertex(EdgeId below) {
        VertexId v = static_cast<VertexId>(tree_.vertices_.size());
        tree_.vertices_.push_back({below, {}});
        tree_.edges_[below].child_vertex = v;
        return v;
    }

    EdgeId add_edge(VertexId above) {
        EdgeId e = static_cast<EdgeId>(tree_.edges_.size());
        tree_.edges_.push_back({above, kNone});
        tree_.vertices_[above].in_edges.push_back(e);
        return e;
    }

    // Copies the subtree of `src` above `src_edge` on top of `dst_edge`.
    void copy_subtree(const Tree& src, EdgeId src_edge, EdgeId dst_edge) {
        if (src.is_leaf_edge(src_edge)) return;
        VertexId v = add_vertex(dst_edge);
        for (EdgeId c : src.children_of_edge(src_edge))
            copy_subtree(src, c, add_edge(v));
    }

    Tree take() { return std::move(tree_); }

private:
    Tree tree_;
};

Tree::Tree() { edges_.push_back({kNone, kNone}); }

bool Tree::has_stumps() const {
    for (const Vertex& v : vertices_)
        if (v.in_edges.empty()) return true;
    return false;
}

const std::vector<EdgeId>& Tree::children_of_edge(EdgeId e) const {
    VertexId v = edges_[e].child_vertex;
    return v == kNone ? kNoChildren : vertices_[v].in_edges;
}

EdgeId Tree::parent_edge(EdgeId e) const {
    VertexId v = edges_[e].parent_vertex;
    return v == kNone ? kNone : vertices_[v].out_edge;
}

VertexId Tree::parent_vertex_of(VertexId v) const {
    return edges_[vertices_[v].out_edge].parent_vertex;
}

std::vector<EdgeId> Tree::leaves() const {
    std::vector<EdgeId> out;
    for (EdgeId e = 0; e < edge_count(); ++e)
        if (is_leaf_edge(e)) out.push_back(e);
    return out;
}

std::vector<VertexId> Tree::top_vertices() const {
    std::vector<VertexId> out;
    for (VertexId v = 0; v < vertex_count(); ++v) {
        const auto& in = vertices_[v].in_edges;
        if (!in.empty() &&
            std::all_of(in.begin(), in.end(), [&](EdgeId e) { return is_leaf_edge(e); }))
            out.push_back(v);
    }
    return out;
}

bool Tree::edge_leq(EdgeId e, EdgeId f) const {
    for (EdgeId x = f; x != kNone; x = parent_edge(x))
        if (x == e) return true;
    return false;
}

bool Tree::vertex_leq(VertexId v, VertexId w) const {
    for (VertexId x = w; x != kNone; x = parent_vertex_of(x))
        if (x == v) return true;
    return false;
}

int Tree::edge_depth(EdgeId e) const {
    int d = 0;
    for (EdgeId x = parent_edge(e); x != kNone; x = parent_edge(x)) ++d;
    return d;
}

int Tree::vertex_depth(VertexId v) const {
    int d = 0;
    for (VertexId x = parent_vertex_of(v); x != kNone; x = parent_vertex_of(x)) ++d;
    return d;
}

int Tree::branch_height(EdgeId leaf) const {
    return edge_depth(leaf);  // one vertex per edge below the leaf
}

// --- parsing -------------------------------------------------------------

namespace {

struct Parser {
    std::string_view text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, pos); }

    void subtree(TreeBuilder& b, EdgeId onto) {
        skip_ws();
        if (pos >= text.size()) fail("unexpected end of input, expected 'e' or '('");
        char c = text[pos];
        if (c == 'e') {
            ++pos;
            return;  // leaf edge
        }
        if (c != '(') fail(std::string("unexpected character '") + c + "', expected 'e' or '('");
        ++pos;
        VertexId v = b.add_vertex(onto);
        skip_ws();
        while (pos < text.size() && text[pos] != ')') {
            subtree(b, b.add_edge(v));
            skip_ws();
        }
        if (pos >= text.size()) fail("unexpected end of input, expected ')'");
        ++pos;  // consume ')'
    }
};

}  // namespace

Tree Tree::parse(std::string_view text) {
    Parser p{text};
    p.skip_ws();
    if (p.pos >= text.size()) throw ParseError("empty input", 0);
    TreeBuilder b;
    p.subtree(b, 0);
    p.skip_ws();
    if (p.pos < text.size()) p.fail("trailing input after tree");
    return b.take();
}

Tree Tree::graft(const std::vector<Tree>& subtrees) {
    TreeBuilder b;
    VertexId v = b.add_vertex(0);
    for (const Tree& s : subtrees) b.copy_subtree(s, s.root_edge(), b.add_edge(v));
    return b.take();
}

Tree Tree::linear(int n) {
    TreeBuilder b;
    EdgeId e = 0;
    for (int i = 0; i < n; ++i) e = b.add_edge(b.add_vertex(e));
    return b.take();
}

Tree Tree::corolla(int m) {
    TreeBuilder b;
    VertexId v = b.add_vertex(0);
    for (int i = 0; i < m; ++i) b.add_edge(v);
    return b.take();
}

Tree Tree::full_binary(int p) {
    if (p == 0) return Tree();
    Tree sub = full_binary(p - 1);
    return graft({sub, sub});
}

Tree Tree::subtree_above(EdgeId e) const {
    TreeBuilder b;
    b.copy_subtree(*this, e, 0);
    return b.take();
}

// --- canonical form -------------------------------------------------------

std::string Tree::edge_code(EdgeId e) const {
    if (is_leaf_edge(e)) return "e";
    std::vector<std::string> parts;
    for (EdgeId c : children_of_edge(e)) parts.push_back(edge_code(c));
    std::sort(parts.begin(), parts.end());
    std::string out = "(";
    for (const std::string& p : parts) out += p;
    out += ")";
    return out;
}

const CanonicalCode& Tree::canonical_form() const {
    if (!canon_) canon_ = CanonicalCode{edge_code(0)};
    return *canon_;
}

std::vector<EdgeId> Tree::canonical_edge_order() const {
    std::vector<EdgeId> order;
    auto visit = [&](auto&& self, EdgeId e) -> void {
        order.push_back(e);
        std::vector<std::pair<std::string, EdgeId>> kids;
        for (EdgeId c : children_of_edge(e)) kids.emplace_back(edge_code(c), c);
        std::sort(kids.begin(), kids.end());
        for (auto& [code, c] : kids) self(self, c);
    };
    visit(visit, 0);
    return order;
}

std::vector<VertexId> Tree::canonical_vertex_order() const {
    std::vector<VertexId> order;
    for (EdgeId e : canonical_edge_order())
        if (!is_leaf_edge(e)) order.push_back(edges_[e].child_vertex);
    return order;
}

// --- decompositions --------------------------------------------------------

Decomposition decompose(const Tree& t) {
    Decomposition d;
    if (t.is_unit()) {
        d.is_unit = true;
        return d;
    }
    for (EdgeId c : t.children_of_edge(t.root_edge())) d.subtrees.push_back(t.subtree_above(c));
    std::sort(d.subtrees.begin(), d.subtrees.end(), [](const Tree& a, const Tree& b) {
        return a.canonical_form() < b.canonical_form();
    });
    d.arity = static_cast<int>(d.subtrees.size());
    return d;
}

namespace {

void reduce_rec(const Tree& t, EdgeId src, TreeBuilder& b, EdgeId dst) {
    if (t.is_leaf_edge(src)) return;
    VertexId v = b.add_vertex(dst);
    bool any_inner = false;
    for (EdgeId c : t.children_of_edge(src))
        if (!t.is_leaf_edge(c)) {
            any_inner = true;
            reduce_rec(t, c, b, b.add_edge(v));
        }
    if (!any_inner) b.add_edge(v);  // top vertex keeps exactly one leaf
}

}  // namespace

Tree reduce(const Tree& t) {
    if (t.has_stumps()) throw std::invalid_argument("reduce: tree contains a stump");
    TreeBuilder b;
    reduce_rec(t, t.root_edge(), b, 0);
    return b.take();
}

bool is_reduced(const Tree& t) {
    for (VertexId v = 0; v < t.vertex_count(); ++v) {
        int leaf_children = 0;
        bool top = true;
        for (EdgeId c : t.vertex(v).in_edges) {
            if (t.is_leaf_edge(c))
                ++leaf_children;
            else
                top = false;
        }
        if (top && leaf_children != 1) return false;
        if (!top && leaf_children != 0) return false;
    }
    return true;
}

namespace {

// Rebuilds the subtree above src, skipping removed edges; records id origins.
void prune_copy(const Tree& t, const std::vector<bool>& edge_removed, EdgeId src, TreeBuilder& b,
                EdgeId dst, std::vector<EdgeId>& edge_origin) {
    if (t.is_leaf_edge(src)) return;
    VertexId v = b.add_vertex(dst);
    for (EdgeId c : t.children_of_edge(src)) {
        if (edge_removed[c]) continue;
        EdgeId nc = b.add_edge(v);
        edge_origin.push_back(c);
        prune_copy(t, edge_removed, c, b, nc, edge_origin);
    }
}

}  // namespace

PrunedTree prune_stumps(const Tree& t) {
    std::vector<bool> edge_removed(t.edge_count(), false);
    std::vector<int> live_children(t.vertex_count(), 0);
    for (VertexId v = 0; v < t.vertex_count(); ++v)
        live_children[v] = static_cast<int>(t.vertex(v).in_edges.size());

    std::vector<VertexId> stumps;
    for (VertexId v = 0; v < t.vertex_count(); ++v)
        if (live_children[v] == 0) stumps.push_back(v);

    std::vector<EdgeId> pruned;
    while (!stumps.empty()) {
        VertexId v = stumps.back();
        stumps.pop_back();
        EdgeId out = t.vertex(v).out_edge;
        if (out == t.root_edge())
            throw std::invalid_argument("prune_stumps: tree collapses to a stump over the root edge");
        edge_removed[out] = true;
        pruned.push_back(out);
        VertexId below = t.edge(out).parent_vertex;
        if (--live_children[below] == 0) stumps.push_back(below);
    }

    PrunedTree result;
    TreeBuilder b;
    std::vector<EdgeId> origin{t.root_edge()};
    prune_copy(t, edge_removed, t.root_edge(), b, 0, origin);
    result.tree = b.take();
    // Report only the topmost removed edge of each cascade.
    for (EdgeId e : pruned) {
        EdgeId p = t.parent_edge(e);
        if (p == kNone || !edge_removed[p]) result.pruned_edges.push_back(e);
    }
    std::sort(result.pruned_edges.begin(), result.pruned_edges.end());
    return result;
}

int height(const Tree& t) {
    int h = 0;
    for (EdgeId e = 0; e < t.edge_count(); ++e)
        if (t.is_leaf_edge(e)) h = std::max(h, t.branch_height(e));
    // A stump vertex also ends a branch.
    for (VertexId v = 0; v < t.vertex_count(); ++v)
        if (t.is_stump_vertex(v)) h = std::max(h, t.vertex_depth(v) + 1);
    return h;
}

namespace {

// Vertex count of the maximal subtree rooted above edge e.
int subtree_vertices(const Tree& t, EdgeId e) {
    int n = 0;
    for (EdgeId c : t.children_of_edge(e)) n += subtree_vertices(t, c);
    return t.is_leaf_edge(e) ? 0 : n + 1;
}

void factorial_rec(const Tree& t, EdgeId e, BigInt& acc) {
    if (t.is_leaf_edge(e)) return;
    acc *= subtree_vertices(t, e);
    for (EdgeId c : t.children_of_edge(e)) factorial_rec(t, c, acc);
}

}  // namespace

BigInt tree_factorial(const Tree& t) {
    BigInt acc = 1;
    factorial_rec(t, t.root_edge(), acc);
    return acc;
}

std::vector<Tree> branches(const Tree& t) {
    std::vector<Tree> out;
    for (EdgeId e = 0; e < t.edge_count(); ++e)
        if (t.is_leaf_edge(e)) out.push_back(Tree::linear(t.branch_height(e)));
    return out;
}

Poset edge_poset(const Tree& t) {
    Poset p;
    p.parent.resize(t.edge_count());
    for (EdgeId e = 0; e < t.edge_count(); ++e) p.parent[e] = t.parent_edge(e);
    return p;
}

Poset vertex_poset(const Tree& t) {
    Poset p;
    p.parent.resize(t.vertex_count());
    for (VertexId v = 0; v < t.vertex_count(); ++v) p.parent[v] = t.parent_vertex_of(v);
    return p;
}

// --- automorphisms ----------------------------------------------------------

namespace {

void subtree_edges_canonical(const Tree& t, EdgeId e, std::vector<EdgeId>& out) {
    out.push_back(e);
    std::vector<std::pair<std::string, EdgeId>> kids;
    for (EdgeId c : t.children_of_edge(e)) kids.emplace_back(t.edge_code(c), c);
    std::sort(kids.begin(), kids.end());
    for (auto& [code, c] : kids) subtree_edges_canonical(t, c, out);
}

}  // namespace

AutomorphismGroup tree_automorphisms(const Tree& t) {
    AutomorphismGroup g;
    g.order = 1;
    for (VertexId v = 0; v < t.vertex_count(); ++v) {
        std::map<std::string, std::vector<EdgeId>> groups;
        for (EdgeId c : t.vertex(v).in_edges) groups[t.edge_code(c)].push_back(c);
        for (auto& [code, members] : groups) {
            for (std::size_t k = 2; k <= members.size(); ++k) g.order *= k;
            // Adjacent transpositions generate the symmetric group on the
            // isomorphic siblings; aligned via canonical subtree orders.
            for (std::size_t k = 0; k + 1 < members.size(); ++k) {
                std::vector<EdgeId> a, b;
                subtree_edges_canonical(t, members[k], a);
                subtree_edges_canonical(t, members[k + 1], b);
                std::vector<EdgeId> perm(t.edge_count());
                std::iota(perm.begin(), perm.end(), 0);
                for (std::size_t i = 0; i < a.size(); ++i) {
                    perm[a[i]] = b[i];
                    perm[b[i]] = a[i];
                }
                g.generators.push_back(std::move(perm));
            }
        }
    }
    return g;
}

// --- JSON -------------------------------------------------------------------

std::string tree_to_json(const Tree& t) {
    nlohmann::json j;
    j["edges"] = nlohmann::json::array();
    for (EdgeId e = 0; e < t.edge_count(); ++e) {
        nlohmann::json je;
        je["id"] = e;
        if (t.edge(e).parent_vertex == kNone)
            je["parent_vertex"] = nullptr;
        else
            je["parent_vertex"] = t.edge(e).parent_vertex;
        if (t.edge(e).child_vertex == kNone)
            je["child_vertex"] = nullptr;
        else
            je["child_vertex"] = t.edge(e).child_vertex;
        j["edges"].push_back(je);
    }
    j["root"] = t.root_edge();
    return j.dump();
}

Tree tree_from_json(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    int root = j.at("root").get<int>();
    const auto& edges = j.at("edges");

    std::map<int, std::pair<int, int>> by_id;  // id -> (parent_vertex, child_vertex)
    std::set<int> vertex_ids;
    for (const auto& je : edges) {
        int id = je.at("id").get<int>();
        int pv = je.at("parent_vertex").is_null() ? kNone : je.at("parent_vertex").get<int>();
        int cv = je.at("child_vertex").is_null() ? kNone : je.at("child_vertex").get<int>();
        if (!by_id.emplace(id, std::make_pair(pv, cv)).second)
            throw std::invalid_argument("tree_from_json: duplicate edge id");
        if (pv != kNone) vertex_ids.insert(pv);
        if (cv != kNone) vertex_ids.insert(cv);
    }
    auto root_it = by_id.find(root);
    if (root_it == by_id.end() || root_it->second.first != kNone)
        throw std::invalid_argument("tree_from_json: root must be an edge with no parent vertex");

    // Children of each vertex, in ascending edge id order.
    std::map<int, std::vector<int>> children;
    std::map<int, int> out_edge;
    for (const auto& [id, pc] : by_id) {
        if (pc.first != kNone) children[pc.first].push_back(id);
        if (pc.second != kNone) {
            if (!out_edge.emplace(pc.second, id).second)
                throw std::invalid_argument("tree_from_json: vertex with two outgoing edges");
        }
    }
    for (int v : vertex_ids)
        if (!out_edge.count(v))
            throw std::invalid_argument("tree_from_json: vertex without outgoing edge");

    TreeBuilder b;
    std::size_t built = 1;
    auto build = [&](auto&& self, int src_edge, EdgeId dst) -> void {
        auto pc = by_id.at(src_edge);
        int v_src = pc.second;
        if (v_src == kNone) return;
        VertexId v = b.add_vertex(dst);
        auto it = children.find(v_src);
        if (it != children.end())
            for (int c : it->second) {
                ++built;
                self(self, c, b.add_edge(v));
            }
    };
    build(build, root, 0);
    if (built != by_id.size())
        throw std::invalid_argument("tree_from_json: edges not all reachable from the root");
    return b.take();
}

}  // namespace treeshuffle
