#include "treeshuffle/lattice.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace treeshuffle {

PairPoset::PairPoset(TreePtr S, TreePtr T)
    : s_(std::move(S)), t_(std::move(T)), vt_(t_->vertex_count()),
      n_(s_->vertex_count() * t_->vertex_count()) {}

std::vector<VertexPair> PairPoset::elements() const {
    std::vector<VertexPair> out;
    out.reserve(n_);
    for (int i = 0; i < n_; ++i) out.push_back(element(i));
    return out;
}

OpenSet make_open_set(const PairPoset& poset, std::vector<VertexPair> elements,
                      bool require_upward_closed) {
    std::sort(elements.begin(), elements.end());
    elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
    for (VertexPair p : elements)
        if (p.first < 0 || p.first >= poset.S().vertex_count() || p.second < 0 ||
            p.second >= poset.T().vertex_count())
            throw std::invalid_argument("make_open_set: vertex pair out of range");

    auto in = [&](VertexPair q) {
        return std::binary_search(elements.begin(), elements.end(), q);
    };
    if (require_upward_closed) {
        for (VertexPair p : elements)
            for (VertexPair q : poset.elements())
                if (poset.strictly_above(q, p) && !in(q))
                    throw std::invalid_argument("make_open_set: set is not upward closed");
    } else {
        std::vector<VertexPair> closure;
        for (VertexPair q : poset.elements())
            for (VertexPair p : elements)
                if (poset.leq(p, q)) {
                    closure.push_back(q);
                    break;
                }
        elements = std::move(closure);
        std::sort(elements.begin(), elements.end());
    }

    OpenSet u;
    for (VertexPair p : elements) {
        bool minimal = true;
        for (VertexPair q : elements)
            if (q != p && poset.leq(q, p)) {
                minimal = false;
                break;
            }
        if (minimal) u.minimal_elements.push_back(p);
    }
    return u;
}

bool open_set_contains(const PairPoset& poset, const OpenSet& u, VertexPair p) {
    for (VertexPair m : u.minimal_elements)
        if (poset.leq(m, p)) return true;
    return false;
}

std::vector<VertexPair> open_set_elements(const PairPoset& poset, const OpenSet& u) {
    std::vector<VertexPair> out;
    for (VertexPair q : poset.elements())
        if (open_set_contains(poset, u, q)) out.push_back(q);
    return out;
}

// --- the percolation isomorphism -------------------------------------------------

OpenSet to_open_set(const Shuffle& a) {
    const Tree& S = *a.S;
    const Tree& T = *a.T;
    PairPoset poset(a.S, a.T);
    std::vector<VertexPair> members;
    // (v,w) is percolated exactly when the shuffle contains a pair (s_v, t)
    // with t strictly above the outgoing edge of w: along any branch this
    // says w's step was taken before v's.
    for (VertexId v = 0; v < S.vertex_count(); ++v) {
        EdgeId sv = S.vertex(v).out_edge;
        for (VertexId w = 0; w < T.vertex_count(); ++w) {
            EdgeId tw = T.vertex(w).out_edge;
            bool percolated = false;
            for (auto [s, t] : a.edges) {
                if (s != sv) continue;
                if (t != tw && T.edge_leq(tw, t)) {
                    percolated = true;
                    break;
                }
            }
            if (percolated) members.push_back({v, w});
        }
    }
    return make_open_set(poset, std::move(members));
}

Shuffle from_open_set(TreePtr S, TreePtr T, const OpenSet& u) {
    const Tree& s = *S;
    const Tree& t = *T;
    if (s.has_stumps() || t.has_stumps())
        throw std::invalid_argument("from_open_set: trees must be stump-free");
    PairPoset poset(S, T);
    std::vector<EdgePair> acc;
    auto rec = [&](auto&& self, EdgeId se, EdgeId te) -> void {
        acc.push_back({se, te});
        bool sl = s.is_leaf_edge(se), tl = t.is_leaf_edge(te);
        if (sl && tl) return;
        // Whether the next vertex is the S- or the T-vertex above this pair
        // is decided by the percolation state of that vertex pair.
        bool t_step;
        if (sl)
            t_step = true;
        else if (tl)
            t_step = false;
        else
            t_step = open_set_contains(
                poset, u, {s.edge(se).child_vertex, t.edge(te).child_vertex});
        if (t_step)
            for (EdgeId c : t.children_of_edge(te)) self(self, se, c);
        else
            for (EdgeId c : s.children_of_edge(se)) self(self, c, te);
    };
    rec(rec, s.root_edge(), t.root_edge());
    return make_shuffle(std::move(S), std::move(T), std::move(acc));
}

std::vector<Shuffle> percolation_successors(const Shuffle& a) {
    PairPoset poset(a.S, a.T);
    OpenSet u = to_open_set(a);
    std::vector<VertexPair> members = open_set_elements(poset, u);
    auto in = [&](VertexPair q) { return std::binary_search(members.begin(), members.end(), q); };

    std::vector<Shuffle> out;
    for (VertexPair x : poset.elements()) {
        if (in(x)) continue;
        bool addable = true;
        for (VertexPair q : poset.elements())
            if (poset.strictly_above(q, x) && !in(q)) {
                addable = false;
                break;
            }
        if (!addable) continue;
        std::vector<VertexPair> extended = members;
        extended.push_back(x);
        out.push_back(from_open_set(a.S, a.T, make_open_set(poset, std::move(extended))));
    }
    return out;
}

// --- lattice operations --------------------------------------------------------

namespace {

void require_same_pair(const Shuffle& a, const Shuffle& b, const char* who) {
    if (!a.same_pair(b))
        throw std::invalid_argument(std::string(who) + ": operands from different tree pairs");
}

}  // namespace

Shuffle meet(const Shuffle& a, const Shuffle& b) {
    require_same_pair(a, b, "meet");
    PairPoset poset(a.S, a.T);
    auto ea = open_set_elements(poset, to_open_set(a));
    auto eb = open_set_elements(poset, to_open_set(b));
    std::vector<VertexPair> both;
    std::set_intersection(ea.begin(), ea.end(), eb.begin(), eb.end(), std::back_inserter(both));
    return from_open_set(a.S, a.T, make_open_set(poset, std::move(both)));
}

Shuffle join(const Shuffle& a, const Shuffle& b) {
    require_same_pair(a, b, "join");
    PairPoset poset(a.S, a.T);
    auto ea = open_set_elements(poset, to_open_set(a));
    auto eb = open_set_elements(poset, to_open_set(b));
    std::vector<VertexPair> either;
    std::set_union(ea.begin(), ea.end(), eb.begin(), eb.end(), std::back_inserter(either));
    return from_open_set(a.S, a.T, make_open_set(poset, std::move(either)));
}

bool shuffle_leq(const Shuffle& a, const Shuffle& b) {
    require_same_pair(a, b, "shuffle_leq");
    PairPoset poset(a.S, a.T);
    auto ea = open_set_elements(poset, to_open_set(a));
    auto eb = open_set_elements(poset, to_open_set(b));
    return std::includes(eb.begin(), eb.end(), ea.begin(), ea.end());
}

Shuffle bottom(TreePtr S, TreePtr T) { return min_shuffle(std::move(S), std::move(T)); }
Shuffle top(TreePtr S, TreePtr T) { return max_shuffle(std::move(S), std::move(T)); }

HasseDiagram hasse(const Tree& S, const Tree& T, std::uint64_t max_results) {
    HasseDiagram h;
    h.nodes = enumerate_shuffles(S, T, max_results);
    std::map<std::vector<EdgePair>, int> index;
    for (std::size_t i = 0; i < h.nodes.size(); ++i) index[h.nodes[i].edges] = static_cast<int>(i);
    for (std::size_t i = 0; i < h.nodes.size(); ++i)
        for (const Shuffle& up : percolation_successors(h.nodes[i]))
            h.edges.emplace_back(static_cast<int>(i), index.at(up.edges));
    std::sort(h.edges.begin(), h.edges.end());
    return h;
}

std::string hasse_to_dot(const HasseDiagram& h) {
    std::ostringstream os;
    os << "digraph hasse {\n  rankdir=BT;\n";
    for (std::size_t i = 0; i < h.nodes.size(); ++i)
        os << "  n" << i << " [label=\"" << i << "\", shape=box];\n";
    for (auto [lo, hi] : h.edges) os << "  n" << lo << " -> n" << hi << ";\n";
    os << "}\n";
    return os.str();
}

// --- composition ----------------------------------------------------------------

Shuffle compose(const Shuffle& f, const Shuffle& g) {
    // f in Sh(S,T), g in Sh(R,S): the middle trees must agree up to
    // isomorphism; vertices are matched through the canonical order.
    if (f.S->canonical_form() != g.T->canonical_form())
        throw std::invalid_argument("compose: middle trees do not match");
    const Tree& fs = *f.S;
    const Tree& gt = *g.T;
    std::vector<VertexId> to_gt(fs.vertex_count());
    {
        auto ford = fs.canonical_vertex_order();
        auto gord = gt.canonical_vertex_order();
        for (std::size_t i = 0; i < ford.size(); ++i) to_gt[ford[i]] = gord[i];
    }

    PairPoset pf(f.S, f.T);
    PairPoset pg(g.S, g.T);
    OpenSet uf = to_open_set(f);
    OpenSet ug = to_open_set(g);

    PairPoset result_poset(g.S, f.T);
    std::vector<VertexPair> members;
    for (VertexId r = 0; r < g.S->vertex_count(); ++r)
        for (VertexId t = 0; t < f.T->vertex_count(); ++t) {
            bool in = false;
            for (VertexId s = 0; s < fs.vertex_count() && !in; ++s)
                in = open_set_contains(pf, uf, {s, t}) &&
                     open_set_contains(pg, ug, {r, to_gt[s]});
            if (in) members.push_back({r, t});
        }
    return from_open_set(g.S, f.T, make_open_set(result_poset, std::move(members)));
}

Shuffle identity_shuffle(TreePtr S) {
    PairPoset poset(S, S);
    std::vector<VertexPair> members;
    for (VertexId v = 0; v < S->vertex_count(); ++v)
        for (VertexId w = 0; w < S->vertex_count(); ++w)
            if (S->vertex_leq(w, v)) members.push_back({v, w});
    TreePtr S2 = S;
    return from_open_set(std::move(S), std::move(S2), make_open_set(poset, std::move(members)));
}

// --- automorphisms ----------------------------------------------------------------

AutomorphismGroup poset_automorphisms(const Tree& S, const Tree& T, int max_poset_size) {
    PairPoset poset(share(S), share(T));
    int n = poset.size();
    if (n > max_poset_size)
        throw ResourceLimitError("poset_automorphisms: pair poset exceeds the size cap");

    std::vector<std::vector<bool>> leq(n, std::vector<bool>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) leq[a][b] = poset.leq(poset.element(a), poset.element(b));

    // Invariant refinement: candidates must agree on up/down set sizes.
    std::vector<std::pair<int, int>> inv(n);
    for (int a = 0; a < n; ++a) {
        int up = 0, down = 0;
        for (int b = 0; b < n; ++b) {
            if (b == a) continue;
            up += leq[a][b];
            down += leq[b][a];
        }
        inv[a] = {up, down};
    }

    AutomorphismGroup out;
    out.order = 0;
    std::vector<int> img(n, -1);
    std::vector<bool> used(n, false);
    auto rec = [&](auto&& self, int x) -> void {
        if (x == n) {
            ++out.order;
            bool identity = true;
            for (int i = 0; i < n && identity; ++i) identity = img[i] == i;
            if (!identity) out.generators.push_back(img);
            return;
        }
        for (int y = 0; y < n; ++y) {
            if (used[y] || inv[y] != inv[x]) continue;
            bool ok = true;
            for (int z = 0; z < x && ok; ++z)
                ok = (leq[x][z] == leq[y][img[z]]) && (leq[z][x] == leq[img[z]][y]);
            if (!ok) continue;
            img[x] = y;
            used[y] = true;
            self(self, x + 1);
            used[y] = false;
            img[x] = -1;
        }
    };
    rec(rec, 0);
    return out;
}

AutReport check_aut_theorem(const Tree& S, const Tree& T, int max_poset_size) {
    Tree rs = reduce(S), rt = reduce(T);
    AutReport rep;
    rep.tree_aut_order = tree_automorphisms(rs).order * tree_automorphisms(rt).order;
    rep.poset_aut_order = poset_automorphisms(rs, rt, max_poset_size).order;
    auto linear = [](const Tree& t) {
        return t.vertex_count() >= 1 && t.isomorphic(Tree::linear(t.vertex_count()));
    };
    rep.exceptional =
        linear(rs) && linear(rt) && rs.vertex_count() >= 2 && rs.isomorphic(rt);
    BigInt expected = rep.tree_aut_order * (rep.exceptional ? 2 : 1);
    rep.matches_theorem = rep.poset_aut_order == expected;
    return rep;
}

}  // namespace treeshuffle
