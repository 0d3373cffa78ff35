#include "treeshuffle/shuffle.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace treeshuffle {

namespace {

// Children of an edge, sorted by subtree canonical code (ties by edge id);
// fixes the canonical enumeration order.
std::vector<EdgeId> sorted_children(const Tree& t, EdgeId e) {
    std::vector<std::pair<std::string, EdgeId>> kids;
    for (EdgeId c : t.children_of_edge(e)) kids.emplace_back(t.edge_code(c), c);
    std::sort(kids.begin(), kids.end());
    std::vector<EdgeId> out;
    for (auto& [code, c] : kids) out.push_back(c);
    return out;
}

void require_stump_free(const Tree& t, const char* who) {
    if (t.has_stumps()) throw std::invalid_argument(std::string(who) + ": tree contains stumps");
}

}  // namespace

int Shuffle::index_of(EdgePair p) const {
    auto it = std::lower_bound(edges.begin(), edges.end(), p);
    if (it == edges.end() || *it != p) return -1;
    return static_cast<int>(it - edges.begin());
}

std::vector<std::vector<int>> Shuffle::children_lists() const {
    std::vector<std::vector<int>> out(edges.size());
    for (std::size_t i = 0; i < edges.size(); ++i)
        if (parent[i] >= 0) out[parent[i]].push_back(static_cast<int>(i));
    return out;
}

StepKind Shuffle::step_kind(int i) const {
    for (std::size_t j = 0; j < edges.size(); ++j)
        if (parent[j] == i)
            return edges[j].second == edges[i].second ? StepKind::s_step : StepKind::t_step;
    throw std::logic_error("step_kind: leaf pair has no vertex above");
}

BranchShuffle Shuffle::branch_word(EdgeId leaf_s, EdgeId leaf_t) const {
    int i = index_of({leaf_s, leaf_t});
    if (i < 0) throw std::invalid_argument("branch_word: not a leaf pair of this shuffle");
    std::vector<int> path;
    for (int x = i; x >= 0; x = parent[x]) path.push_back(x);
    std::reverse(path.begin(), path.end());
    BranchShuffle word;
    for (std::size_t k = 0; k + 1 < path.size(); ++k)
        word.push_back(edges[path[k]].second == edges[path[k + 1]].second ? StepKind::s_step
                                                                          : StepKind::t_step);
    return word;
}

bool Shuffle::same_pair(const Shuffle& other) const {
    return S->canonical_form() == other.S->canonical_form() &&
           T->canonical_form() == other.T->canonical_form();
}

namespace {

// Derives parents assuming `edges` (sorted) is a valid shuffle edge set:
// the parent of (s,t) is whichever of (parent(s),t), (s,parent(t)) is present.
std::vector<int> derive_parents_fast(const Tree& S, const Tree& T,
                                     const std::vector<EdgePair>& edges) {
    auto find = [&](EdgePair p) {
        auto it = std::lower_bound(edges.begin(), edges.end(), p);
        return (it != edges.end() && *it == p) ? static_cast<int>(it - edges.begin()) : -1;
    };
    std::vector<int> parent(edges.size(), -1);
    for (std::size_t i = 0; i < edges.size(); ++i) {
        auto [s, t] = edges[i];
        if (s == 0 && t == 0) continue;
        int p = -1;
        if (EdgeId ps = S.parent_edge(s); ps != kNone) p = find({ps, t});
        if (p < 0)
            if (EdgeId pt = T.parent_edge(t); pt != kNone) p = find({s, pt});
        if (p < 0) throw std::invalid_argument("shuffle edge set has a gap above the root");
        parent[i] = p;
    }
    return parent;
}

Shuffle build_shuffle(TreePtr S, TreePtr T, std::vector<EdgePair> edges) {
    std::sort(edges.begin(), edges.end());
    Shuffle a;
    a.parent = derive_parents_fast(*S, *T, edges);
    a.S = std::move(S);
    a.T = std::move(T);
    a.edges = std::move(edges);
    return a;
}

}  // namespace

Shuffle make_shuffle(TreePtr S, TreePtr T, std::vector<EdgePair> edges) {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    for (auto [s, t] : edges)
        if (s < 0 || s >= S->edge_count() || t < 0 || t >= T->edge_count())
            throw std::invalid_argument("make_shuffle: edge pair out of range");

    // Treelike check with generic parent derivation (max-depth lower element).
    auto depth = [&](EdgePair p) { return S->edge_depth(p.first) + T->edge_depth(p.second); };
    auto leqp = [&](EdgePair a, EdgePair b) {
        return S->edge_leq(a.first, b.first) && T->edge_leq(a.second, b.second);
    };
    std::vector<int> parent(edges.size(), -1);
    int minimal_count = 0;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        int best = -1, down_count = 0;
        for (std::size_t j = 0; j < edges.size(); ++j) {
            if (i == j || !leqp(edges[j], edges[i])) continue;
            ++down_count;
            if (best < 0 || depth(edges[j]) > depth(edges[best])) best = static_cast<int>(j);
        }
        parent[i] = best;
        if (best < 0) ++minimal_count;
        // The parent chain must exhaust the down-set.
        int steps = 0;
        for (int x = best; x >= 0;) {
            ++steps;
            int nb = -1, dc = 0;
            for (std::size_t j = 0; j < edges.size(); ++j) {
                if (static_cast<int>(j) == x || !leqp(edges[j], edges[x])) continue;
                ++dc;
                if (nb < 0 || depth(edges[j]) > depth(edges[nb])) nb = static_cast<int>(j);
            }
            (void)dc;
            x = nb;
        }
        if (steps != down_count)
            throw std::invalid_argument("make_shuffle: edge set is not treelike");
    }
    if (edges.empty() || minimal_count != 1)
        throw std::invalid_argument("make_shuffle: edge set is not treelike");
    if (!std::binary_search(edges.begin(), edges.end(),
                            EdgePair{S->root_edge(), T->root_edge()}))
        throw std::invalid_argument("make_shuffle: root pair is missing");
    for (EdgeId ls : S->leaves())
        for (EdgeId lt : T->leaves())
            if (!std::binary_search(edges.begin(), edges.end(), EdgePair{ls, lt}))
                throw std::invalid_argument("make_shuffle: leaf pair is missing");

    Shuffle a;
    a.S = std::move(S);
    a.T = std::move(T);
    a.edges = std::move(edges);
    a.parent = std::move(parent);
    return a;
}

// --- enumeration --------------------------------------------------------------

namespace {

struct Enumerator {
    const Tree& S;
    const Tree& T;
    TreePtr sp, tp;
    std::uint64_t cap;
    std::uint64_t produced = 0;
    std::vector<EdgePair> acc;
    const std::function<void(const Shuffle&)>* sink = nullptr;

    void emit() {
        if (++produced > cap)
            throw ResourceLimitError("enumerate_shuffles: more shuffles than the configured cap");
        (*sink)(build_shuffle(sp, tp, acc));
    }

    using Cont = std::function<void()>;

    void run() {
        gen(S.root_edge(), T.root_edge(), [this] { emit(); });
    }

    void gen(EdgeId s, EdgeId t, const Cont& cont) {
        acc.push_back({s, t});
        bool s_leaf = S.is_leaf_edge(s), t_leaf = T.is_leaf_edge(t);
        if (s_leaf && t_leaf) {
            cont();
        } else {
            if (!s_leaf) product(sorted_children(S, s), t, true, cont);   // left summand
            if (!t_leaf) product(sorted_children(T, t), s, false, cont);  // right summand
        }
        acc.pop_back();
    }

    // Cartesian product over the children, first child most significant.
    void product(const std::vector<EdgeId>& kids, EdgeId fixed, bool s_side, const Cont& cont) {
        step(kids, 0, fixed, s_side, cont);
    }

    void step(const std::vector<EdgeId>& kids, std::size_t i, EdgeId fixed, bool s_side,
              const Cont& cont) {
        if (i == kids.size()) {
            cont();
            return;
        }
        EdgeId s = s_side ? kids[i] : fixed;
        EdgeId t = s_side ? fixed : kids[i];
        gen(s, t, [&] { step(kids, i + 1, fixed, s_side, cont); });
    }
};

}  // namespace

void for_each_shuffle(const Tree& S, const Tree& T, const std::function<void(const Shuffle&)>& fn,
                      std::uint64_t max_results) {
    require_stump_free(S, "enumerate_shuffles");
    require_stump_free(T, "enumerate_shuffles");
    Enumerator en{S, T, share(S), share(T), max_results};
    en.sink = &fn;
    en.run();
}

std::vector<Shuffle> enumerate_shuffles(const Tree& S, const Tree& T, std::uint64_t max_results) {
    std::vector<Shuffle> out;
    for_each_shuffle(
        S, T, [&](const Shuffle& a) { out.push_back(a); }, max_results);
    return out;
}

namespace {

void gen_min(const Tree& S, const Tree& T, EdgeId s, EdgeId t, std::vector<EdgePair>& acc) {
    acc.push_back({s, t});
    if (!S.is_leaf_edge(s)) {
        for (EdgeId c : S.children_of_edge(s)) gen_min(S, T, c, t, acc);
    } else if (!T.is_leaf_edge(t)) {
        for (EdgeId c : T.children_of_edge(t)) gen_min(S, T, s, c, acc);
    }
}

}  // namespace

Shuffle min_shuffle(TreePtr S, TreePtr T) {
    require_stump_free(*S, "min_shuffle");
    require_stump_free(*T, "min_shuffle");
    std::vector<EdgePair> acc;
    gen_min(*S, *T, S->root_edge(), T->root_edge(), acc);
    return build_shuffle(std::move(S), std::move(T), std::move(acc));
}

Shuffle max_shuffle(TreePtr S, TreePtr T) { return transpose(min_shuffle(std::move(T), std::move(S))); }

Shuffle transpose(const Shuffle& a) {
    std::vector<EdgePair> flipped;
    flipped.reserve(a.edges.size());
    for (auto [s, t] : a.edges) flipped.emplace_back(t, s);
    return build_shuffle(a.T, a.S, std::move(flipped));
}

// --- verification --------------------------------------------------------------

ShuffleChecker::ShuffleChecker(const Tree& S, const Tree& T)
    : s_(&S), t_(&T), es_(S.edge_count()), et_(T.edge_count()), n_(es_ * et_) {
    if (!mask_supported()) return;
    up_.assign(n_, 0);
    down_.assign(n_, 0);
    cmp_.assign(n_, 0);
    depth_.assign(n_, 0);
    for (int a = 0; a < n_; ++a) {
        auto [as, at] = pair_of(a);
        depth_[a] = S.edge_depth(as) + T.edge_depth(at);
        for (int b = 0; b < n_; ++b) {
            if (a == b) continue;
            auto [bs, bt] = pair_of(b);
            if (S.edge_leq(as, bs) && T.edge_leq(at, bt)) up_[a] |= 1ull << b;
            if (S.edge_leq(bs, as) && T.edge_leq(bt, at)) down_[a] |= 1ull << b;
        }
        cmp_[a] = up_[a] | down_[a] | (1ull << a);
    }
    forced_ = 1ull << bit(0, 0);
    for (EdgeId ls : S.leaves())
        for (EdgeId lt : T.leaves()) {
            leaf_pairs_ |= 1ull << bit(ls, lt);
        }
    forced_ |= leaf_pairs_;
}

std::uint64_t ShuffleChecker::to_mask(const std::vector<EdgePair>& edges) const {
    if (!mask_supported()) throw std::logic_error("ShuffleChecker: pair poset exceeds 64 bits");
    std::uint64_t m = 0;
    for (auto [s, t] : edges) m |= 1ull << bit(s, t);
    return m;
}

bool ShuffleChecker::treelike(std::uint64_t mask, int* least) const {
    if (mask == 0) return false;
    int min_elt = -1;
    for (std::uint64_t m = mask; m;) {
        int b = std::countr_zero(m);
        m &= m - 1;
        if ((down_[b] & mask) == 0) {
            if (min_elt >= 0) return false;  // two minimal elements
            min_elt = b;
        }
    }
    if (least) *least = min_elt;
    // No two incomparable elements may share an upper bound in the set.
    for (std::uint64_t m = mask; m;) {
        int b = std::countr_zero(m);
        m &= m - 1;
        std::uint64_t inc = mask & ~cmp_[b] & ~((2ull << b) - 1);  // incomparable, index > b
        while (inc) {
            int c = std::countr_zero(inc);
            inc &= inc - 1;
            if (up_[b] & up_[c] & mask) return false;
        }
    }
    return true;
}

std::uint64_t ShuffleChecker::maximal_elements(std::uint64_t mask) const {
    std::uint64_t out = 0;
    for (std::uint64_t m = mask; m;) {
        int b = std::countr_zero(m);
        m &= m - 1;
        if ((up_[b] & mask) == 0) out |= 1ull << b;
    }
    return out;
}

bool ShuffleChecker::definition(std::uint64_t mask, std::string* why) const {
    auto fail = [&](const char* msg) {
        if (why) *why = msg;
        return false;
    };
    if (!(mask & 1))  // bit(0,0) == 0
        return fail("condition (2): root pair (r_S,r_T) missing");
    if (!treelike(mask)) return fail("condition (1): edge set is not a treelike order");
    if (maximal_elements(mask) != leaf_pairs_)
        return fail("condition (3): leaves are not exactly the leaf pairs");

    // Parent of each non-root element: the deepest element strictly below.
    std::array<std::uint64_t, 64> child_mask{};
    for (std::uint64_t m = mask & ~1ull; m;) {
        int b = std::countr_zero(m);
        m &= m - 1;
        int par = -1;
        for (std::uint64_t d = down_[b] & mask; d;) {
            int c = std::countr_zero(d);
            d &= d - 1;
            if (par < 0 || depth_[c] > depth_[par]) par = c;
        }
        child_mask[par] |= 1ull << b;
    }
    std::uint64_t internal = mask & ~leaf_pairs_;
    for (std::uint64_t m = internal; m;) {
        int b = std::countr_zero(m);
        m &= m - 1;
        auto [s, t] = pair_of(b);
        std::uint64_t expect_s = 0, expect_t = 0;
        for (EdgeId c : s_->children_of_edge(s)) expect_s |= 1ull << bit(c, t);
        for (EdgeId c : t_->children_of_edge(t)) expect_t |= 1ull << bit(s, c);
        if (!((expect_s && child_mask[b] == expect_s) || (expect_t && child_mask[b] == expect_t)))
            return fail("condition (4): local step condition fails at an internal vertex");
    }
    return true;
}

bool ShuffleChecker::branches(std::uint64_t mask) const {
    if (!(mask & 1)) return false;
    if (!treelike(mask)) return false;
    if (maximal_elements(mask) != leaf_pairs_) return false;
    for (std::uint64_t m = leaf_pairs_; m;) {
        int b = std::countr_zero(m);
        m &= m - 1;
        // The branch below a leaf pair is a classical shuffle exactly when
        // the chain is saturated in the grid below it.
        if (std::popcount(down_[b] & mask) != depth_[b]) return false;
    }
    return true;
}

bool ShuffleChecker::maximality(std::uint64_t mask) const {
    if (!treelike(mask)) return false;
    if (maximal_elements(mask) != leaf_pairs_) return false;
    for (int b = 0; b < n_; ++b) {
        if (mask & (1ull << b)) continue;
        if ((up_[b] & mask) == 0) continue;  // would add a new maximal element
        if (treelike(mask | (1ull << b))) return false;
    }
    return true;
}

bool ShuffleChecker::definition(const std::vector<EdgePair>& edges, std::string* why) const {
    if (mask_supported()) return definition(to_mask(edges), why);
    return definition_general(edges, why);
}
bool ShuffleChecker::branches(const std::vector<EdgePair>& edges) const {
    if (mask_supported()) return branches(to_mask(edges));
    return branches_general(edges);
}
bool ShuffleChecker::maximality(const std::vector<EdgePair>& edges) const {
    if (mask_supported()) return maximality(to_mask(edges));
    return maximality_general(edges);
}

// --- generic (any size) verification path --------------------------------------

bool ShuffleChecker::treelike_general(const std::vector<EdgePair>& sorted, std::vector<int>* parent,
                                      int* least) const {
    const auto& S = *s_;
    const auto& T = *t_;
    int n = static_cast<int>(sorted.size());
    if (n == 0) return false;
    auto leqp = [&](EdgePair a, EdgePair b) {
        return S.edge_leq(a.first, b.first) && T.edge_leq(a.second, b.second);
    };
    auto depth = [&](EdgePair p) { return S.edge_depth(p.first) + T.edge_depth(p.second); };

    std::vector<int> par(n, -1), down_count(n, 0);
    int min_elt = -1, n_min = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j || !leqp(sorted[j], sorted[i])) continue;
            ++down_count[i];
            if (par[i] < 0 || depth(sorted[j]) > depth(sorted[par[i]])) par[i] = j;
        }
        if (par[i] < 0) {
            ++n_min;
            min_elt = i;
        }
    }
    if (n_min != 1) return false;
    for (int i = 0; i < n; ++i) {
        int steps = 0;
        for (int x = par[i]; x >= 0; x = par[x]) ++steps;
        if (steps != down_count[i]) return false;
    }
    if (parent) *parent = std::move(par);
    if (least) *least = min_elt;
    return true;
}

bool ShuffleChecker::definition_general(const std::vector<EdgePair>& edges,
                                        std::string* why) const {
    auto fail = [&](const char* msg) {
        if (why) *why = msg;
        return false;
    };
    std::vector<EdgePair> sorted = edges;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    std::vector<int> parent;
    int least = -1;
    if (!treelike_general(sorted, &parent, &least))
        return fail("condition (1): edge set is not a treelike order");
    if (sorted[least] != EdgePair{0, 0})
        return fail("condition (2): root pair (r_S,r_T) missing");

    std::set<EdgePair> expected_leaves;
    for (EdgeId ls : s_->leaves())
        for (EdgeId lt : t_->leaves()) expected_leaves.insert({ls, lt});
    std::vector<std::vector<int>> kids(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i)
        if (parent[i] >= 0) kids[parent[i]].push_back(static_cast<int>(i));
    std::set<EdgePair> maximal;
    for (std::size_t i = 0; i < sorted.size(); ++i)
        if (kids[i].empty()) maximal.insert(sorted[i]);
    // kids[i] empty <=> nothing above i: with a treelike order every element
    // above i lies on a parent chain through i.
    if (maximal != expected_leaves)
        return fail("condition (3): leaves are not exactly the leaf pairs");

    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (kids[i].empty()) continue;
        auto [s, t] = sorted[i];
        std::set<EdgePair> got;
        for (int k : kids[i]) got.insert(sorted[k]);
        std::set<EdgePair> expect_s, expect_t;
        for (EdgeId c : s_->children_of_edge(s)) expect_s.insert({c, t});
        for (EdgeId c : t_->children_of_edge(t)) expect_t.insert({s, c});
        if (!((!expect_s.empty() && got == expect_s) || (!expect_t.empty() && got == expect_t)))
            return fail("condition (4): local step condition fails at an internal vertex");
    }
    return true;
}

bool ShuffleChecker::branches_general(const std::vector<EdgePair>& edges) const {
    std::vector<EdgePair> sorted = edges;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    std::vector<int> parent;
    int least = -1;
    if (!treelike_general(sorted, &parent, &least)) return false;
    if (sorted[least] != EdgePair{0, 0}) return false;

    std::vector<bool> has_child(sorted.size(), false);
    for (std::size_t i = 0; i < sorted.size(); ++i)
        if (parent[i] >= 0) has_child[parent[i]] = true;
    std::set<EdgePair> expected_leaves;
    for (EdgeId ls : s_->leaves())
        for (EdgeId lt : t_->leaves()) expected_leaves.insert({ls, lt});
    std::set<EdgePair> maximal;
    for (std::size_t i = 0; i < sorted.size(); ++i)
        if (!has_child[i]) maximal.insert(sorted[i]);
    if (maximal != expected_leaves) return false;

    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (has_child[i]) continue;
        int steps = 0;
        for (int x = parent[i]; x >= 0; x = parent[x]) ++steps;
        if (steps != s_->edge_depth(sorted[i].first) + t_->edge_depth(sorted[i].second))
            return false;
    }
    return true;
}

bool ShuffleChecker::maximality_general(const std::vector<EdgePair>& edges) const {
    std::vector<EdgePair> sorted = edges;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    std::vector<int> parent;
    if (!treelike_general(sorted, &parent, nullptr)) return false;

    std::vector<bool> has_child(sorted.size(), false);
    for (std::size_t i = 0; i < sorted.size(); ++i)
        if (parent[i] >= 0) has_child[parent[i]] = true;
    std::set<EdgePair> expected_leaves;
    for (EdgeId ls : s_->leaves())
        for (EdgeId lt : t_->leaves()) expected_leaves.insert({ls, lt});
    std::set<EdgePair> maximal;
    for (std::size_t i = 0; i < sorted.size(); ++i)
        if (!has_child[i]) maximal.insert(sorted[i]);
    if (maximal != expected_leaves) return false;

    std::set<EdgePair> present(sorted.begin(), sorted.end());
    auto leqp = [&](EdgePair a, EdgePair b) {
        return s_->edge_leq(a.first, b.first) && t_->edge_leq(a.second, b.second);
    };
    for (EdgeId s = 0; s < es_; ++s)
        for (EdgeId t = 0; t < et_; ++t) {
            EdgePair cand{s, t};
            if (present.count(cand)) continue;
            bool below_existing = std::any_of(sorted.begin(), sorted.end(), [&](EdgePair p) {
                return p != cand && leqp(cand, p);
            });
            if (!below_existing) continue;
            std::vector<EdgePair> extended = sorted;
            extended.insert(std::lower_bound(extended.begin(), extended.end(), cand), cand);
            if (treelike_general(extended, nullptr, nullptr)) return false;
        }
    return true;
}

bool verify_definition(const Tree& S, const Tree& T, const std::vector<EdgePair>& edges,
                       std::string* why) {
    return ShuffleChecker(S, T).definition(edges, why);
}
bool verify_branches(const Tree& S, const Tree& T, const std::vector<EdgePair>& edges) {
    return ShuffleChecker(S, T).branches(edges);
}
bool verify_maximality(const Tree& S, const Tree& T, const std::vector<EdgePair>& edges) {
    return ShuffleChecker(S, T).maximality(edges);
}
bool verify_definition(const Tree& S, const Tree& T, const Shuffle& a, std::string* why) {
    return verify_definition(S, T, a.edges, why);
}
bool verify_branches(const Tree& S, const Tree& T, const Shuffle& a) {
    return verify_branches(S, T, a.edges);
}
bool verify_maximality(const Tree& S, const Tree& T, const Shuffle& a) {
    return verify_maximality(S, T, a.edges);
}

std::vector<Shuffle> brute_force_shuffles(const Tree& S, const Tree& T, int max_bits) {
    require_stump_free(S, "brute_force_shuffles");
    require_stump_free(T, "brute_force_shuffles");
    ShuffleChecker ck(S, T);
    if (ck.pair_count() > max_bits)
        throw ResourceLimitError("brute_force_shuffles: pair poset exceeds the bit cap");

    TreePtr sp = share(S), tp = share(T);
    std::uint64_t full = ck.pair_count() == 64 ? ~0ull : (1ull << ck.pair_count()) - 1;
    std::uint64_t forced = ck.forced_mask();
    std::uint64_t free_bits = full & ~forced;

    std::vector<Shuffle> out;
    std::uint64_t sub = free_bits;
    while (true) {
        std::uint64_t mask = forced | sub;
        if (ck.maximality(mask)) {
            std::vector<EdgePair> edges;
            for (std::uint64_t m = mask; m;) {
                int b = std::countr_zero(m);
                m &= m - 1;
                edges.push_back(ck.pair_of(b));
            }
            out.push_back(build_shuffle(sp, tp, std::move(edges)));
        }
        if (sub == 0) break;
        sub = (sub - 1) & free_bits;
    }
    return out;
}

// --- branch extension ------------------------------------------------------------

Shuffle extend_branch_shuffle(TreePtr S, TreePtr T, EdgeId leaf_s, EdgeId leaf_t,
                              const BranchShuffle& word) {
    const Tree& s = *S;
    const Tree& t = *T;
    require_stump_free(s, "extend_branch_shuffle");
    require_stump_free(t, "extend_branch_shuffle");
    if (!s.is_leaf_edge(leaf_s) || !t.is_leaf_edge(leaf_t))
        throw std::invalid_argument("extend_branch_shuffle: branch must be named by a leaf edge");
    int ns = 0, nt = 0;
    for (StepKind k : word) (k == StepKind::s_step ? ns : nt)++;
    if (ns != s.branch_height(leaf_s) || nt != t.branch_height(leaf_t))
        throw std::invalid_argument("extend_branch_shuffle: word is not a valid interleaving");

    std::vector<EdgePair> acc;
    auto toward = [](const Tree& tr, EdgeId e, EdgeId leaf) {
        for (EdgeId c : tr.children_of_edge(e))
            if (tr.edge_leq(c, leaf)) return c;
        throw std::logic_error("extend_branch_shuffle: branch step not found");
    };
    auto build = [&](auto&& self, EdgeId se, EdgeId te, std::size_t wi) -> void {
        acc.push_back({se, te});
        if (wi == word.size()) return;
        if (word[wi] == StepKind::s_step) {
            EdgeId next = toward(s, se, leaf_s);
            for (EdgeId c : s.children_of_edge(se)) {
                if (c == next)
                    self(self, c, te, wi + 1);
                else
                    gen_min(s, t, c, te, acc);
            }
        } else {
            EdgeId next = toward(t, te, leaf_t);
            for (EdgeId c : t.children_of_edge(te)) {
                if (c == next)
                    self(self, se, c, wi + 1);
                else
                    gen_min(s, t, se, c, acc);
            }
        }
    };
    build(build, s.root_edge(), t.root_edge(), 0);
    return build_shuffle(std::move(S), std::move(T), std::move(acc));
}

// --- stumps -----------------------------------------------------------------------

namespace {

// Copy of t with stump vertices removed and their edges kept as leaves.
// Edge ids are preserved.
class StumpFreeView {
public:
    explicit StumpFreeView(const Tree& t) : orig_(&t) {
        std::string text = render_without_stumps(t, t.root_edge());
        tree_ = Tree::parse(text);
        // Identical traversal order: edge ids coincide.
        stump_capped_.assign(t.edge_count(), false);
        for (EdgeId e = 0; e < t.edge_count(); ++e) {
            VertexId v = t.edge(e).child_vertex;
            if (v != kNone && t.is_stump_vertex(v)) stump_capped_[e] = true;
        }
    }

    const Tree& tree() const { return tree_; }
    bool was_stump_capped(EdgeId e) const { return stump_capped_[e]; }
    bool was_true_leaf(EdgeId e) const { return orig_->is_leaf_edge(e); }

private:
    static std::string render_without_stumps(const Tree& t, EdgeId e) {
        VertexId v = t.edge(e).child_vertex;
        if (v == kNone || t.is_stump_vertex(v)) return "e";
        std::string out = "(";
        for (EdgeId c : t.vertex(v).in_edges) out += render_without_stumps(t, c);
        out += ")";
        return out;
    }

    const Tree* orig_;
    Tree tree_;
    std::vector<bool> stump_capped_;
};

}  // namespace

std::vector<StumpShuffle> shuffles_with_stumps(const Tree& S, const Tree& T,
                                               std::uint64_t max_results) {
    // Rejects inputs whose stump cascade would consume the root edge.
    if (!S.is_unit()) prune_stumps(S);
    if (!T.is_unit()) prune_stumps(T);

    StumpFreeView vs(S), vt(T);
    std::vector<StumpShuffle> out;
    for (const Shuffle& base : enumerate_shuffles(vs.tree(), vt.tree(), max_results)) {
        StumpShuffle d;
        d.base = base;
        for (EdgeId ls : vs.tree().leaves())
            for (EdgeId lt : vt.tree().leaves()) {
                bool sc = vs.was_stump_capped(ls), tc = vt.was_stump_capped(lt);
                if (!sc && !tc) continue;
                StumpSide side =
                    sc && tc ? StumpSide::from_both : (sc ? StumpSide::from_s : StumpSide::from_t);
                d.stumps.push_back({{ls, lt}, side});
            }
        out.push_back(std::move(d));
    }
    return out;
}

// --- serialization -------------------------------------------------------------------

namespace {

std::string pair_key(EdgePair p) {
    return std::to_string(p.first) + "," + std::to_string(p.second);
}

}  // namespace

std::string shuffle_to_json(const Shuffle& a) {
    nlohmann::json j;
    j["S"] = nlohmann::json::parse(tree_to_json(*a.S));
    j["T"] = nlohmann::json::parse(tree_to_json(*a.T));
    j["edges"] = nlohmann::json::array();
    for (auto [s, t] : a.edges) j["edges"].push_back({s, t});
    nlohmann::json par = nlohmann::json::object();
    for (std::size_t i = 0; i < a.edges.size(); ++i) {
        if (a.parent[i] < 0)
            par[pair_key(a.edges[i])] = nullptr;
        else
            par[pair_key(a.edges[i])] = pair_key(a.edges[a.parent[i]]);
    }
    j["parent"] = par;
    return j.dump();
}

Shuffle shuffle_from_json(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    TreePtr S = share(tree_from_json(j.at("S").dump()));
    TreePtr T = share(tree_from_json(j.at("T").dump()));
    std::vector<EdgePair> edges;
    for (const auto& e : j.at("edges")) edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
    return make_shuffle(std::move(S), std::move(T), std::move(edges));
}

std::string shuffle_to_dot(const Shuffle& a) {
    std::ostringstream os;
    os << "digraph shuffle {\n  rankdir=BT;\n  node [fixedsize=true, width=0.25];\n";
    auto kids = a.children_lists();
    for (int i = 0; i < a.size(); ++i) {
        os << "  p" << i << " [label=\"\", xlabel=\"(" << a.edges[i].first << ","
           << a.edges[i].second << ")\", shape=";
        if (kids[i].empty()) {
            os << "none];\n";
        } else if (a.step_kind(i) == StepKind::s_step) {
            os << "circle, style=filled, fillcolor=white];\n";
        } else {
            os << "circle, style=filled, fillcolor=black];\n";
        }
    }
    for (int i = 0; i < a.size(); ++i)
        if (a.parent[i] >= 0) os << "  p" << a.parent[i] << " -> p" << i << ";\n";
    os << "}\n";
    return os.str();
}

}  // namespace treeshuffle
