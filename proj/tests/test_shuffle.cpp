#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "generators.hpp"
#include "treeshuffle/shuffle.hpp"

using namespace treeshuffle;

namespace {

std::set<std::vector<EdgePair>> edge_sets(const std::vector<Shuffle>& v) {
    std::set<std::vector<EdgePair>> out;
    for (const Shuffle& a : v) out.insert(a.edges);
    return out;
}

}  // namespace

TEST_CASE("enumerate: degenerate and small pairs") {
    Tree eta = Tree::parse("e");
    CHECK(enumerate_shuffles(eta, eta).size() == 1);
    CHECK(enumerate_shuffles(eta, Tree::parse("((e)(e))")).size() == 1);
    CHECK(enumerate_shuffles(Tree::parse("((e)(e))"), eta).size() == 1);
    CHECK(enumerate_shuffles(Tree::linear(1), Tree::linear(1)).size() == 2);
}

TEST_CASE("enumerate: known counts") {
    // The classic example pair: 14 shuffles.
    CHECK(enumerate_shuffles(Tree::parse("((e))"), Tree::parse("((e)(e))")).size() == 14);
    // Linear trees: binomial coefficients.
    auto binom = [](int n, int k) {
        long long r = 1;
        for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
        return r;
    };
    for (int p = 0; p <= 4; ++p)
        for (int q = 0; q <= 4; ++q)
            CHECK(enumerate_shuffles(Tree::linear(p), Tree::linear(q)).size() ==
                  static_cast<std::size_t>(binom(p + q, p)));
    // Full binary trees: b(p,q) = b(p-1,q)^2 + b(p,q-1)^2.
    CHECK(enumerate_shuffles(Tree::full_binary(1), Tree::full_binary(1)).size() == 2);
    CHECK(enumerate_shuffles(Tree::full_binary(2), Tree::full_binary(1)).size() == 5);
    CHECK(enumerate_shuffles(Tree::full_binary(1), Tree::full_binary(2)).size() == 5);
    CHECK(enumerate_shuffles(Tree::full_binary(2), Tree::full_binary(2)).size() == 50);
}

TEST_CASE("enumerate: 3089 shuffles for the height-comparison pair") {
    Tree S = Tree::parse("(((e)(e)(e)))");
    Tree T = Tree::parse("((((e)))(e))");
    auto all = enumerate_shuffles(S, T);
    CHECK(all.size() == 3089);
    // Spot-check structural invariants on every shuffle.
    std::size_t leaf_pairs = S.leaves().size() * T.leaves().size();
    std::set<std::vector<EdgePair>> seen;
    for (const Shuffle& a : all) {
        CHECK(a.edges[0] == EdgePair{0, 0});
        CHECK(std::is_sorted(a.edges.begin(), a.edges.end()));
        std::size_t leaves = 0;
        auto kids = a.children_lists();
        for (const auto& k : kids) leaves += k.empty();
        CHECK(leaves == leaf_pairs);
        seen.insert(a.edges);
    }
    CHECK(seen.size() == all.size());  // no duplicates
}

TEST_CASE("enumerate agrees with the exhaustive subset scan") {
    for (const Tree& S : tsgen::trees_with_edges_up_to(4))
        for (const Tree& T : tsgen::trees_with_edges_up_to(4)) {
            if (S.edge_count() * T.edge_count() > 20) continue;
            auto fast = enumerate_shuffles(S, T);
            auto slow = brute_force_shuffles(S, T);
            CHECK(edge_sets(fast) == edge_sets(slow));
        }
}

TEST_CASE("the three characterizations accept every enumerated shuffle") {
    std::mt19937_64 rng(20260823);
    std::vector<std::pair<Tree, Tree>> pairs;
    for (const Tree& S : tsgen::trees_with_edges_up_to(3))
        for (const Tree& T : tsgen::trees_with_edges_up_to(4)) pairs.emplace_back(S, T);
    for (int i = 0; i < 10; ++i)
        pairs.emplace_back(tsgen::random_tree(rng, 3), tsgen::random_tree(rng, 3));

    for (auto& [S, T] : pairs) {
        ShuffleChecker ck(S, T);
        for (const Shuffle& a : enumerate_shuffles(S, T, 4000)) {
            std::string why;
            CHECK_MESSAGE(ck.definition(a.edges, &why), why);
            CHECK(ck.branches(a.edges));
            CHECK(ck.maximality(a.edges));
        }
    }
}

TEST_CASE("the three characterizations agree on arbitrary subsets") {
    // Every subset containing the forced pairs, for pairs small enough to
    // scan exhaustively: definition <=> branches <=> maximality.
    std::vector<std::pair<const char*, const char*>> pairs = {
        {"((e))", "((e))"}, {"(e)", "((e)(e))"}, {"((e))", "(ee)"}, {"(e(e))", "((e))"}};
    for (auto [st, tt] : pairs) {
        Tree S = Tree::parse(st), T = Tree::parse(tt);
        ShuffleChecker ck(S, T);
        REQUIRE(ck.pair_count() <= 16);
        std::uint64_t full = (1ull << ck.pair_count()) - 1;
        std::uint64_t forced = ck.forced_mask();
        std::uint64_t free_bits = full & ~forced;
        std::uint64_t sub = free_bits;
        while (true) {
            std::uint64_t mask = forced | sub;
            bool d = ck.definition(mask);
            CHECK(d == ck.branches(mask));
            CHECK(d == ck.maximality(mask));
            if (sub == 0) break;
            sub = (sub - 1) & free_bits;
        }
    }
}

TEST_CASE("verifiers reject subsets missing the root or a leaf pair") {
    Tree S = Tree::parse("((e))"), T = Tree::parse("((e)(e))");
    ShuffleChecker ck(S, T);
    for (const Shuffle& a : enumerate_shuffles(S, T)) {
        for (std::size_t drop = 0; drop < a.edges.size(); ++drop) {
            std::vector<EdgePair> damaged;
            for (std::size_t i = 0; i < a.edges.size(); ++i)
                if (i != drop) damaged.push_back(a.edges[i]);
            // Dropping any single element breaks all three conditions.
            CHECK_FALSE(ck.definition(damaged));
            CHECK_FALSE(ck.branches(damaged));
            CHECK_FALSE(ck.maximality(damaged));
        }
    }
    std::string why;
    CHECK_FALSE(verify_definition(S, T, std::vector<EdgePair>{{0, 0}}, &why));
    CHECK(!why.empty());
}

TEST_CASE("the general verification path matches the mask path") {
    std::mt19937_64 rng(7);
    Tree S = Tree::parse("((e))"), T = Tree::parse("((e)(e))");
    ShuffleChecker ck(S, T);
    std::uint64_t full = (1ull << ck.pair_count()) - 1;
    for (int trial = 0; trial < 500; ++trial) {
        std::uint64_t mask = (rng() & full) | ck.forced_mask();
        std::vector<EdgePair> edges;
        for (int b = 0; b < ck.pair_count(); ++b)
            if (mask & (1ull << b)) edges.push_back(ck.pair_of(b));
        // Route one copy through the vector interface of an oversized
        // checker by building the same pair on larger trees is overkill;
        // instead compare mask results with the general algorithms via
        // verify_* free functions on the same data.
        CHECK(ck.definition(mask) == ck.definition(edges));
        CHECK(ck.branches(mask) == ck.branches(edges));
        CHECK(ck.maximality(mask) == ck.maximality(edges));
    }
}

TEST_CASE("min and max shuffles") {
    Tree S = Tree::parse("((e))"), T = Tree::parse("((e)(e))");
    auto all = enumerate_shuffles(S, T);
    Shuffle lo = min_shuffle(share(S), share(T));
    Shuffle hi = max_shuffle(share(S), share(T));
    CHECK(all.front().edges == lo.edges);
    CHECK(all.back().edges == hi.edges);
    // Copies of T on top of S: |E(S)| + |L(S)| * (|E(T)| - 1) pairs.
    CHECK(lo.size() == S.edge_count() + static_cast<int>(S.leaves().size()) * (T.edge_count() - 1));
    CHECK(hi.size() == T.edge_count() + static_cast<int>(T.leaves().size()) * (S.edge_count() - 1));
    CHECK(verify_definition(S, T, lo));
    CHECK(verify_definition(S, T, hi));
}

TEST_CASE("transpose is an involutive bijection") {
    Tree S = Tree::parse("((e))"), T = Tree::parse("((e)(e))");
    auto st = enumerate_shuffles(S, T);
    auto ts = enumerate_shuffles(T, S);
    CHECK(st.size() == ts.size());
    std::set<std::vector<EdgePair>> flipped;
    for (const Shuffle& a : st) {
        Shuffle b = transpose(a);
        CHECK(verify_definition(T, S, b));
        CHECK(transpose(b).edges == a.edges);
        flipped.insert(b.edges);
    }
    CHECK(flipped == edge_sets(ts));
}

TEST_CASE("make_shuffle validates and round-trips") {
    Tree S = Tree::parse("((e))"), T = Tree::parse("((e)(e))");
    for (const Shuffle& a : enumerate_shuffles(S, T)) {
        Shuffle back = make_shuffle(a.S, a.T, a.edges);
        CHECK(back.edges == a.edges);
        CHECK(back.parent == a.parent);
    }
    CHECK_THROWS_AS(make_shuffle(share(S), share(T), {{0, 0}, {2, 2}}), std::invalid_argument);
    CHECK_THROWS_AS(make_shuffle(share(S), share(T), {}), std::invalid_argument);
    CHECK_THROWS_AS(make_shuffle(share(S), share(T), {{0, 9}}), std::invalid_argument);
}

TEST_CASE("enumeration cap raises a resource error") {
    Tree S = Tree::parse("((e))"), T = Tree::parse("((e)(e))");
    CHECK_THROWS_AS(enumerate_shuffles(S, T, 13), ResourceLimitError);
    CHECK_NOTHROW(enumerate_shuffles(S, T, 14));
}

TEST_CASE("stump-bearing inputs are rejected by the enumerator") {
    CHECK_THROWS_AS(enumerate_shuffles(Tree::parse("(()e)"), Tree::parse("e")),
                    std::invalid_argument);
    CHECK_THROWS_AS(min_shuffle(share(Tree::parse("e")), share(Tree::parse("()"))),
                    std::invalid_argument);
}

TEST_CASE("branch words and branch extension") {
    Tree S = Tree::parse("((e)(e))"), T = Tree::parse("((e))");
    TreePtr sp = share(S), tp = share(T);
    for (const Shuffle& a : enumerate_shuffles(S, T)) {
        for (EdgeId ls : S.leaves())
            for (EdgeId lt : T.leaves()) {
                BranchShuffle w = a.branch_word(ls, lt);
                int ns = 0, nt = 0;
                for (StepKind k : w) (k == StepKind::s_step ? ns : nt)++;
                CHECK(ns == S.branch_height(ls));
                CHECK(nt == T.branch_height(lt));
                Shuffle ext = extend_branch_shuffle(sp, tp, ls, lt, w);
                CHECK(verify_definition(S, T, ext));
                CHECK(ext.branch_word(ls, lt) == w);
            }
    }
    // Every interleaving of a fixed branch pair extends to some shuffle.
    BranchShuffle bad = {StepKind::s_step, StepKind::s_step, StepKind::s_step};
    CHECK_THROWS_AS(extend_branch_shuffle(sp, tp, S.leaves()[0], T.leaves()[0], bad),
                    std::invalid_argument);
}

TEST_CASE("shuffles of trees with stumps") {
    // One stump in each tree: 3 shuffles, matching the count for the pruned
    // pair (L_2 and the corolla).
    Tree S = Tree::parse("((()e))"), T = Tree::parse("(()e)");
    auto dec = shuffles_with_stumps(S, T);
    CHECK(dec.size() == 3);
    Tree S0 = prune_stumps(S).tree, T0 = prune_stumps(T).tree;
    CHECK(S0.isomorphic(Tree::linear(2)));
    CHECK(T0.isomorphic(Tree::corolla(1)));
    CHECK(enumerate_shuffles(S0, T0).size() == dec.size());
    for (const StumpShuffle& d : dec) {
        // Decorations: the leaf pairs not made of two original leaves; here
        // exactly one of each flavor.
        REQUIRE(d.stumps.size() == 3);
        std::set<StumpSide> sides;
        for (auto& [pair, side] : d.stumps) {
            CHECK(d.base.contains(pair));
            sides.insert(side);
        }
        CHECK(sides ==
              std::set<StumpSide>{StumpSide::from_s, StumpSide::from_t, StumpSide::from_both});
        CHECK(verify_definition(*d.base.S, *d.base.T, d.base));
    }

    // Stump-free inputs decorate nothing and match plain enumeration.
    Tree A = Tree::parse("((e))"), B = Tree::parse("((e)(e))");
    auto plain = shuffles_with_stumps(A, B);
    CHECK(plain.size() == 14);
    for (const StumpShuffle& d : plain) CHECK(d.stumps.empty());

    CHECK_THROWS_AS(shuffles_with_stumps(Tree::parse("()"), Tree::parse("e")),
                    std::invalid_argument);
}

TEST_CASE("shuffle json round trip and dot output") {
    Tree S = Tree::parse("((e))"), T = Tree::parse("((e)(e))");
    for (const Shuffle& a : enumerate_shuffles(S, T)) {
        Shuffle back = shuffle_from_json(shuffle_to_json(a));
        CHECK(back.edges == a.edges);
        CHECK(back.parent == a.parent);
        CHECK(back.same_pair(a));
    }
    std::string dot = shuffle_to_dot(enumerate_shuffles(S, T).front());
    CHECK(dot.find("digraph") != std::string::npos);
    CHECK(dot.find("fillcolor=white") != std::string::npos);
    CHECK(dot.find("fillcolor=black") != std::string::npos);
}
