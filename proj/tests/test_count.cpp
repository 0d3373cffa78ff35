#include <doctest.h>

#include <random>
#include <sstream>

#include "generators.hpp"
#include "treeshuffle/count.hpp"
#include "treeshuffle/shuffle.hpp"

using namespace treeshuffle;

TEST_CASE("count_shuffles known values") {
    Tree eta = Tree::parse("e");
    CHECK(count_shuffles(Tree::parse("(((e)(e)(e)))"), eta) == 1);
    CHECK(count_shuffles(eta, Tree::parse("((e)(e))")) == 1);
    CHECK(count_shuffles(Tree::parse("((e))"), Tree::parse("((e)(e))")) == 14);
    CHECK(count_shuffles(Tree::parse("(((e)(e)(e)))"), Tree::parse("((((e)))(e))")) == 3089);
}

TEST_CASE("count_shuffles matches enumeration") {
    for (const Tree& S : tsgen::trees_with_edges_up_to(4))
        for (const Tree& T : tsgen::trees_with_edges_up_to(4)) {
            BigInt c = count_shuffles(S, T);
            if (c > 5000) continue;
            CHECK(c == enumerate_shuffles(S, T, 6000).size());
        }
}

TEST_CASE("count is symmetric and sandwiched by the bounds") {
    std::mt19937_64 rng(42);
    for (int i = 0; i < 100; ++i) {
        Tree S = tsgen::random_tree(rng, 10);
        Tree T = tsgen::random_tree(rng, 10);
        BigInt c = count_shuffles(S, T);
        CHECK(c == count_shuffles(T, S));
        BoundsTriple b = count_bounds(S, T);
        CHECK(b.lower <= c);
        CHECK(c <= b.upper_sharp);
        CHECK(b.upper_sharp <= b.upper_coarse);
    }
}

TEST_CASE("linear_count") {
    for (int q = 0; q <= 6; ++q) {
        CHECK(linear_count(0, q) == 1);
        CHECK(linear_count(q, 0) == 1);
    }
    CHECK(linear_count(1, 1) == 2);
    CHECK(linear_count(3, 2) == 10);
    for (int p = 0; p <= 5; ++p)
        for (int q = 0; q <= 5; ++q)
            CHECK(linear_count(p, q) == count_shuffles(Tree::linear(p), Tree::linear(q)));
}

TEST_CASE("binary_count") {
    for (int q = 0; q <= 6; ++q) {
        CHECK(binary_count(0, q) == 1);
        CHECK(binary_count(q, 0) == 1);
    }
    CHECK(binary_count(1, 1) == 2);
    CHECK(binary_count(2, 1) == 5);
    CHECK(binary_count(2, 2) == 50);
    CHECK(binary_count(3, 2) == BigInt(50) * 50 + BigInt(26) * 26);
    for (int p = 0; p <= 3; ++p)
        for (int q = 0; q <= 3; ++q)
            CHECK(binary_count(p, q) == count_shuffles(Tree::full_binary(p), Tree::full_binary(q)));
}

TEST_CASE("count_bounds examples") {
    auto b = count_bounds(Tree::parse("((e))"), Tree::parse("((e)(e))"));
    CHECK(b.lower == 6);
    CHECK(b.upper_sharp == 18);
    CHECK(b.upper_coarse == 36);

    // Linear trees: all three bounds collapse onto the exact count.
    for (int p = 1; p <= 4; ++p)
        for (int q = 1; q <= 4; ++q) {
            auto lb = count_bounds(Tree::linear(p), Tree::linear(q));
            CHECK(lb.lower == linear_count(p, q));
            CHECK(lb.upper_sharp == linear_count(p, q));
            CHECK(lb.upper_coarse == linear_count(p, q));
        }
}

TEST_CASE("count with stumps goes through the pruned trees") {
    Tree S = Tree::parse("((()e))"), T = Tree::parse("(()e)");
    CHECK(count_shuffles(S, T) == 3);
    CHECK(count_shuffles(S, T) ==
          count_shuffles(prune_stumps(S).tree, prune_stumps(T).tree));
}

TEST_CASE("shuffle_polynomial small cases") {
    CHECK(shuffle_polynomial(Tree::parse("e")) == CountPolynomial::constant(1));
    CHECK(shuffle_polynomial(Tree::corolla(3)) == CountPolynomial({BigRat(1), BigRat(1)}));

    // Two trees with the same counting polynomial: sum of C(k+2,2)^2.
    Tree S = Tree::parse("(((e)(e)(e)))");
    Tree R = Tree::parse("(((e))((e)))");
    CountPolynomial ps = shuffle_polynomial(S);
    CHECK(ps.degree() == 5);
    CHECK(ps.leading_coefficient() == BigRat(1, 20));
    CHECK(ps.evaluate_integer(1) == 10);
    CHECK(ps == shuffle_polynomial(R));
    for (int n = 0; n <= 8; ++n) {
        BigRat expect = 0;
        for (int k = 0; k <= n; ++k) {
            BigRat c = BigRat(binomial(k + 2, 2));
            expect += c * c;
        }
        CHECK(ps.evaluate(n) == expect);
    }
}

TEST_CASE("shuffle_polynomial evaluates to shuffle counts") {
    for (const Tree& S : tsgen::reduced_trees_up_to(5)) {
        CountPolynomial p = shuffle_polynomial(S);
        CHECK(p.degree() == S.vertex_count());
        CHECK(p.leading_coefficient() == BigRat(1, BigInt(tree_factorial(S))));
        for (int n = 0; n <= 6; ++n)
            CHECK(p.evaluate_integer(n) == count_shuffles(S, Tree::linear(n)));
    }
    // Non-reduced trees too: the polynomial depends on more than the poset.
    for (const Tree& S : tsgen::trees_with_edges_up_to(5)) {
        CountPolynomial p = shuffle_polynomial(S);
        CHECK(p.degree() == S.vertex_count());
        for (int n = 0; n <= 4; ++n)
            CHECK(p.evaluate_integer(n) == count_shuffles(S, Tree::linear(n)));
    }
}

TEST_CASE("discrete_sum") {
    CHECK(discrete_sum(CountPolynomial::constant(1)) ==
          CountPolynomial({BigRat(1), BigRat(1)}));
    CHECK(discrete_sum(CountPolynomial({BigRat(0), BigRat(1)})) ==
          CountPolynomial({BigRat(0), BigRat(1, 2), BigRat(1, 2)}));
    // Sum of cubes: (n(n+1)/2)^2.
    CountPolynomial cubes({BigRat(0), BigRat(0), BigRat(0), BigRat(1)});
    CHECK(discrete_sum(cubes) ==
          CountPolynomial({BigRat(0), BigRat(0), BigRat(1, 4), BigRat(1, 2), BigRat(1, 4)}));

    // Difference identity Q(n) - Q(n-1) = q(n), checked at enough points to
    // pin down the polynomials.
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<BigRat> cs;
        int d = static_cast<int>(rng() % 5);
        for (int i = 0; i <= d; ++i)
            cs.emplace_back(static_cast<long long>(rng() % 19) - 9, 1 + static_cast<int>(rng() % 4));
        CountPolynomial q(cs);
        CountPolynomial Q = discrete_sum(q);
        CHECK(Q.degree() <= q.degree() + 1);
        for (int n = 1; n <= q.degree() + 4; ++n)
            CHECK(Q.evaluate(n) - Q.evaluate(n - 1) == q.evaluate(n));
        CHECK(Q.evaluate(0) == q.evaluate(0));
    }
}

TEST_CASE("polynomial arithmetic and printing") {
    CountPolynomial zero;
    CHECK(zero.degree() == -1);
    CHECK(zero.to_string() == "0");
    CHECK((zero + CountPolynomial::constant(2)).to_string() == "2");
    CHECK((zero * CountPolynomial::constant(2)) == zero);

    CountPolynomial p({BigRat(1), BigRat(1, 2), BigRat(0), BigRat(-2, 3)});
    CHECK(p.to_string() == "1 + 1/2*n + -2/3*n^3");
    CHECK(p.coefficient(2) == 0);
    CHECK(p.coefficient(7) == 0);
    CHECK_THROWS_AS(p.evaluate_integer(1), std::logic_error);

    auto pts = std::vector<std::pair<BigRat, BigRat>>{{0, 1}, {1, 2}, {2, 5}};
    CHECK(interpolate(pts) == CountPolynomial({BigRat(1), BigRat(0), BigRat(1)}));
}

TEST_CASE("memo cache persistence") {
    count_shuffles(Tree::parse("((e))"), Tree::parse("((e)(e))"));
    CHECK(count_cache_size() > 0);
    std::ostringstream out;
    save_count_cache(out);
    std::size_t before = count_cache_size();
    std::istringstream in(out.str());
    load_count_cache(in);
    CHECK(count_cache_size() == before);  // reloading is idempotent

    // A preloaded entry short-circuits the recursion.
    Tree a = Tree::corolla(9), b = Tree::corolla(8);
    std::string key1 = b.canonical_form().code, key2 = a.canonical_form().code;
    REQUIRE(key1 < key2);
    std::istringstream fake(key1 + " " + key2 + " 123456789\n");
    load_count_cache(fake);
    CHECK(count_shuffles(a, b) == 123456789);
}
