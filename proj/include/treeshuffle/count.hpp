#pragma once

// Exact shuffle counting without enumeration: the product-sum recursion,
// closed forms for linear and full binary families, height bounds, and the
// counting polynomial P_S with sh(S, L_n) = P_S(n).

#include <iosfwd>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "treeshuffle/tree.hpp"

namespace treeshuffle {

using BigRat = boost::multiprecision::cpp_rational;

// Polynomial with exact rational coefficients, ascending degree, normalized
// so the highest stored coefficient is nonzero (the zero polynomial stores
// no coefficients).
class CountPolynomial {
public:
    CountPolynomial() = default;
    explicit CountPolynomial(std::vector<BigRat> ascending_coefficients);
    static CountPolynomial constant(BigRat c);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }  // -1 for zero
    const std::vector<BigRat>& coefficients() const { return coeffs_; }
    BigRat coefficient(int k) const;  // 0 beyond the stored degree
    BigRat leading_coefficient() const;

    BigRat evaluate(const BigRat& x) const;
    // Evaluation at a natural number; throws std::logic_error when the
    // value is not an integer.
    BigInt evaluate_integer(const BigInt& n) const;

    // Exact rationals in lowest terms, ascending powers of n.
    std::string to_string() const;

    friend CountPolynomial operator+(const CountPolynomial& a, const CountPolynomial& b);
    friend CountPolynomial operator*(const CountPolynomial& a, const CountPolynomial& b);
    friend bool operator==(const CountPolynomial& a, const CountPolynomial& b) {
        return a.coeffs_ == b.coeffs_;
    }

private:
    std::vector<BigRat> coeffs_;
};

// The unique polynomial interpolating the given (x, y) points; the x values
// must be pairwise distinct.
CountPolynomial interpolate(const std::vector<std::pair<BigRat, BigRat>>& points);

// Q with Q(n) = sum_{k=0}^{n} q(k); degree rises by one.
CountPolynomial discrete_sum(const CountPolynomial& q);

// C(n, k), 0 outside 0 <= k <= n.
BigInt binomial(const BigInt& n, const BigInt& k);

// Exact number of shuffles, by the recursion
//   sh(S,T) = prod_i sh(S_i,T) + prod_j sh(S,T_j),  sh(unit,T) = sh(S,unit) = 1,
// memoized on normalized canonical-code pairs. Trees with stumps are counted
// through their stump-pruned forms.
BigInt count_shuffles(const Tree& S, const Tree& T);

// Closed forms: shuffles of linear trees L_p, L_q and of full binary trees
// B_p, B_q.
BigInt linear_count(int p, int q);
BigInt binary_count(int p, int q);

struct BoundsTriple {
    BigInt lower;         // C(ht S + ht T, ht S)
    BigInt upper_sharp;   // two products over branch pairs
    BigInt upper_coarse;  // product of C(|a|+|b|, |b|) over branch pairs
};

// Height/branch bounds: lower <= count_shuffles(S,T) <= upper_sharp <= upper_coarse.
BoundsTriple count_bounds(const Tree& S, const Tree& T);

// P_S with P_S(n) = count_shuffles(S, L_n): degree = vertex count of S,
// leading coefficient 1 / tree_factorial(S). Stump-free S only.
CountPolynomial shuffle_polynomial(const Tree& S);

// Persistence of the count_shuffles memo table, one entry per line:
// <canonical code S> <canonical code T> <count>.
void load_count_cache(std::istream& in);
void save_count_cache(std::ostream& out);
std::size_t count_cache_size();

}  // namespace treeshuffle
