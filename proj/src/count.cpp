#include "treeshuffle/count.hpp"

#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>

namespace treeshuffle {

CountPolynomial::CountPolynomial(std::vector<BigRat> ascending_coefficients)
    : coeffs_(std::move(ascending_coefficients)) {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

CountPolynomial CountPolynomial::constant(BigRat c) {
    return CountPolynomial(std::vector<BigRat>{std::move(c)});
}

BigRat CountPolynomial::coefficient(int k) const {
    if (k < 0 || k >= static_cast<int>(coeffs_.size())) return 0;
    return coeffs_[k];
}

BigRat CountPolynomial::leading_coefficient() const {
    return coeffs_.empty() ? BigRat(0) : coeffs_.back();
}

BigRat CountPolynomial::evaluate(const BigRat& x) const {
    BigRat acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

BigInt CountPolynomial::evaluate_integer(const BigInt& n) const {
    BigRat v = evaluate(BigRat(n));
    if (boost::multiprecision::denominator(v) != 1)
        throw std::logic_error("polynomial value is not an integer");
    return boost::multiprecision::numerator(v);
}

std::string CountPolynomial::to_string() const {
    if (coeffs_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        if (coeffs_[k] == 0) continue;
        if (!first) os << " + ";
        first = false;
        os << coeffs_[k];
        if (k == 1)
            os << "*n";
        else if (k > 1)
            os << "*n^" << k;
    }
    return os.str();
}

CountPolynomial operator+(const CountPolynomial& a, const CountPolynomial& b) {
    std::vector<BigRat> c(std::max(a.coeffs_.size(), b.coeffs_.size()), BigRat(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
    for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] += b.coeffs_[i];
    return CountPolynomial(std::move(c));
}

CountPolynomial operator*(const CountPolynomial& a, const CountPolynomial& b) {
    if (a.coeffs_.empty() || b.coeffs_.empty()) return CountPolynomial();
    std::vector<BigRat> c(a.coeffs_.size() + b.coeffs_.size() - 1, BigRat(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return CountPolynomial(std::move(c));
}

CountPolynomial interpolate(const std::vector<std::pair<BigRat, BigRat>>& points) {
    // Lagrange basis, expanded incrementally with exact rationals.
    CountPolynomial result;
    for (std::size_t i = 0; i < points.size(); ++i) {
        CountPolynomial basis = CountPolynomial::constant(1);
        BigRat denom = 1;
        for (std::size_t j = 0; j < points.size(); ++j) {
            if (i == j) continue;
            basis = basis * CountPolynomial({-points[j].first, BigRat(1)});
            denom *= points[i].first - points[j].first;
        }
        result = result + basis * CountPolynomial::constant(points[i].second / denom);
    }
    return result;
}

CountPolynomial discrete_sum(const CountPolynomial& q) {
    int d = std::max(q.degree(), 0);
    std::vector<std::pair<BigRat, BigRat>> points;
    BigRat running = 0;
    for (int n = 0; n <= d + 1; ++n) {
        running += q.evaluate(n);
        points.emplace_back(BigRat(n), running);
    }
    return interpolate(points);
}

BigInt binomial(const BigInt& n, const BigInt& k) {
    if (k < 0 || k > n) return 0;
    BigInt r = 1;
    for (BigInt i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// --- counting --------------------------------------------------------------

namespace {

using CacheKey = std::pair<std::string, std::string>;

std::map<CacheKey, BigInt>& memo_table() {
    static std::map<CacheKey, BigInt> table;
    return table;
}

std::mutex& memo_mutex() {
    static std::mutex m;
    return m;
}

CacheKey normalized_key(const Tree& S, const Tree& T) {
    std::string a = S.canonical_form().code, b = T.canonical_form().code;
    if (b < a) std::swap(a, b);  // sh(S,T) = sh(T,S)
    return {std::move(a), std::move(b)};
}

BigInt count_rec(const Tree& S, const Tree& T) {
    if (S.is_unit() || T.is_unit()) return 1;
    CacheKey key = normalized_key(S, T);
    {
        std::lock_guard lock(memo_mutex());
        auto it = memo_table().find(key);
        if (it != memo_table().end()) return it->second;
    }
    auto ds = decompose(S);
    auto dt = decompose(T);
    BigInt left = 1, right = 1;
    for (const Tree& si : ds.subtrees) left *= count_rec(si, T);
    for (const Tree& tj : dt.subtrees) right *= count_rec(S, tj);
    BigInt total = left + right;
    std::lock_guard lock(memo_mutex());
    memo_table().emplace(std::move(key), total);
    return total;
}

}  // namespace

BigInt count_shuffles(const Tree& S, const Tree& T) {
    const Tree* s = &S;
    const Tree* t = &T;
    Tree sp, tp;
    if (S.has_stumps()) {
        sp = prune_stumps(S).tree;
        s = &sp;
    }
    if (T.has_stumps()) {
        tp = prune_stumps(T).tree;
        t = &tp;
    }
    return count_rec(*s, *t);
}

BigInt linear_count(int p, int q) { return binomial(p + q, p); }

BigInt binary_count(int p, int q) {
    static std::map<std::pair<int, int>, BigInt> memo;
    static std::mutex mtx;
    if (p == 0 || q == 0) return 1;
    if (p > q) std::swap(p, q);
    std::lock_guard lock(mtx);
    auto rec = [&](auto&& self, int a, int b) -> BigInt {
        if (a == 0 || b == 0) return 1;
        if (a > b) std::swap(a, b);
        auto it = memo.find({a, b});
        if (it != memo.end()) return it->second;
        BigInt x = self(self, a - 1, b);
        BigInt y = self(self, a, b - 1);
        BigInt v = x * x + y * y;
        memo.emplace(std::make_pair(a, b), v);
        return v;
    };
    return rec(rec, p, q);
}

BoundsTriple count_bounds(const Tree& S, const Tree& T) {
    BoundsTriple b;
    if (S.is_unit() || T.is_unit()) {
        b.lower = b.upper_sharp = b.upper_coarse = 1;
        return b;
    }
    b.lower = binomial(height(S) + height(T), height(S));
    BigInt sharp_left = 1, sharp_right = 1, coarse = 1;
    for (const Tree& alpha : branches(S))
        for (const Tree& beta : branches(T)) {
            BigInt a = height(alpha), c = height(beta);  // vertex counts of the branches
            sharp_left *= binomial(a - 1 + c, c);
            sharp_right *= binomial(a + c - 1, a);
            coarse *= binomial(a + c, c);
        }
    b.upper_sharp = sharp_left + sharp_right;
    b.upper_coarse = coarse;
    return b;
}

CountPolynomial shuffle_polynomial(const Tree& S) {
    if (S.has_stumps()) throw std::invalid_argument("shuffle_polynomial: tree contains stumps");
    if (S.is_unit()) return CountPolynomial::constant(1);
    auto d = decompose(S);
    CountPolynomial prod = CountPolynomial::constant(1);
    for (const Tree& si : d.subtrees) prod = prod * shuffle_polynomial(si);
    return discrete_sum(prod);
}

// --- memo persistence --------------------------------------------------------

void load_count_cache(std::istream& in) {
    std::string a, b, v;
    std::lock_guard lock(memo_mutex());
    while (in >> a >> b >> v) memo_table()[{a, b}] = BigInt(v);
}

void save_count_cache(std::ostream& out) {
    std::lock_guard lock(memo_mutex());
    for (const auto& [key, value] : memo_table())
        out << key.first << " " << key.second << " " << value << "\n";
}

std::size_t count_cache_size() {
    std::lock_guard lock(memo_mutex());
    return memo_table().size();
}

}  // namespace treeshuffle
