#pragma once

#include "bopmat/matrix.hpp"
#include "bopmat/quadrature.hpp"
#include "bopmat/rational.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace bopmat {

/// Bernoulli numbers B_0..B_{count-1} from Kronecker's double sum
///
///   B_n = -sum_{k=1}^{n+1} (-1)^k/k * C(n+1,k) * sum_{j=1}^{k} j^n
///
/// valid for n >= 0, n != 1; B_1 is pinned to -1/2.
inline std::vector<Rational> bernoulli_numbers_kronecker(std::size_t count) {
    if (count == 0) throw std::invalid_argument("bernoulli_numbers: count must be positive");
    std::vector<Rational> out;
    out.reserve(count);
    for (std::size_t n = 0; n < count; ++n) {
        if (n == 1) {
            out.push_back(rational(-1, 2));
            continue;
        }
        Rational sum(0);
        BigInt power_sum = 0;  // sum_{j=1}^{k} j^n, accumulated over k
        for (std::size_t k = 1; k <= n + 1; ++k) {
            power_sum += boost::multiprecision::pow(BigInt(k), static_cast<unsigned>(n));
            const Rational term = rational(binomial(static_cast<unsigned>(n + 1), static_cast<unsigned>(k)) * power_sum,
                                           BigInt(k));
            if (k % 2 == 0)
                sum -= term;
            else
                sum += term;
        }
        out.push_back(sum);
    }
    // The formula is stated for n != 1 only; n = 0 must come out as 1.
    if (out[0] != 1) throw std::logic_error("Kronecker sum did not evaluate to 1 at n = 0");
    return out;
}

/// Independent route: B_n = -1/(n+1) * sum_{k=0}^{n-1} C(n+1,k) B_k.
inline std::vector<Rational> bernoulli_numbers_pascal(std::size_t count) {
    if (count == 0) throw std::invalid_argument("bernoulli_numbers: count must be positive");
    std::vector<Rational> out{Rational(1)};
    for (std::size_t n = 1; n < count; ++n) {
        Rational acc(0);
        for (std::size_t k = 0; k < n; ++k)
            acc += Rational(binomial(static_cast<unsigned>(n + 1), static_cast<unsigned>(k))) * out[k];
        out.push_back(-acc / Rational(static_cast<unsigned>(n + 1)));
    }
    return out;
}

/// Cross-checked table; a mismatch between the two routes aborts construction.
inline std::vector<Rational> bernoulli_numbers(std::size_t count) {
    auto numbers = bernoulli_numbers_kronecker(count);
    if (numbers != bernoulli_numbers_pascal(count))
        throw std::logic_error("Bernoulli numbers: Kronecker sum disagrees with Pascal recurrence");
    return numbers;
}

class BernoulliTable {
public:
    explicit BernoulliTable(std::size_t count) : numbers_(bernoulli_numbers(count)) {}

    /// Table sized for truncation order N: the Gram matrix of the order-(N+1)
    /// tail needs B-indices up to 2N+2.
    static BernoulliTable for_order(int n) {
        if (n < 0) throw std::invalid_argument("BernoulliTable: order must be nonnegative");
        return BernoulliTable(static_cast<std::size_t>(2 * n + 3));
    }

    const Rational& at(std::size_t k) const {
        if (k >= numbers_.size())
            throw std::invalid_argument("BernoulliTable: index " + std::to_string(k) +
                                        " beyond table of " + std::to_string(numbers_.size()));
        return numbers_[k];
    }

    std::size_t count() const { return numbers_.size(); }

private:
    std::vector<Rational> numbers_;
};

/// Rows hold the monomial coefficients of B_0..B_N, so for coefficient row
/// vectors it converts Bernoulli-basis coefficients to monomial coefficients.
/// Unit lower triangular: row i, column j carries C(i, i-j) B_{i-j}.
inline Matrix<Rational> bernoulli_to_monomial_matrix(const BernoulliTable& table, int n) {
    if (n < 0) throw std::invalid_argument("bernoulli_to_monomial_matrix: negative order");
    if (table.count() < static_cast<std::size_t>(n) + 1)
        throw std::invalid_argument("bernoulli_to_monomial_matrix: table too short");
    Matrix<Rational> m(n + 1, n + 1);
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= i; ++j)
            m(i, j) = Rational(binomial(i, i - j)) * table.at(i - j);
    return m;
}

/// Inverse basis change: row i expands x^i = 1/(i+1) sum_k C(i+1,k) B_k(x).
inline Matrix<Rational> monomial_to_bernoulli_matrix(const BernoulliTable& table, int n) {
    if (n < 0) throw std::invalid_argument("monomial_to_bernoulli_matrix: negative order");
    if (table.count() < static_cast<std::size_t>(n) + 1)
        throw std::invalid_argument("monomial_to_bernoulli_matrix: table too short");
    Matrix<Rational> q(n + 1, n + 1);
    for (int i = 0; i <= n; ++i)
        for (int k = 0; k <= i; ++k)
            q(i, k) = rational(binomial(i + 1, k), BigInt(i + 1));
    return q;
}

/// Pairwise L2 inner products on [0, 1]:
///
///   int_0^1 B_i B_j = (-1)^{i-1} i! j! / (i+j)! * B_{i+j}   for i + j >= 2.
///
/// Row and column 0 are handled analytically (B_0 normalization and the zero
/// mean of B_j, j >= 1); the product formula is never applied below i+j = 2.
inline Matrix<Rational> gram_matrix(const BernoulliTable& table, int n) {
    if (n < 0) throw std::invalid_argument("gram_matrix: negative order");
    if (table.count() < static_cast<std::size_t>(2 * n) + 1)
        throw std::invalid_argument("gram_matrix: table must reach B_{2N}");
    Matrix<Rational> d(n + 1, n + 1);
    d(0, 0) = Rational(1);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            Rational value = rational(factorial(i) * factorial(j), factorial(i + j)) * table.at(i + j);
            d(i, j) = (i % 2 == 1) ? value : -value;
        }
    return d;
}

/// All fixed-order data for one truncation order N. The exact matrices are
/// kept alongside the solver-typed copies so identity tests and the exact
/// solve path never touch floating point.
template <typename T>
struct BasisContext {
    int order = 0;
    BernoulliTable table;
    Matrix<Rational> to_monomial_exact;   // coefficient rows: Bernoulli -> monomial
    Matrix<Rational> to_bernoulli_exact;  // coefficient rows: monomial -> Bernoulli
    Matrix<Rational> gram_exact;
    Matrix<T> to_monomial;
    Matrix<T> to_bernoulli;
    Matrix<T> gram;
};

template <typename T = double>
BasisContext<T> make_basis_context(int n) {
    if (n < 0) throw std::invalid_argument("make_basis_context: negative order");
    BasisContext<T> ctx{n, BernoulliTable::for_order(n), {}, {}, {}, {}, {}, {}};
    ctx.to_monomial_exact = bernoulli_to_monomial_matrix(ctx.table, n);
    ctx.to_bernoulli_exact = monomial_to_bernoulli_matrix(ctx.table, n);
    ctx.gram_exact = gram_matrix(ctx.table, n);
    ctx.to_monomial = cast_matrix<T>(ctx.to_monomial_exact);
    ctx.to_bernoulli = cast_matrix<T>(ctx.to_bernoulli_exact);
    ctx.gram = cast_matrix<T>(ctx.gram_exact);
    return ctx;
}

/// Exact-rational view of any context; copies the exact matrices only.
template <typename T>
BasisContext<Rational> exact_context(const BasisContext<T>& ctx) {
    return BasisContext<Rational>{ctx.order,
                                  ctx.table,
                                  ctx.to_monomial_exact,
                                  ctx.to_bernoulli_exact,
                                  ctx.gram_exact,
                                  ctx.to_monomial_exact,
                                  ctx.to_bernoulli_exact,
                                  ctx.gram_exact};
}

/// B_j(x) by Horner on the stored monomial coefficients; x is unrestricted
/// (identity tests evaluate at x+1).
template <typename T>
T eval_basis_component(const BasisContext<T>& ctx, int j, const T& x) {
    T acc = ctx.to_monomial(j, j);
    for (int k = j - 1; k >= 0; --k) acc = acc * x + ctx.to_monomial(j, k);
    return acc;
}

/// [B_0(x), ..., B_N(x)].
template <typename T>
std::vector<T> eval_basis(const BasisContext<T>& ctx, const T& x) {
    std::vector<T> out(static_cast<std::size_t>(ctx.order) + 1);
    for (int j = 0; j <= ctx.order; ++j) out[j] = eval_basis_component(ctx, j, x);
    return out;
}

namespace detail {
inline int trimmed_degree(std::span<const Rational> mono) {
    int deg = -1;
    for (std::size_t i = 0; i < mono.size(); ++i)
        if (mono[i] != 0) deg = static_cast<int>(i);
    return deg;  // -1 for the zero polynomial
}
}  // namespace detail

/// Exact basis change of a polynomial given by ascending monomial
/// coefficients; the result is computed in rationals and cast to T last.
template <typename T>
std::vector<T> expand_polynomial(const BasisContext<T>& ctx, std::span<const Rational> mono_coeffs) {
    const int deg = detail::trimmed_degree(mono_coeffs);
    if (deg > ctx.order)
        throw std::invalid_argument("expand_polynomial: degree " + std::to_string(deg) +
                                    " exceeds truncation order " + std::to_string(ctx.order));
    std::vector<Rational> coeffs(static_cast<std::size_t>(ctx.order) + 1, Rational(0));
    for (int i = 0; i <= deg; ++i) {
        if (mono_coeffs[i] == 0) continue;
        for (int k = 0; k <= i; ++k) coeffs[k] += mono_coeffs[i] * ctx.to_bernoulli_exact(i, k);
    }
    return cast_vector<T>(coeffs);
}

/// Best L2 approximation of f on [0, 1]: solves gram * a = <f, B_j> with the
/// inner products done by adaptive quadrature.
inline std::vector<double> project(const BasisContext<double>& ctx,
                                   const std::function<double(double)>& f,
                                   double rel_tol = 1e-14) {
    std::vector<double> moments(static_cast<std::size_t>(ctx.order) + 1);
    for (int j = 0; j <= ctx.order; ++j)
        moments[j] = adaptive_gauss_legendre(
            [&](double x) { return f(x) * eval_basis_component(ctx, j, x); }, 0.0, 1.0, rel_tol);
    return solve_dense(ctx.gram, moments);
}

}  // namespace bopmat
