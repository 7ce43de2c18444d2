#pragma once

#include "bopmat/bernoulli.hpp"
#include "bopmat/matrix.hpp"
#include "bopmat/rational.hpp"

#include <span>
#include <stdexcept>
#include <vector>

namespace bopmat {

/// Coefficient-space differentiation: subdiagonal entries (i, i-1) = i, so
/// d/dx of a^T B(x) is (D^T a)^T B(x) exactly as a polynomial identity.
inline Matrix<Rational> derivative_matrix_exact(int n) {
    if (n < 0) throw std::invalid_argument("derivative_matrix_exact: negative order");
    Matrix<Rational> d(n + 1, n + 1);
    for (int i = 1; i <= n; ++i) d(i, i - 1) = Rational(i);
    return d;
}

struct IntegrationBuild {
    Matrix<Rational> matrix;                // rows 0..N-1 exact, row N projected
    std::vector<Rational> tail_projection;  // best-L2 coefficients of the order-(N+1) tail
    Rational tail_residual_sq;              // squared L2 norm of the projection residual
};

/// Antiderivative operational matrix. Row k < N encodes
/// int_0^x B_k = (B_{k+1}(x) - B_{k+1})/(k+1) exactly; the overflow row
/// projects (B_{N+1}(x) - B_{N+1})/(N+1) onto the basis in closed form
/// (no quadrature), via the Gram solve for the tail coefficients.
inline IntegrationBuild integration_matrix_exact(const BernoulliTable& table, int n,
                                                 const Matrix<Rational>& to_monomial,
                                                 const Matrix<Rational>& to_bernoulli,
                                                 const Matrix<Rational>& gram) {
    if (n < 0) throw std::invalid_argument("integration_matrix_exact: negative order");
    if (table.count() < static_cast<std::size_t>(2 * n) + 3)
        throw std::invalid_argument("integration_matrix_exact: table must reach B_{2N+2}");

    // Monomial-coefficient rows of the antiderivatives.
    Matrix<Rational> u(n + 1, n + 1);
    for (int k = 0; k + 1 <= n; ++k) {
        const int i = k + 1;
        for (int j = 1; j <= i; ++j) u(k, j) = rational(binomial(i, j), BigInt(i)) * table.at(i - j);
    }

    // Tail moments: <tail, B_0> = -B_{N+1}/(N+1); for j >= 1 the closed-form
    // product integral applies with indices N+1 and j.
    std::vector<Rational> moments(static_cast<std::size_t>(n) + 1);
    moments[0] = -table.at(n + 1) / Rational(n + 1);
    for (int j = 1; j <= n; ++j) {
        Rational value = rational(factorial(n + 1) * factorial(j), factorial(n + 1 + j)) *
                         table.at(n + 1 + j) / Rational(n + 1);
        moments[j] = (n % 2 == 0) ? value : -value;
    }

    std::vector<Rational> tail;
    try {
        tail = solve_dense(gram, moments);
    } catch (const SingularMatrixError&) {
        throw std::logic_error("integration_matrix_exact: Gram matrix solve failed");
    }

    // Overflow row in monomial coefficients, then the whole stack back to the basis.
    for (int j = 0; j <= n; ++j) {
        Rational acc(0);
        for (int k = 0; k <= n; ++k) acc += tail[k] * to_monomial(k, j);
        u(n, j) = acc;
    }
    Matrix<Rational> integ = u * to_bernoulli;

    // ||tail residual||^2 = <p, p> - tail^T moments  with  p the exact tail;
    // <p, p> = (int B_{N+1}^2 + B_{N+1}^2) / (N+1)^2.
    Rational bb = rational(factorial(n + 1) * factorial(n + 1), factorial(2 * n + 2)) * table.at(2 * n + 2);
    if (n % 2 == 1) bb = -bb;
    const Rational tail_sq = (bb + table.at(n + 1) * table.at(n + 1)) / Rational((n + 1) * (n + 1));
    Rational residual_sq = tail_sq;
    for (int j = 0; j <= n; ++j) residual_sq -= tail[j] * moments[j];

    return IntegrationBuild{std::move(integ), std::move(tail), std::move(residual_sq)};
}

inline IntegrationBuild integration_matrix_exact(const BernoulliTable& table, int n) {
    return integration_matrix_exact(table, n, bernoulli_to_monomial_matrix(table, n),
                                    monomial_to_bernoulli_matrix(table, n), gram_matrix(table, n));
}

/// Derivative and integration matrices for one context, exact and converted.
/// Immutable after construction; safe to share read-only.
template <typename T>
struct OperationalSet {
    int order = 0;
    Matrix<Rational> derivative_exact;
    Matrix<Rational> integration_exact;
    std::vector<Rational> tail_projection_exact;
    Rational tail_residual_sq;
    Matrix<T> derivative;
    Matrix<T> integration;
    std::vector<T> tail_projection;

    /// L2 norm of the overflow-row projection residual (diagnostic only; the
    /// construction does not assert a bound on it).
    double tail_residual_l2() const { return std::sqrt(to_double(tail_residual_sq)); }
};

template <typename T>
OperationalSet<T> make_operational_set(const BasisContext<T>& ctx) {
    OperationalSet<T> ops;
    ops.order = ctx.order;
    ops.derivative_exact = derivative_matrix_exact(ctx.order);
    auto build = integration_matrix_exact(ctx.table, ctx.order, ctx.to_monomial_exact,
                                          ctx.to_bernoulli_exact, ctx.gram_exact);
    ops.integration_exact = std::move(build.matrix);
    ops.tail_projection_exact = std::move(build.tail_projection);
    ops.tail_residual_sq = std::move(build.tail_residual_sq);
    ops.derivative = cast_matrix<T>(ops.derivative_exact);
    ops.integration = cast_matrix<T>(ops.integration_exact);
    ops.tail_projection = cast_vector<T>(ops.tail_projection_exact);
    return ops;
}

template <typename T>
OperationalSet<Rational> exact_operational(const OperationalSet<T>& ops) {
    return OperationalSet<Rational>{ops.order,
                                    ops.derivative_exact,
                                    ops.integration_exact,
                                    ops.tail_projection_exact,
                                    ops.tail_residual_sq,
                                    ops.derivative_exact,
                                    ops.integration_exact,
                                    ops.tail_projection_exact};
}

/// Multiplication by the polynomial c^T B(x) as a coefficient-space operator:
/// the product's monomial coefficients form an upper-triangular Toeplitz
/// block, which silently drops every monomial of degree above N. The result
/// is therefore exact precisely when the degree sum stays within N.
template <typename T>
Matrix<T> product_matrix(const BasisContext<T>& ctx, std::span<const T> coeffs) {
    const std::size_t n1 = static_cast<std::size_t>(ctx.order) + 1;
    if (coeffs.size() != n1)
        throw std::invalid_argument("product_matrix: coefficient vector length mismatch");
    const std::vector<T> mono = ctx.to_monomial.transpose_times(coeffs);
    Matrix<T> toeplitz(n1, n1);
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = i; j < n1; ++j) toeplitz(i, j) = mono[j - i];
    return ctx.to_monomial * toeplitz * ctx.to_bernoulli;
}

}  // namespace bopmat
