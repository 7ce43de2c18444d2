#pragma once

#include "bopmat/bernoulli.hpp"
#include "bopmat/matrix.hpp"
#include "bopmat/operational.hpp"
#include "bopmat/rational.hpp"

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace bopmat {

struct SolverError : std::runtime_error {
    SolverError(const std::string& what, double residual, int iterations)
        : std::runtime_error(what), residual_norm(residual), iterations(iterations) {}
    double residual_norm = 0.0;
    int iterations = 0;
};

/// Initial-value problem on [0, 1]:
///
///   sum_{k=0}^{m} p_k(x) u^{(k)}(x) + q(x) u(x)^2 = r(x),
///   u(0), ..., u^{(m-1)}(0) given,
///
/// with every polynomial stored as ascending exact monomial coefficients.
struct IvpProblem {
    int order = 1;                                    // m: 1 or 2
    std::vector<std::vector<Rational>> coeff_polys;   // p_0..p_m
    std::optional<std::vector<Rational>> quad_poly;   // q, absent for linear problems
    std::vector<Rational> rhs_poly;                   // r
    std::vector<Rational> init_conditions;            // u(0), u'(0), ...

    bool is_linear() const { return !quad_poly.has_value(); }

    int max_degree() const {
        int deg = -1;
        for (const auto& p : coeff_polys) deg = std::max(deg, detail::trimmed_degree(p));
        if (quad_poly) deg = std::max(deg, detail::trimmed_degree(*quad_poly));
        deg = std::max(deg, detail::trimmed_degree(rhs_poly));
        return deg;
    }

    void validate() const {
        if (order != 1 && order != 2)
            throw std::invalid_argument("IvpProblem: order must be 1 or 2");
        if (coeff_polys.size() != static_cast<std::size_t>(order) + 1)
            throw std::invalid_argument("IvpProblem: need one coefficient polynomial per derivative level 0.." +
                                        std::to_string(order));
        if (init_conditions.size() != static_cast<std::size_t>(order))
            throw std::invalid_argument("IvpProblem: need exactly " + std::to_string(order) +
                                        " initial condition(s)");
    }

    void validate_for_order(int n) const {
        validate();
        if (n < order)
            throw std::invalid_argument("IvpProblem: truncation order below equation order");
        if (max_degree() > n)
            throw std::invalid_argument("IvpProblem: polynomial degree " + std::to_string(max_degree()) +
                                        " exceeds truncation order " + std::to_string(n));
    }
};

struct SolveOptions {
    double residual_tol = 1e-12;   // max-norm certificate on the algebraic residual
    int max_newton_iterations = 50;
    double min_step = 1e-4;        // smallest accepted backtracking step
};

namespace detail {

/// Per-level coefficient vectors w_k of u^{(k)}: the highest level is the
/// unknown vector itself; each lower level gains one application of the
/// transposed integration matrix plus the expanded initial-condition
/// polynomial sum_i u^{(k+i)}(0) x^i / i!.
template <typename T>
std::vector<std::vector<T>> level_vectors(const IvpProblem& problem, const BasisContext<T>& ctx,
                                          const OperationalSet<T>& ops, std::span<const T> a) {
    const int m = problem.order;
    std::vector<std::vector<T>> levels(static_cast<std::size_t>(m) + 1);
    levels[m].assign(a.begin(), a.end());
    std::vector<T> integrated(a.begin(), a.end());
    for (int k = m - 1; k >= 0; --k) {
        integrated = ops.integration.transpose_times(integrated);
        std::vector<Rational> init_poly(static_cast<std::size_t>(m - k), Rational(0));
        for (int i = 0; i + k < m; ++i)
            init_poly[i] = problem.init_conditions[k + i] / Rational(factorial(i));
        const std::vector<T> expanded = expand_polynomial(ctx, init_poly);
        levels[k] = integrated;
        for (std::size_t j = 0; j < levels[k].size(); ++j) levels[k][j] += expanded[j];
    }
    return levels;
}

template <typename T>
bool is_zero_poly(const std::vector<T>& p) {
    for (const auto& c : p)
        if (c != T(0)) return false;
    return true;
}

}  // namespace detail

/// Galerkin residual of the problem in coefficient space. Each known
/// polynomial multiplies through the product matrix of the level vector it
/// acts on; the quadratic term nests a second product matrix around the
/// squared level-0 expansion; the right-hand side expansion is subtracted.
template <typename T>
std::vector<T> assemble_residual(const IvpProblem& problem, const BasisContext<T>& ctx,
                                 const OperationalSet<T>& ops, std::span<const T> a) {
    problem.validate_for_order(ctx.order);
    if (a.size() != static_cast<std::size_t>(ctx.order) + 1)
        throw std::invalid_argument("assemble_residual: coefficient vector length mismatch");

    const auto levels = detail::level_vectors(problem, ctx, ops, a);

    std::vector<T> residual(static_cast<std::size_t>(ctx.order) + 1, T(0));
    for (int k = 0; k <= problem.order; ++k) {
        if (detail::is_zero_poly(problem.coeff_polys[k])) continue;
        const std::vector<T> weight = expand_polynomial(ctx, problem.coeff_polys[k]);
        const std::vector<T> term = product_matrix(ctx, std::span<const T>(levels[k])).transpose_times(weight);
        for (std::size_t j = 0; j < residual.size(); ++j) residual[j] += term[j];
    }
    if (problem.quad_poly && !detail::is_zero_poly(*problem.quad_poly)) {
        const Matrix<T> u_prod = product_matrix(ctx, std::span<const T>(levels[0]));
        const std::vector<T> squared = u_prod.transpose_times(std::span<const T>(levels[0]));
        const std::vector<T> weight = expand_polynomial(ctx, *problem.quad_poly);
        const std::vector<T> term = product_matrix(ctx, std::span<const T>(squared)).transpose_times(weight);
        for (std::size_t j = 0; j < residual.size(); ++j) residual[j] += term[j];
    }
    const std::vector<T> rhs = expand_polynomial(ctx, problem.rhs_poly);
    for (std::size_t j = 0; j < residual.size(); ++j) residual[j] -= rhs[j];
    return residual;
}

/// Analytic Jacobian of the residual in the unknown vector, assembled from
/// the same product-matrix algebra. The bilinear u^2 term linearizes into the
/// two one-sided product-matrix factors, which coincide because polynomial
/// multiplication (and its degree-N truncation) is symmetric in the factors.
template <typename T>
Matrix<T> residual_jacobian(const IvpProblem& problem, const BasisContext<T>& ctx,
                            const OperationalSet<T>& ops, std::span<const T> a) {
    problem.validate_for_order(ctx.order);
    const std::size_t n1 = static_cast<std::size_t>(ctx.order) + 1;
    const Matrix<T> integ_t = ops.integration.transposed();

    Matrix<T> jac(n1, n1);
    Matrix<T> level_map = Matrix<T>::identity(n1);  // d w_k / d a = (I^T)^{m-k}
    for (int k = problem.order; k >= 0; --k) {
        if (!detail::is_zero_poly(problem.coeff_polys[k])) {
            const std::vector<T> weight = expand_polynomial(ctx, problem.coeff_polys[k]);
            jac += product_matrix(ctx, std::span<const T>(weight)).transposed() * level_map;
        }
        if (k > 0) level_map = integ_t * level_map;
    }
    if (problem.quad_poly && !detail::is_zero_poly(*problem.quad_poly)) {
        const auto levels = detail::level_vectors(problem, ctx, ops, a);
        const std::vector<T> weight = expand_polynomial(ctx, *problem.quad_poly);
        const Matrix<T> one_sided = product_matrix(ctx, std::span<const T>(levels[0])).transposed();
        jac += product_matrix(ctx, std::span<const T>(weight)).transposed() *
               ((one_sided + one_sided) * level_map);
    }
    return jac;
}

/// Solved problem: the unknown vector together with the whole reconstruction
/// pipeline (one coefficient vector per derivative level).
template <typename T>
struct SpectralSolution {
    IvpProblem problem;
    int n = 0;
    BasisContext<T> ctx;
    OperationalSet<T> ops;
    std::vector<T> highest_coeffs;             // expansion of u^{(m)}
    std::vector<std::vector<T>> level_coeffs;  // index = derivative level
    int newton_iterations = 0;
    double residual_norm = 0.0;
};

namespace detail {

/// The linear part of the Galerkin system solved exactly: G a = -R(0) with
/// both sides assembled in rational arithmetic.
inline std::vector<Rational> exact_linear_coeffs(const IvpProblem& problem,
                                                 const BasisContext<Rational>& ctx,
                                                 const OperationalSet<Rational>& ops) {
    const std::size_t n1 = static_cast<std::size_t>(ctx.order) + 1;
    const std::vector<Rational> zero(n1, Rational(0));
    const Matrix<Rational> gal = residual_jacobian(problem, ctx, ops, std::span<const Rational>(zero));
    std::vector<Rational> rhs = assemble_residual(problem, ctx, ops, std::span<const Rational>(zero));
    for (auto& v : rhs) v = -v;
    try {
        return solve_dense(gal, rhs);
    } catch (const SingularMatrixError&) {
        throw SolverError("Galerkin system is singular", 0.0, 0);
    }
}

template <typename T>
T l2_squared(const std::vector<T>& v) {
    T acc(0);
    for (const auto& x : v) acc += x * x;
    return acc;
}

}  // namespace detail

/// Reduces the IVP to the algebraic system R(a) = 0 and solves it. Linear
/// problems go through one exact dense solve; a quadratic term switches to
/// damped Newton (backtracking line search on ||R||_2, halving steps, analytic
/// Jacobian) warm-started from the solution with the quadratic term deleted.
/// Every returned solution carries the certificate ||R(a)||_inf <= residual_tol.
template <typename T = double>
SpectralSolution<T> solve_ivp(const IvpProblem& problem, int n, const SolveOptions& options = {}) {
    problem.validate_for_order(n);
    BasisContext<T> ctx = make_basis_context<T>(n);
    OperationalSet<T> ops = make_operational_set(ctx);
    const BasisContext<Rational> ectx = exact_context(ctx);
    const OperationalSet<Rational> eops = exact_operational(ops);

    std::vector<T> a;
    int iterations = 0;

    const bool has_quad = problem.quad_poly && !detail::is_zero_poly(*problem.quad_poly);
    if (!has_quad) {
        a = cast_vector<T>(detail::exact_linear_coeffs(problem, ectx, eops));
    } else {
        if constexpr (!std::is_floating_point_v<T>) {
            throw std::invalid_argument("solve_ivp: exact arithmetic supports linear problems only");
        } else {
            IvpProblem linearized = problem;
            linearized.quad_poly.reset();
            a = cast_vector<T>(detail::exact_linear_coeffs(linearized, ectx, eops));

            std::vector<T> residual = assemble_residual(problem, ctx, ops, std::span<const T>(a));
            T merit = detail::l2_squared(residual);
            while (max_abs(std::span<const T>(residual)) > options.residual_tol) {
                if (++iterations > options.max_newton_iterations)
                    throw SolverError("Newton did not converge in " +
                                          std::to_string(options.max_newton_iterations) + " iterations",
                                      max_abs(std::span<const T>(residual)), iterations - 1);
                const Matrix<T> jac = residual_jacobian(problem, ctx, ops, std::span<const T>(a));
                std::vector<T> negated = residual;
                for (auto& v : negated) v = -v;
                std::vector<T> direction;
                try {
                    direction = solve_dense(jac, negated);
                } catch (const SingularMatrixError&) {
                    throw SolverError("Newton Jacobian is singular",
                                      max_abs(std::span<const T>(residual)), iterations);
                }
                double step = 1.0;
                bool accepted = false;
                while (step >= options.min_step) {
                    std::vector<T> trial = a;
                    for (std::size_t j = 0; j < trial.size(); ++j) trial[j] += T(step) * direction[j];
                    std::vector<T> trial_residual =
                        assemble_residual(problem, ctx, ops, std::span<const T>(trial));
                    const T trial_merit = detail::l2_squared(trial_residual);
                    const double factor = 1.0 - 1e-4 * step;  // sufficient decrease on ||R||_2
                    if (trial_merit <= merit * T(factor * factor)) {
                        a = std::move(trial);
                        residual = std::move(trial_residual);
                        merit = trial_merit;
                        accepted = true;
                        break;
                    }
                    step *= 0.5;
                }
                if (!accepted)
                    throw SolverError("Newton line search stalled below minimum step",
                                      max_abs(std::span<const T>(residual)), iterations);
            }
        }
    }

    SpectralSolution<T> solution{problem, n,       std::move(ctx), std::move(ops), std::move(a), {},
                                 iterations, 0.0};
    solution.level_coeffs = detail::level_vectors(solution.problem, solution.ctx, solution.ops,
                                                  std::span<const T>(solution.highest_coeffs));
    const std::vector<T> residual = assemble_residual(solution.problem, solution.ctx, solution.ops,
                                                      std::span<const T>(solution.highest_coeffs));
    solution.residual_norm = max_abs(std::span<const T>(residual));
    if (solution.residual_norm > options.residual_tol)
        throw SolverError("solution residual exceeds tolerance", solution.residual_norm, iterations);
    return solution;
}

/// u^{(j)}(x) from the stored coefficient pipeline.
template <typename T>
T evaluate_solution(const SpectralSolution<T>& solution, const T& x, int derivative_level = 0) {
    if (derivative_level < 0 || derivative_level > solution.problem.order)
        throw std::invalid_argument("evaluate_solution: derivative level exceeds equation order");
    const std::vector<T> basis = eval_basis(solution.ctx, x);
    return dot(std::span<const T>(solution.level_coeffs[derivative_level]), std::span<const T>(basis));
}

}  // namespace bopmat
