#pragma once

#include "bopmat/quadrature.hpp"
#include "bopmat/solver.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace bopmat {

struct Benchmark {
    std::string name;
    std::string description;
    IvpProblem problem;
    std::function<double(double)> exact;
};

struct ReportPoint {
    double x = 0.0;
    double approx = 0.0;
    double exact = 0.0;
    double abs_error = 0.0;
};

struct SolveReport {
    std::string name;
    int n = 0;
    int rms_points = 0;
    std::vector<ReportPoint> points;  // the six table abscissae
    double rms = 0.0;
    int newton_iterations = 0;
    double residual_norm = 0.0;
};

/// J_0(x): series sum_{i} (-1)^i x^{2i} / (4^i (i!)^2), summed until the term
/// drops below 1e-18.
inline double bessel_j0_series(double x) {
    double term = 1.0, sum = 1.0;
    const double x_sq = x * x;
    for (int i = 1; std::abs(term) >= 1e-18; ++i) {
        term *= -x_sq / (4.0 * i * i);
        sum += term;
    }
    return sum;
}

inline double riccati_tanh_exact(double x) {
    const double root2 = std::sqrt(2.0);
    return 1.0 + root2 * std::tanh(root2 * x + 0.5 * std::log((root2 - 1.0) / (root2 + 1.0)));
}

/// x + e^{-x^2} / (1 + int_0^x e^{-t^2} dt), the integral by adaptive quadrature.
inline double riccati_erf_exact(double x) {
    const double integral =
        adaptive_gauss_legendre([](double t) { return std::exp(-t * t); }, 0.0, x, 1e-14);
    return x + std::exp(-x * x) / (1.0 + integral);
}

inline const std::array<double, 6>& table_points() {
    static const std::array<double, 6> points{0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
    return points;
}

inline const std::vector<Benchmark>& benchmarks() {
    static const std::vector<Benchmark> registry = [] {
        std::vector<Benchmark> list;

        {
            // x u'' + u' + x u = 0, u(0) = 1, u'(0) = 0.
            IvpProblem p;
            p.order = 2;
            p.coeff_polys = {{rational(0), rational(1)}, {rational(1)}, {rational(0), rational(1)}};
            p.rhs_poly = {rational(0)};
            p.init_conditions = {rational(1), rational(0)};
            list.push_back({"bessel0", "Bessel equation of order zero", std::move(p),
                            [](double x) { return bessel_j0_series(x); }});
        }
        {
            // x u'' + 8 u' + x^2 u = x^6 - x^5 + 44 x^3 - 30 x^2, u(0) = u'(0) = 0.
            IvpProblem p;
            p.order = 2;
            p.coeff_polys = {{rational(0), rational(0), rational(1)},
                             {rational(8)},
                             {rational(0), rational(1)}};
            p.rhs_poly = {rational(0), rational(0), rational(-30), rational(44),
                          rational(0), rational(-1), rational(1)};
            p.init_conditions = {rational(0), rational(0)};
            list.push_back({"lane-emden", "Lane-Emden type equation with exact solution x^4 - x^3",
                            std::move(p), [](double x) { return x * x * x * (x - 1.0); }});
        }
        {
            // u' = 2u - u^2 + 1, u(0) = 0  ==>  u' - 2u + u^2 = 1.
            IvpProblem p;
            p.order = 1;
            p.coeff_polys = {{rational(-2)}, {rational(1)}};
            p.quad_poly = std::vector<Rational>{rational(1)};
            p.rhs_poly = {rational(1)};
            p.init_conditions = {rational(0)};
            list.push_back({"riccati-tanh", "Riccati equation with tanh closed form", std::move(p),
                            [](double x) { return riccati_tanh_exact(x); }});
        }
        {
            // u' = 1 + x^2 - u^2, u(0) = 1  ==>  u' + u^2 = 1 + x^2.
            IvpProblem p;
            p.order = 1;
            p.coeff_polys = {{rational(0)}, {rational(1)}};
            p.quad_poly = std::vector<Rational>{rational(1)};
            p.rhs_poly = {rational(1), rational(0), rational(1)};
            p.init_conditions = {rational(1)};
            list.push_back({"riccati-erf", "Riccati equation with Gaussian-integral closed form",
                            std::move(p), [](double x) { return riccati_erf_exact(x); }});
        }
        return list;
    }();
    return registry;
}

inline const Benchmark* find_benchmark(std::string_view name) {
    for (const auto& b : benchmarks())
        if (b.name == name) return &b;
    return nullptr;
}

/// Root mean square of u - u_N over a uniform grid including both endpoints.
inline double rms_error(const SpectralSolution<double>& solution,
                        const std::function<double(double)>& exact, int grid_points) {
    if (grid_points < 2) throw std::invalid_argument("rms_error: need at least 2 grid points");
    double acc = 0.0;
    for (int k = 0; k < grid_points; ++k) {
        const double x = static_cast<double>(k) / (grid_points - 1);
        const double diff = exact(x) - evaluate_solution(solution, x);
        acc += diff * diff;
    }
    return std::sqrt(acc / grid_points);
}

inline SolveReport make_report(const Benchmark& bench, const SpectralSolution<double>& solution,
                               int rms_points) {
    SolveReport report;
    report.name = bench.name;
    report.n = solution.n;
    report.rms_points = rms_points;
    for (const double x : table_points()) {
        const double approx = evaluate_solution(solution, x);
        const double exact = bench.exact(x);
        report.points.push_back({x, approx, exact, std::abs(approx - exact)});
    }
    report.rms = rms_error(solution, bench.exact, rms_points);
    report.newton_iterations = solution.newton_iterations;
    report.residual_norm = solution.residual_norm;
    return report;
}

inline SolveReport run_benchmark(std::string_view name, int n, int rms_points = 101) {
    const Benchmark* bench = find_benchmark(name);
    if (!bench) throw std::invalid_argument("unknown benchmark '" + std::string(name) + "'");
    if (n < 2 || n > 20)
        throw std::invalid_argument("benchmark truncation order must lie in [2, 20]");
    const auto solution = solve_ivp<double>(bench->problem, n);
    return make_report(*bench, solution, rms_points);
}

}  // namespace bopmat
