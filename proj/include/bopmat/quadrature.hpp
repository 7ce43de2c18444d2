#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bopmat {

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Gauss-Legendre rule on [-1, 1]; nodes found by Newton iteration on P_n.
class GaussLegendre {
public:
    explicit GaussLegendre(int n) {
        if (n < 1) throw std::invalid_argument("GaussLegendre: order must be positive");
        nodes_.resize(n);
        weights_.resize(n);
        const int half = (n + 1) / 2;
        for (int i = 0; i < half; ++i) {
            double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            double deriv = 0.0;
            for (int iter = 0; iter < 100; ++iter) {
                double p = 1.0, p_prev = 0.0;
                for (int j = 0; j < n; ++j) {
                    const double p_prev2 = p_prev;
                    p_prev = p;
                    p = ((2 * j + 1) * x * p_prev - j * p_prev2) / (j + 1);
                }
                deriv = n * (x * p - p_prev) / (x * x - 1.0);
                const double dx = p / deriv;
                x -= dx;
                if (std::abs(dx) < 1e-15) break;
            }
            nodes_[i] = -x;
            nodes_[n - 1 - i] = x;
            weights_[i] = weights_[n - 1 - i] = 2.0 / ((1.0 - x * x) * deriv * deriv);
        }
    }

    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }

    double integrate(const std::function<double(double)>& f, double a, double b) const {
        const double mid = 0.5 * (a + b);
        const double halfwidth = 0.5 * (b - a);
        double acc = 0.0;
        for (std::size_t i = 0; i < nodes_.size(); ++i)
            acc += weights_[i] * f(mid + halfwidth * nodes_[i]);
        return acc * halfwidth;
    }

private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

namespace detail {
inline const GaussLegendre& panel_rule() {
    static const GaussLegendre rule(15);
    return rule;
}
}  // namespace detail

/// Adaptive bisection with a 15-node panel rule. Accepts a panel when the
/// whole-vs-halves disagreement drops under max(rel_tol*|I|, abs_tol);
/// exceeding max_depth raises QuadratureError with the offending interval.
inline double adaptive_gauss_legendre(const std::function<double(double)>& f, double a, double b,
                                      double rel_tol = 1e-14, double abs_tol = 1e-16,
                                      int max_depth = 40) {
    if (a == b) return 0.0;
    const auto& rule = detail::panel_rule();
    const std::function<double(double, double, double, int)> refine =
        [&](double lo, double hi, double whole, int depth) -> double {
        const double mid = 0.5 * (lo + hi);
        const double left = rule.integrate(f, lo, mid);
        const double right = rule.integrate(f, mid, hi);
        const double err = std::abs(left + right - whole);
        if (err <= std::max(rel_tol * std::abs(left + right), abs_tol)) return left + right;
        if (depth >= max_depth)
            throw QuadratureError("adaptive quadrature did not converge on [" + std::to_string(lo) +
                                  ", " + std::to_string(hi) + "]; panel disagreement " +
                                  std::to_string(err));
        return refine(lo, mid, left, depth + 1) + refine(mid, hi, right, depth + 1);
    };
    return refine(a, b, rule.integrate(f, a, b), 0);
}

}  // namespace bopmat
