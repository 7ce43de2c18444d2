#pragma once

#include "bopmat/benchmarks.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace bopmat {

/// Table decimals: BERNOULLI_OPMAT_PRECISION overrides the default of 10.
inline int table_decimals_from_env() {
    const char* env = std::getenv("BERNOULLI_OPMAT_PRECISION");
    if (!env) return 10;
    const int value = std::atoi(env);
    return (value >= 1 && value <= 17) ? value : 10;
}

inline std::string format_fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

inline std::string format_sci(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4e", v);
    return buf;
}

/// 15 significant digits, the CSV emission precision.
inline std::string format_csv_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

inline std::string format_report_table(const SolveReport& report, int decimals) {
    std::ostringstream out;
    out << "benchmark: " << report.name << "  (N = " << report.n << ")\n";
    out << "      x  " << "  approx" << std::string(decimals, ' ') << "exact" << std::string(decimals, ' ')
        << "abs error\n";
    for (const auto& p : report.points) {
        out << "    " << format_fixed(p.x, 1) << "  " << format_fixed(p.approx, decimals) << "  "
            << format_fixed(p.exact, decimals) << "  " << format_sci(p.abs_error) << "\n";
    }
    out << "RMS over " << report.rms_points << " points: " << format_sci(report.rms) << "\n";
    out << "newton iterations: " << report.newton_iterations << "\n";
    out << "residual max-norm: " << format_sci(report.residual_norm) << "\n";
    return out.str();
}

struct CsvRow {
    double x = 0.0;
    double approx = 0.0;
    double exact = 0.0;      // NaN when no reference solution exists
    double abs_error = 0.0;  // NaN when no reference solution exists
};

/// Rows on the uniform error grid. exact may be empty for user problems; the
/// columns are then emitted as nan to keep the schema stable.
inline std::vector<CsvRow> csv_rows(const SpectralSolution<double>& solution,
                                    const std::function<double(double)>& exact, int grid_points) {
    std::vector<CsvRow> rows;
    rows.reserve(grid_points);
    for (int k = 0; k < grid_points; ++k) {
        const double x = static_cast<double>(k) / (grid_points - 1);
        const double approx = evaluate_solution(solution, x);
        if (exact) {
            const double ref = exact(x);
            rows.push_back({x, approx, ref, std::abs(approx - ref)});
        } else {
            const double nan = std::numeric_limits<double>::quiet_NaN();
            rows.push_back({x, approx, nan, nan});
        }
    }
    return rows;
}

/// Header + LF rows at 15 significant digits.
inline void write_csv(std::ostream& out, std::span<const CsvRow> rows) {
    out << "x,approx,exact,abs_error\n";
    for (const auto& r : rows)
        out << format_csv_value(r.x) << ',' << format_csv_value(r.approx) << ','
            << format_csv_value(r.exact) << ',' << format_csv_value(r.abs_error) << "\n";
}

}  // namespace bopmat
