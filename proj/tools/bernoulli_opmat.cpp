// Benchmark and problem-file front end for the Bernoulli operational-matrix
// spectral solver. Exit codes: 0 success, 2 bad input, 3 solver failure.

#include "bopmat/bopmat.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

constexpr int kExitBadInput = 2;
constexpr int kExitSolverFailure = 3;

struct RunArgs {
    std::string target;
    int n = -1;
    int rms_points = -1;
    std::string out_csv;
    bool exact_mode = false;
};

struct CoeffArgs {
    std::string benchmark;
    std::string n_list = "4,6,8,10";
    std::string out_csv;
};

std::vector<int> parse_n_list(const std::string& text) {
    std::vector<int> out;
    std::string token;
    std::istringstream stream(text);
    while (std::getline(stream, token, ',')) {
        try {
            out.push_back(std::stoi(token));
        } catch (const std::exception&) {
            throw std::invalid_argument("bad --n-list entry '" + token + "'");
        }
    }
    if (out.empty()) throw std::invalid_argument("--n-list must name at least one order");
    return out;
}

void write_csv_file(const std::string& path, const std::vector<bopmat::CsvRow>& rows) {
    std::ofstream out(path, std::ios::binary);  // LF line endings
    if (!out) throw std::runtime_error("cannot open CSV output '" + path + "'");
    bopmat::write_csv(out, rows);
}

void print_user_problem_values(const bopmat::SpectralSolution<double>& sol, int decimals) {
    std::cout << "      x    u_N(x)\n";
    for (const double x : bopmat::table_points())
        std::cout << "    " << bopmat::format_fixed(x, 1) << "  "
                  << bopmat::format_fixed(bopmat::evaluate_solution(sol, x), decimals) << "\n";
    std::cout << "residual max-norm: " << bopmat::format_sci(sol.residual_norm) << "\n";
}

int run_exact_mode(const bopmat::IvpProblem& problem, int n, const bopmat::Benchmark* bench,
                   int rms_points, const std::string& out_csv, int decimals) {
    if (!problem.is_linear()) {
        std::cerr << "error: --exact-mode supports linear problems only\n";
        return kExitBadInput;
    }
    const auto sol = bopmat::solve_ivp<bopmat::Rational>(problem, n);
    const auto residual = bopmat::assemble_residual<bopmat::Rational>(
        problem, sol.ctx, sol.ops, std::span<const bopmat::Rational>(sol.highest_coeffs));
    bopmat::Rational worst(0);
    for (const auto& r : residual)
        if (abs(r) > worst) worst = abs(r);
    std::cout << "exact mode (rational arithmetic), N = " << n << "\n";
    std::cout << "residual max-norm: " << bopmat::to_string(worst)
              << (worst == 0 ? " (identically zero)" : "") << "\n";
    std::cout << "coefficients of the highest derivative:\n";
    for (std::size_t i = 0; i < sol.highest_coeffs.size(); ++i)
        std::cout << "  a_" << i << " = " << bopmat::to_string(sol.highest_coeffs[i]) << "\n";

    std::cout << "      x    u_N(x)\n";
    for (int tenths = 0; tenths <= 10; tenths += 2) {
        const bopmat::Rational x = bopmat::rational(tenths, 10);
        const double value = bopmat::to_double(bopmat::evaluate_solution(sol, x));
        std::cout << "    " << bopmat::format_fixed(tenths / 10.0, 1) << "  "
                  << bopmat::format_fixed(value, decimals) << "\n";
    }

    if (!out_csv.empty() || bench) {
        // reuse the double pipeline for grid output and RMS
        const auto dsol = bopmat::solve_ivp<double>(problem, n);
        if (bench) {
            const auto report = bopmat::make_report(*bench, dsol, rms_points);
            std::cout << "RMS over " << rms_points << " points: " << bopmat::format_sci(report.rms)
                      << "\n";
        }
        if (!out_csv.empty()) {
            const auto rows =
                bopmat::csv_rows(dsol, bench ? bench->exact : std::function<double(double)>{}, rms_points);
            write_csv_file(out_csv, rows);
        }
    }
    return 0;
}

int cmd_run(const RunArgs& args) {
    const int decimals = bopmat::table_decimals_from_env();
    const bopmat::Benchmark* bench = bopmat::find_benchmark(args.target);
    bopmat::IvpProblem problem;
    int n = args.n;
    int rms_points = args.rms_points;

    if (bench) {
        problem = bench->problem;
        if (n < 0) n = 10;
        if (rms_points < 0) rms_points = 101;
    } else {
        if (!std::filesystem::exists(args.target)) {
            std::cerr << "error: '" << args.target
                      << "' is neither a benchmark name nor a problem file (see 'list')\n";
            return kExitBadInput;
        }
        const auto pf = bopmat::load_problem_file(args.target);
        problem = pf.problem;
        if (n < 0) n = pf.n;
        if (rms_points < 0) rms_points = pf.rms_points;
    }

    if (args.exact_mode) return run_exact_mode(problem, n, bench, rms_points, args.out_csv, decimals);

    if (bench) {
        if (n < 2 || n > 20) {
            std::cerr << "error: benchmark truncation order must lie in [2, 20]\n";
            return kExitBadInput;
        }
        const auto sol = bopmat::solve_ivp<double>(problem, n);
        const auto report = bopmat::make_report(*bench, sol, rms_points);
        std::cout << bopmat::format_report_table(report, decimals);
        if (!args.out_csv.empty())
            write_csv_file(args.out_csv, bopmat::csv_rows(sol, bench->exact, rms_points));
    } else {
        const auto sol = bopmat::solve_ivp<double>(problem, n);
        print_user_problem_values(sol, decimals);
        if (!args.out_csv.empty())
            write_csv_file(args.out_csv,
                           bopmat::csv_rows(sol, std::function<double(double)>{}, rms_points));
    }
    return 0;
}

int cmd_coeffs(const CoeffArgs& args) {
    const bopmat::Benchmark* bench = bopmat::find_benchmark(args.benchmark);
    if (!bench) {
        std::cerr << "error: unknown benchmark '" << args.benchmark << "' (see 'list')\n";
        return kExitBadInput;
    }
    const std::vector<int> orders = parse_n_list(args.n_list);
    std::ostringstream csv;
    csv << "N,i,abs_coeff\n";
    for (const int n : orders) {
        if (n < 2 || n > 20) {
            std::cerr << "error: benchmark truncation order must lie in [2, 20]\n";
            return kExitBadInput;
        }
        const auto sol = bopmat::solve_ivp<double>(bench->problem, n);
        for (std::size_t i = 0; i < sol.highest_coeffs.size(); ++i)
            csv << n << ',' << i << ',' << bopmat::format_csv_value(std::abs(sol.highest_coeffs[i]))
                << "\n";
    }
    std::cout << csv.str();
    if (!args.out_csv.empty()) {
        std::ofstream out(args.out_csv, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open CSV output '" + args.out_csv + "'");
        out << csv.str();
    }
    return 0;
}

int cmd_list() {
    for (const auto& b : bopmat::benchmarks())
        std::cout << b.name << "  -  " << b.description << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral Galerkin benchmarks in the Bernoulli polynomial basis"};
    app.require_subcommand(1);

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "Solve a benchmark or a problem file and print the error table");
    run->add_option("target", run_args.target, "benchmark name or problem file path")->required();
    run->add_option("--n", run_args.n, "truncation order N");
    run->add_option("--rms-points", run_args.rms_points, "uniform grid size for RMS/CSV output");
    run->add_option("--out-csv", run_args.out_csv, "write x,approx,exact,abs_error rows to this file");
    run->add_flag("--exact-mode", run_args.exact_mode, "solve in exact rational arithmetic (linear problems)");

    CoeffArgs coeff_args;
    auto* coeffs = app.add_subcommand("coeffs", "Emit N,i,abs_coeff rows for coefficient-decay plots");
    coeffs->add_option("benchmark", coeff_args.benchmark, "benchmark name")->required();
    coeffs->add_option("--n-list", coeff_args.n_list, "comma-separated truncation orders");
    coeffs->add_option("--out-csv", coeff_args.out_csv, "also write the rows to this file");

    auto* list = app.add_subcommand("list", "List the registered benchmarks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(run_args);
        if (coeffs->parsed()) return cmd_coeffs(coeff_args);
        if (list->parsed()) return cmd_list();
    } catch (const bopmat::ProblemFileError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const bopmat::SolverError& e) {
        std::cerr << "solver failure: " << e.what() << " (residual max-norm "
                  << bopmat::format_sci(e.residual_norm) << ")\n";
        return kExitSolverFailure;
    } catch (const bopmat::QuadratureError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitSolverFailure;
    }
    return 0;
}
