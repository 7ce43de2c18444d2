#pragma once

#include "bopmat/rational.hpp"
#include "bopmat/solver.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bopmat {

struct ProblemFileError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ProblemFile {
    IvpProblem problem;
    int n = 0;
    int rms_points = 101;
};

namespace detail {

inline std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

inline std::vector<Rational> parse_number_list(const std::string& text, const std::string& where) {
    std::vector<Rational> values;
    std::istringstream stream(text);
    std::string token;
    while (stream >> token) {
        try {
            values.push_back(parse_rational(token));
        } catch (const std::invalid_argument& e) {
            throw ProblemFileError(where + ": " + e.what());
        }
    }
    if (values.empty()) throw ProblemFileError(where + ": expected at least one number");
    return values;
}

inline long parse_integer(const std::string& text, const std::string& where) {
    const std::string t = trim(text);
    try {
        std::size_t used = 0;
        const long value = std::stol(t, &used);
        if (used != t.size()) throw std::invalid_argument(t);
        return value;
    } catch (const std::exception&) {
        throw ProblemFileError(where + ": expected an integer, got '" + t + "'");
    }
}

}  // namespace detail

/// Plain key = value format, one key per line, '#' comments. Keys:
///
///   order            = 1 | 2
///   coeff_poly_<k>   = ascending monomial coefficients of p_k, k = 0..order
///   quad_poly        = coefficients of q (optional)
///   rhs_poly         = coefficients of r
///   init_conditions  = u(0) [u'(0)]
///   n                = truncation order
///   rms_points       = grid size for error reporting (optional, default 101)
///
/// Numbers may be integers, fractions like 3/4, or decimals; all are read
/// exactly. Malformed input raises ProblemFileError naming the line.
inline ProblemFile parse_problem_file(std::istream& in, std::string_view filename) {
    std::map<std::string, std::pair<int, std::string>> fields;  // key -> (line, raw value)
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string stripped = detail::trim(line);
        if (stripped.empty()) continue;
        const std::string where = std::string(filename) + ":" + std::to_string(line_no);
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ProblemFileError(where + ": expected 'key = value', got '" + stripped + "'");
        std::string key = detail::trim(stripped.substr(0, eq));
        std::transform(key.begin(), key.end(), key.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        const std::string value = detail::trim(stripped.substr(eq + 1));
        if (key.empty()) throw ProblemFileError(where + ": empty key");
        if (fields.count(key)) throw ProblemFileError(where + ": duplicate key '" + key + "'");
        fields[key] = {line_no, value};
    }

    auto where_of = [&](const std::string& key) {
        return std::string(filename) + ":" + std::to_string(fields.at(key).first) + ": field '" + key + "'";
    };
    auto require = [&](const std::string& key) -> const std::string& {
        if (!fields.count(key))
            throw ProblemFileError(std::string(filename) + ": missing required key '" + key + "'");
        return fields.at(key).second;
    };

    ProblemFile out;
    const long order = detail::parse_integer(require("order"), std::string(filename) + ": field 'order'");
    if (order != 1 && order != 2)
        throw ProblemFileError(where_of("order") + ": order must be 1 or 2");
    out.problem.order = static_cast<int>(order);

    for (int k = 0; k <= out.problem.order; ++k) {
        const std::string key = "coeff_poly_" + std::to_string(k);
        out.problem.coeff_polys.push_back(detail::parse_number_list(require(key), where_of(key)));
    }
    for (const auto& [key, value] : fields)
        if (key.rfind("coeff_poly_", 0) == 0) {
            const int k = static_cast<int>(detail::parse_integer(key.substr(11), where_of(key)));
            if (k < 0 || k > out.problem.order)
                throw ProblemFileError(where_of(key) + ": derivative level out of range for order " +
                                       std::to_string(out.problem.order));
        }

    if (fields.count("quad_poly"))
        out.problem.quad_poly = detail::parse_number_list(fields.at("quad_poly").second, where_of("quad_poly"));
    out.problem.rhs_poly = detail::parse_number_list(require("rhs_poly"), where_of("rhs_poly"));
    out.problem.init_conditions =
        detail::parse_number_list(require("init_conditions"), where_of("init_conditions"));
    if (out.problem.init_conditions.size() != static_cast<std::size_t>(out.problem.order))
        throw ProblemFileError(where_of("init_conditions") + ": expected " + std::to_string(order) +
                               " value(s), got " + std::to_string(out.problem.init_conditions.size()));

    const long n = detail::parse_integer(require("n"), std::string(filename) + ": field 'n'");
    if (n < 1 || n > 20) throw ProblemFileError(where_of("n") + ": n must lie in [1, 20]");
    out.n = static_cast<int>(n);

    if (fields.count("rms_points")) {
        const long m = detail::parse_integer(fields.at("rms_points").second, where_of("rms_points"));
        if (m < 2) throw ProblemFileError(where_of("rms_points") + ": need at least 2 points");
        out.rms_points = static_cast<int>(m);
    }

    static const std::vector<std::string> known{"order", "quad_poly", "rhs_poly", "init_conditions",
                                                "n",     "rms_points"};
    for (const auto& [key, value] : fields) {
        if (key.rfind("coeff_poly_", 0) == 0) continue;
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ProblemFileError(std::string(filename) + ":" + std::to_string(value.first) +
                                   ": unknown key '" + key + "'");
    }

    try {
        out.problem.validate_for_order(out.n);
    } catch (const std::invalid_argument& e) {
        throw ProblemFileError(std::string(filename) + ": " + e.what());
    }
    return out;
}

inline ProblemFile load_problem_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ProblemFileError("cannot open problem file '" + path.string() + "'");
    return parse_problem_file(in, path.string());
}

}  // namespace bopmat
