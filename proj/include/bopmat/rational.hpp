#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace bopmat {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational scalar: always in lowest terms with positive denominator.
/// Dividing by zero throws.
using Rational = boost::multiprecision::cpp_rational;

/// Builds num/den in canonical form; den == 0 is an error.
inline Rational rational(const BigInt& num, const BigInt& den) {
    if (den == 0) throw std::domain_error("rational: zero denominator");
    return Rational(num) / Rational(den);
}

inline Rational rational(long long num, long long den = 1) {
    return rational(BigInt(num), BigInt(den));
}

inline double to_double(const Rational& v) { return v.convert_to<double>(); }

/// Bridges the exact construction pipeline to the solver scalar type.
template <typename T>
T scalar_cast(const Rational& v);

template <>
inline double scalar_cast<double>(const Rational& v) {
    return to_double(v);
}

template <>
inline Rational scalar_cast<Rational>(const Rational& v) {
    return v;
}

inline BigInt factorial(unsigned n) {
    BigInt f = 1;
    for (unsigned k = 2; k <= n; ++k) f *= k;
    return f;
}

inline BigInt binomial(unsigned n, unsigned k) {
    if (k > n) return BigInt(0);
    if (k > n - k) k = n - k;
    BigInt b = 1;
    for (unsigned i = 0; i < k; ++i) {
        b *= n - i;
        b /= i + 1;  // exact at every step: b is a running binomial
    }
    return b;
}

namespace detail {

inline Rational parse_decimal(std::string_view s, std::string_view whole) {
    auto bad = [&]() -> Rational {
        throw std::invalid_argument("not a valid number: '" + std::string(whole) + "'");
    };
    if (s.empty()) return bad();

    bool negative = false;
    std::size_t i = 0;
    if (s[i] == '+' || s[i] == '-') {
        negative = s[i] == '-';
        ++i;
    }

    BigInt mantissa = 0;
    long frac_digits = 0;
    bool any_digit = false, seen_dot = false;
    for (; i < s.size() && s[i] != 'e' && s[i] != 'E'; ++i) {
        if (s[i] == '.') {
            if (seen_dot) return bad();
            seen_dot = true;
        } else if (s[i] >= '0' && s[i] <= '9') {
            mantissa = mantissa * 10 + (s[i] - '0');
            if (seen_dot) ++frac_digits;
            any_digit = true;
        } else {
            return bad();
        }
    }
    if (!any_digit) return bad();

    long exponent = 0;
    if (i < s.size()) {  // exponent part
        ++i;
        bool exp_neg = false;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
            exp_neg = s[i] == '-';
            ++i;
        }
        if (i == s.size()) return bad();
        for (; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9') return bad();
            exponent = exponent * 10 + (s[i] - '0');
            if (exponent > 4096) return bad();
        }
        if (exp_neg) exponent = -exponent;
    }

    if (negative) mantissa = -mantissa;
    long shift = exponent - frac_digits;
    Rational value(mantissa);
    if (shift > 0) value *= Rational(boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(shift)));
    if (shift < 0) value /= Rational(boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(-shift)));
    return value;
}

}  // namespace detail

/// Parses "7", "-3/4", "0.25", "1.5e-3" exactly (decimals are powers of ten,
/// never binary floats).
inline Rational parse_rational(std::string_view text) {
    const auto first = text.find_first_not_of(" \t");
    if (first == std::string_view::npos)
        throw std::invalid_argument("not a valid number: empty field");
    const auto last = text.find_last_not_of(" \t");
    const std::string_view s = text.substr(first, last - first + 1);

    if (const auto slash = s.find('/'); slash != std::string_view::npos) {
        const Rational num = detail::parse_decimal(s.substr(0, slash), text);
        const Rational den = detail::parse_decimal(s.substr(slash + 1), text);
        if (den == 0) throw std::invalid_argument("not a valid number: zero denominator in '" + std::string(text) + "'");
        return num / den;
    }
    return detail::parse_decimal(s, text);
}

inline std::string to_string(const Rational& v) { return v.str(); }

}  // namespace bopmat
