#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fuzzdyn {

// Exact arbitrary-precision rational. All metric values, fuzzy levels and
// thresholds in this library are exact; no floating point anywhere.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rational rat(long long num, long long den = 1) {
    return Rational(num, den);
}

inline Rational rat_abs(const Rational& x) { return x < 0 ? Rational(-x) : x; }

inline const Rational& rat_min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline const Rational& rat_max(const Rational& a, const Rational& b) { return a < b ? b : a; }

// Canonical text form: "p/q" reduced, bare "p" when q == 1.
inline std::string to_string(const Rational& x) {
    if (denominator(x) == 1) return numerator(x).str();
    return numerator(x).str() + "/" + denominator(x).str();
}

// Accepts "p", "p/q" and optional leading '-'. Empty or malformed input
// yields nullopt rather than throwing so callers can attach context.
inline std::optional<Rational> try_parse_rational(std::string_view text) {
    if (text.empty()) return std::nullopt;
    const auto slash = text.find('/');
    const auto is_int = [](std::string_view s) {
        if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
        if (s.empty()) return false;
        for (char c : s)
            if (c < '0' || c > '9') return false;
        return true;
    };
    try {
        if (slash == std::string_view::npos) {
            if (!is_int(text)) return std::nullopt;
            return Rational(BigInt(std::string(text)));
        }
        const auto num = text.substr(0, slash);
        const auto den = text.substr(slash + 1);
        if (!is_int(num) || !is_int(den)) return std::nullopt;
        BigInt d{std::string(den)};
        if (d == 0) return std::nullopt;
        return Rational(BigInt(std::string(num)), d);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

inline Rational parse_rational(std::string_view text) {
    auto r = try_parse_rational(text);
    if (!r) throw std::invalid_argument("not a rational: '" + std::string(text) + "'");
    return *r;
}

inline bool in_unit_interval(const Rational& x) { return x >= 0 && x <= 1; }

}  // namespace fuzzdyn
