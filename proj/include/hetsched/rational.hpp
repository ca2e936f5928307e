#pragma once

// Exact non-negative rational quantities used for every time, speed and
// workload in the model. Backed by GMP's mpq_class, which keeps values in
// lowest terms after every arithmetic operation.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hetsched {

using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

namespace detail {

inline bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

inline mpz_class parse_integer(std::string_view s) {
    bool neg = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        neg = s.front() == '-';
        s.remove_prefix(1);
    }
    if (!all_digits(s)) throw std::invalid_argument("malformed integer");
    mpz_class z(std::string(s), 10);
    return neg ? mpz_class(-z) : z;
}

}  // namespace detail

/// Parses "p/q", an integer, or a plain decimal ("2.5", "0.001", "-3").
/// Exponent notation is rejected; decimals are converted exactly.
inline Rational parse_rational(std::string_view text) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
        return s;
    };
    std::string_view s = trim(text);
    if (s.empty()) throw std::invalid_argument("empty rational");
    try {
        if (auto slash = s.find('/'); slash != std::string_view::npos) {
            mpz_class num = detail::parse_integer(trim(s.substr(0, slash)));
            std::string_view den_text = trim(s.substr(slash + 1));
            if (!detail::all_digits(den_text)) throw std::invalid_argument("bad denominator");
            mpz_class den(std::string(den_text), 10);
            if (den == 0) throw std::invalid_argument("zero denominator");
            Rational r(num, den);
            r.canonicalize();
            return r;
        }
        bool neg = false;
        if (s.front() == '-' || s.front() == '+') {
            neg = s.front() == '-';
            s.remove_prefix(1);
        }
        auto dot = s.find('.');
        std::string_view int_part = s.substr(0, dot);
        std::string_view frac_part =
            dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
        if (int_part.empty() && frac_part.empty()) throw std::invalid_argument("no digits");
        if ((!int_part.empty() && !detail::all_digits(int_part)) ||
            (!frac_part.empty() && !detail::all_digits(frac_part)) ||
            (dot != std::string_view::npos && frac_part.empty() && int_part.empty()))
            throw std::invalid_argument("bad decimal");
        std::string digits(int_part);
        digits += frac_part;
        if (digits.empty()) throw std::invalid_argument("no digits");
        mpz_class num(digits, 10);
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_part.size());
        Rational r(neg ? mpz_class(-num) : num, den);
        r.canonicalize();
        return r;
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    }
}

/// Lowest-terms "p/q" form; integers are written without "/1".
inline std::string format_rational(const Rational& r) { return r.get_str(10); }

/// Lossy conversion for reporting only (CSV statistics, human tables).
inline double to_double(const Rational& r) { return r.get_d(); }

inline Rational rmin(const Rational& a, const Rational& b) { return a < b ? a : b; }
inline Rational rmax(const Rational& a, const Rational& b) { return a < b ? b : a; }

inline Rational clamp(const Rational& v, const Rational& lo, const Rational& hi) {
    if (v < lo) return lo;
    if (hi < v) return hi;
    return v;
}

}  // namespace hetsched
