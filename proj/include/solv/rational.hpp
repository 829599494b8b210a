#pragma once

/**
 * @file rational.hpp
 * @brief Arbitrary-precision integers and rationals.
 *
 * Thin layer over boost::multiprecision giving the project a single spelling
 * for exact scalars plus the handful of helpers the rest of the library
 * needs: floor/fractional part, canonical string form "p/q", parsing, and
 * denominator extraction for lcm computations.
 *
 * Rat is canonical by construction (reduced, positive denominator), so
 * equality is plain equality and no floating point appears anywhere.
 */

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <stdexcept>
#include <string>

namespace solv {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int num(const Rat& r) { return numerator(r); }
inline Int den(const Rat& r) { return denominator(r); }

inline bool is_integer(const Rat& r) { return den(r) == 1; }

/// Largest integer <= r.
inline Int rat_floor(const Rat& r) {
    Int q = num(r) / den(r);
    if (num(r) < 0 && q * den(r) != num(r)) --q;
    return q;
}

/// r - floor(r), in [0, 1).
inline Rat mod1(const Rat& r) { return r - Rat(rat_floor(r)); }

/// Representative of r modulo the cyclic subgroup generated by step > 0.
inline Rat mod_step(const Rat& r, const Rat& step) {
    if (step <= 0) throw std::domain_error("mod_step: step must be positive");
    Rat t = r / step;
    return (t - Rat(rat_floor(t))) * step;
}

inline std::string to_string(const Rat& r) {
    std::string s = num(r).str();
    if (den(r) != 1) s += "/" + den(r).str();
    return s;
}

/// Parse "p" or "p/q" (q > 0 after normalization).
inline std::optional<Rat> parse_rat(const std::string& s) {
    if (s.empty()) return std::nullopt;
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(s));
        Int p(s.substr(0, slash)), q(s.substr(slash + 1));
        if (q == 0) return std::nullopt;
        return Rat(p, q);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

inline Int int_lcm(const Int& a, const Int& b) {
    if (a == 0 || b == 0) return 0;
    return abs(a * b) / gcd(a, b);
}

/// True when r is a perfect square; if so *root is the nonnegative root.
inline bool is_perfect_square(const Int& n, Int* root = nullptr) {
    if (n < 0) return false;
    Int r = sqrt(n);  // floor square root
    if (r * r != n) return false;
    if (root) *root = r;
    return true;
}

}  // namespace solv
