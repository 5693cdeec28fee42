#pragma once

// Shared integer/rational primitives for exact window arithmetic.
//
// All boundary comparisons in this library are done in integers (up to
// 128 bits, with saturation on powers) so that classifications never
// depend on floating-point rounding.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace gammadiv {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

inline constexpr u128 kU128Max = ~static_cast<u128>(0);

// Exact floor(sqrt(n)) for u64 (never trusts FP rounding at the boundary).
inline u64 isqrt(u64 n) {
    if (n == 0) return 0;
    u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r > n / r) --r;                 // r*r > n  =>  shrink
    while ((r + 1) <= n / (r + 1)) ++r;             // (r+1)^2 <= n => grow
    return r;
}

// base^exp in u128, saturating to kU128Max on overflow. Saturation is
// safe for window comparisons because every right-hand side fits u128.
inline u128 pow_saturating(u128 base, unsigned exp) {
    u128 result = 1;
    while (exp > 0) {
        if (exp & 1u) {
            if (base != 0 && result > kU128Max / base) return kU128Max;
            result *= base;
        }
        exp >>= 1u;
        if (exp == 0) break;
        if (base != 0 && base > kU128Max / base) {
            // base^2 overflows; any further squaring saturates unless the
            // remaining multiplier chain is empty (handled by exp==0 above).
            base = kU128Max;
        } else {
            base *= base;
        }
    }
    return result;
}

// True if a*b overflows u128.
inline bool mul_overflows(u128 a, u128 b) {
    return a != 0 && b > kU128Max / a;
}

// Reduced fraction with positive denominator. Used for exact thresholds
// (exponents p/r, slopes alpha = p/r) and for jump-point arithmetic.
struct Rational {
    i64 num = 0;
    i64 den = 1;

    Rational() = default;
    Rational(i64 n, i64 d) : num(n), den(d) {
        if (den == 0) throw std::invalid_argument("rational: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        const i64 g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool positive() const { return num > 0; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }
};

// Parses "p/r" or a bare integer "p" (== p/1). Throws std::invalid_argument
// on anything else (empty, junk, zero denominator, overflow).
Rational parse_rational(const std::string& text);

// Canonical text form: "p/r", or "p" when the denominator is 1.
std::string to_string(const Rational& r);

}  // namespace gammadiv
