#pragma once

// Threshold families F(q) and the two-window divisor classification:
// a divisor d of q is Low when d < sqrt(F(q)), High when it lies in
// [sqrt(F(q)), F(q)) — the left edge open or closed per RootPolicy, the
// top always excluded — and Neither otherwise.
//
// For every kind except LogScale the comparisons are exact integer
// predicates (d^4 vs q, d^{2r} vs q^p, r*d^2 vs p*q, ...), so results are
// bit-reliable at any bound the overflow guard admits.

#include <string>

#include "gammadiv/gamma_series.hpp"
#include "gammadiv/types.hpp"

namespace gammadiv {

enum class FKind { Sqrt, Power, Linear, LogScale, Identity, Const };

// Ratio denominators are capped so the exact 128-bit comparisons below
// cannot silently truncate.
inline constexpr i64 kMaxRatioDenominator = 1'000'000'000;

// A threshold family. Construct via the factories (they validate domains):
//   Sqrt        F(q) = sqrt(q)
//   Power       F(q) = q^(p/r),  0 < p/r < 1
//   Linear      F(q) = (p/r)*q,  0 < p/r <= 1
//   LogScale    F(q) = c*ln(q),  c > 0          (float comparisons)
//   Identity    F(q) = q
//   Const       F(q) = c,        c >= 1
struct FSpec {
    FKind kind = FKind::Sqrt;
    Rational ratio;      // Power exponent or Linear slope (reduced p/r)
    double scale = 0.0;  // LogScale c
    i64 constant = 0;    // Const c

    static FSpec sqrt();
    static FSpec power(const Rational& exponent);
    static FSpec linear(const Rational& slope);
    static FSpec log_scale(double c);
    static FSpec identity();
    static FSpec constant_family(i64 c);

    // Canonical text: "sqrt" | "power:p/r" | "linear:p/r" | "log:c" |
    // "identity" | "const:c". parse_fspec() accepts exactly these.
    std::string to_string() const;

    friend bool operator==(const FSpec& a, const FSpec& b) {
        return a.kind == b.kind && a.ratio == b.ratio && a.scale == b.scale &&
               a.constant == b.constant;
    }
};

// Parses the canonical text form; throws std::invalid_argument otherwise.
FSpec parse_fspec(const std::string& text);

// Which of the averaging hypotheses the family satisfies:
// (a) weakly increasing, (b) F(q) -> infinity, (c) q / F(q) -> infinity.
struct ConditionReport {
    bool weakly_increasing = false;
    bool tends_to_infinity = false;
    bool ratio_tends_to_infinity = false;
    bool all() const { return weakly_increasing && tends_to_infinity && ratio_tends_to_infinity; }
};

ConditionReport validate(const FSpec& f);

// True for every kind whose classification is an exact integer predicate
// (all but LogScale, which compares against c*ln(q) in long double with a
// relative tie tolerance of 1e-9).
bool exact_classification(const FSpec& f);

// Throws std::overflow_error if classifying divisors of any q <= bound
// could overflow the 128-bit comparisons (e.g. q^p or r*q out of range).
void require_overflow_safe(const FSpec& f, u64 bound);

enum class WindowSide { Low, High, Neither };

const char* to_string(WindowSide side);

// Classifies divisor d of q. Throws std::invalid_argument when d == 0,
// q == 0, or d does not divide q; delegates overflow checks to
// require_overflow_safe(f, q).
WindowSide classify(u64 d, u64 q, const FSpec& f, RootPolicy policy);

// z_F(q) = #Low - #High over the divisors of q.
struct ZBreakdown {
    u64 q = 0;
    i64 low_count = 0;
    i64 high_count = 0;
    i64 z() const { return low_count - high_count; }
};

ZBreakdown z_value(u64 q, const FSpec& f, RootPolicy policy);

namespace detail {

// classify() without the argument validation and overflow re-check, for
// sieve hot loops that already guarantee d | q and a vetted bound.
WindowSide classify_unchecked(u64 d, u64 q, const FSpec& f, RootPolicy policy);

}  // namespace detail

}  // namespace gammadiv
