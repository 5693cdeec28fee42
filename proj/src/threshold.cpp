#include "gammadiv/threshold.hpp"

#include <cmath>
#include <stdexcept>

#include "gammadiv/divisor.hpp"

namespace gammadiv {

namespace {

[[noreturn]] void bad_fspec(const std::string& text, const char* why) {
    throw std::invalid_argument("threshold family '" + text + "': " + why);
}

// Three-way compare with a relative tie tolerance, for the one family
// (LogScale) whose threshold is irrational by construction.
int tolerant_compare(long double x, long double y) {
    const long double scale = std::max({1.0L, std::fabs(x), std::fabs(y)});
    const long double eps = 1e-9L * scale;
    if (x < y - eps) return -1;
    if (x > y + eps) return 1;
    return 0;
}

}  // namespace

FSpec FSpec::sqrt() {
    FSpec f;
    f.kind = FKind::Sqrt;
    return f;
}

FSpec FSpec::power(const Rational& exponent) {
    if (exponent.num < 1 || exponent.num >= exponent.den) {
        throw std::invalid_argument("power family: exponent must satisfy 0 < p/r < 1, got " +
                                    gammadiv::to_string(exponent));
    }
    if (exponent.den > kMaxRatioDenominator) {
        throw std::invalid_argument("power family: denominator above 10^9 is unsupported");
    }
    FSpec f;
    f.kind = FKind::Power;
    f.ratio = exponent;
    return f;
}

FSpec FSpec::linear(const Rational& slope) {
    if (slope.num < 1 || slope.num > slope.den) {
        throw std::invalid_argument("linear family: slope must satisfy 0 < p/r <= 1, got " +
                                    gammadiv::to_string(slope));
    }
    if (slope.den > kMaxRatioDenominator) {
        throw std::invalid_argument("linear family: denominator above 10^9 is unsupported");
    }
    FSpec f;
    f.kind = FKind::Linear;
    f.ratio = slope;
    return f;
}

FSpec FSpec::log_scale(double c) {
    if (!(c > 0.0) || !std::isfinite(c)) {
        throw std::invalid_argument("log family: scale must be a positive finite number");
    }
    FSpec f;
    f.kind = FKind::LogScale;
    f.scale = c;
    return f;
}

FSpec FSpec::identity() {
    FSpec f;
    f.kind = FKind::Identity;
    return f;
}

FSpec FSpec::constant_family(i64 c) {
    if (c < 1) throw std::invalid_argument("const family: c must be at least 1");
    FSpec f;
    f.kind = FKind::Const;
    f.constant = c;
    return f;
}

std::string FSpec::to_string() const {
    switch (kind) {
        case FKind::Sqrt: return "sqrt";
        case FKind::Power: return "power:" + gammadiv::to_string(ratio);
        case FKind::Linear: return "linear:" + gammadiv::to_string(ratio);
        case FKind::LogScale: {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.15g", scale);
            return std::string("log:") + buf;
        }
        case FKind::Identity: return "identity";
        case FKind::Const: return "const:" + std::to_string(constant);
    }
    return "?";
}

FSpec parse_fspec(const std::string& text) {
    if (text == "sqrt") return FSpec::sqrt();
    if (text == "identity") return FSpec::identity();
    const auto colon = text.find(':');
    if (colon != std::string::npos) {
        const std::string head = text.substr(0, colon);
        const std::string tail = text.substr(colon + 1);
        if (tail.empty()) bad_fspec(text, "missing parameter after ':'");
        if (head == "power") return FSpec::power(parse_rational(tail));
        if (head == "linear") return FSpec::linear(parse_rational(tail));
        if (head == "const") {
            const Rational c = parse_rational(tail);
            if (c.den != 1) bad_fspec(text, "const parameter must be an integer");
            return FSpec::constant_family(c.num);
        }
        if (head == "log") {
            std::size_t used = 0;
            double c = 0.0;
            try {
                c = std::stod(tail, &used);
            } catch (const std::exception&) {
                bad_fspec(text, "log scale is not a number");
            }
            if (used != tail.size()) bad_fspec(text, "trailing junk in log scale");
            return FSpec::log_scale(c);
        }
    }
    bad_fspec(text, "expected sqrt | power:p/r | linear:p/r | log:c | identity | const:c");
}

ConditionReport validate(const FSpec& f) {
    ConditionReport report;
    switch (f.kind) {
        case FKind::Sqrt:
        case FKind::Power:
        case FKind::LogScale:
            report = {true, true, true};
            break;
        case FKind::Linear:
        case FKind::Identity:
            report = {true, true, false};   // q / F(q) stays bounded
            break;
        case FKind::Const:
            report = {true, false, true};   // F(q) never grows
            break;
    }
    return report;
}

bool exact_classification(const FSpec& f) {
    return f.kind != FKind::LogScale;
}

void require_overflow_safe(const FSpec& f, u64 bound) {
    const u128 b = bound;
    switch (f.kind) {
        case FKind::Power: {
            // q^p must be exact (the d-side comparisons saturate safely).
            u128 acc = 1;
            for (i64 i = 0; i < f.ratio.num; ++i) {
                if (mul_overflows(acc, b)) {
                    throw std::overflow_error("power family: q^p exceeds 128 bits at bound " +
                                              std::to_string(bound));
                }
                acc *= b;
            }
            break;
        }
        case FKind::Linear: {
            if (mul_overflows(b, b) ||
                mul_overflows(static_cast<u128>(f.ratio.den), b * b) ||
                mul_overflows(static_cast<u128>(f.ratio.num), b)) {
                throw std::overflow_error("linear family: r*q^2 exceeds 128 bits at bound " +
                                          std::to_string(bound));
            }
            break;
        }
        default:
            break;  // Sqrt/Identity/Const saturate safely; LogScale is float
    }
}

namespace detail {

// Core classification; callers guarantee d >= 1, q >= 1, d | q, and that
// require_overflow_safe(f, q) holds.
WindowSide classify_unchecked(u64 d, u64 q, const FSpec& f, RootPolicy policy) {
    const bool root_high = policy == RootPolicy::RootInHigh;
    // Each family reduces "d vs sqrt(F(q))" and "d vs F(q)" to exact
    // integer comparisons; LogScale uses tolerant long doubles.
    switch (f.kind) {
        case FKind::Sqrt: {
            const u128 d4 = pow_saturating(d, 4);
            const u128 qq = q;
            if (d4 < qq) return WindowSide::Low;
            const bool below_top = static_cast<u128>(d) * d < qq;
            if (d4 == qq) return root_high && below_top ? WindowSide::High : WindowSide::Neither;
            return below_top ? WindowSide::High : WindowSide::Neither;
        }
        case FKind::Power: {
            const unsigned p = static_cast<unsigned>(f.ratio.num);
            const unsigned r = static_cast<unsigned>(f.ratio.den);
            const u128 qp = pow_saturating(q, p);            // exact by precondition
            const u128 d2r = pow_saturating(d, 2 * r);       // saturation harmless
            if (d2r < qp) return WindowSide::Low;
            const bool below_top = pow_saturating(d, r) < qp;
            if (d2r == qp) return root_high && below_top ? WindowSide::High : WindowSide::Neither;
            return below_top ? WindowSide::High : WindowSide::Neither;
        }
        case FKind::Linear: {
            const u128 lhs_sq = static_cast<u128>(f.ratio.den) * d * d;   // r*d^2
            const u128 rhs = static_cast<u128>(f.ratio.num) * q;          // p*q
            if (lhs_sq < rhs) return WindowSide::Low;
            const bool below_top = static_cast<u128>(f.ratio.den) * d < rhs;
            if (lhs_sq == rhs) return root_high && below_top ? WindowSide::High : WindowSide::Neither;
            return below_top ? WindowSide::High : WindowSide::Neither;
        }
        case FKind::Identity: {
            const u128 d2 = static_cast<u128>(d) * d;
            if (d2 < q) return WindowSide::Low;
            const bool below_top = d < q;
            if (d2 == q) return root_high && below_top ? WindowSide::High : WindowSide::Neither;
            return below_top ? WindowSide::High : WindowSide::Neither;
        }
        case FKind::Const: {
            const u128 c = static_cast<u128>(f.constant);
            const u128 d2 = static_cast<u128>(d) * d;
            if (d2 < c) return WindowSide::Low;
            const bool below_top = static_cast<u128>(d) < c;
            if (d2 == c) return root_high && below_top ? WindowSide::High : WindowSide::Neither;
            return below_top ? WindowSide::High : WindowSide::Neither;
        }
        case FKind::LogScale: {
            const long double threshold =
                static_cast<long double>(f.scale) * std::log(static_cast<long double>(q));
            const long double dd = static_cast<long double>(d);
            const int sq_cmp = tolerant_compare(dd * dd, threshold);
            const bool below_top = tolerant_compare(dd, threshold) < 0;
            if (sq_cmp < 0) return WindowSide::Low;
            if (sq_cmp == 0) return root_high && below_top ? WindowSide::High : WindowSide::Neither;
            return below_top ? WindowSide::High : WindowSide::Neither;
        }
    }
    return WindowSide::Neither;
}

}  // namespace detail

const char* to_string(WindowSide side) {
    switch (side) {
        case WindowSide::Low: return "low";
        case WindowSide::High: return "high";
        case WindowSide::Neither: return "neither";
    }
    return "?";
}

WindowSide classify(u64 d, u64 q, const FSpec& f, RootPolicy policy) {
    if (d == 0 || q == 0) throw std::invalid_argument("classify: d and q must be positive");
    if (q % d != 0) {
        throw std::invalid_argument("classify: " + std::to_string(d) + " does not divide " +
                                    std::to_string(q));
    }
    require_overflow_safe(f, q);
    return detail::classify_unchecked(d, q, f, policy);
}

ZBreakdown z_value(u64 q, const FSpec& f, RootPolicy policy) {
    require_overflow_safe(f, q);
    ZBreakdown breakdown;
    breakdown.q = q;
    for (const u64 d : divisors(q).divisors) {
        switch (detail::classify_unchecked(d, q, f, policy)) {
            case WindowSide::Low: ++breakdown.low_count; break;
            case WindowSide::High: ++breakdown.high_count; break;
            case WindowSide::Neither: break;
        }
    }
    return breakdown;
}

}  // namespace gammadiv
