#include "gammadiv/closed_forms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gammadiv/gamma_series.hpp"

namespace gammadiv {

namespace {

void require_alpha_in_unit(const Rational& alpha) {
    if (alpha.num < 1 || alpha.num > alpha.den) {
        throw std::invalid_argument("alpha must satisfy 0 < alpha <= 1, got " + to_string(alpha));
    }
}

void require_alpha_in_unit(double alpha) {
    if (!(alpha > 0.0) || alpha > 1.0 || !std::isfinite(alpha)) {
        throw std::invalid_argument("alpha must satisfy 0 < alpha <= 1");
    }
}

// The closed form needs H_m with m ~ 1/alpha, an O(1/alpha) sum.
void require_tractable_index(u64 m) {
    if (m > 2'000'000'000ull) {
        throw std::overflow_error(
            "alpha below 5e-10 makes the O(1/alpha) harmonic sum impractical");
    }
}

// Shared tail: sum_{k=m+1..K} [1/(k+1) - log1p(1/k)], the partial top
// piece, and the head, assembled into the integral value.
IntegralValue integral_from_index(u64 m, double alpha, u64 K) {
    require_tractable_index(m);
    if (K < m + 1) {
        throw std::invalid_argument(
            "integral_oracle: K must be at least the closed-form index plus 1 (~ 1/alpha)");
    }
    // Head: the strip where the whole reciprocal tail is inside the window.
    double value = 1.0 - alpha * static_cast<double>(m);
    // Partial piece on (1/(m+1), alpha): width w in units of the substitution.
    const double w = alpha * static_cast<double>(m + 1) - 1.0;
    if (w > 0.0) {
        value += (static_cast<double>(m) / static_cast<double>(m + 1)) * w - std::log1p(w);
    }
    // Full pieces k = m+1 .. K, each 1/(k+1) - log1p(1/k), summed compensated.
    double sum = 0.0;
    double carry = 0.0;
    for (u64 k = m + 1; k <= K; ++k) {
        const double kd = static_cast<double>(k);
        const double term = 1.0 / (kd + 1.0) - std::log1p(1.0 / kd);
        const double y = term - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    value += sum;
    // Estimated remainder of the alternating-free tail; true remainder lies
    // in (1/(2(K+1)) - 1/(2(K+1)^2), 1/(2K)), so centering at 1/(2(K+1))
    // leaves an error well under the reported 1/(2K) bound.
    value += -0.5 / (static_cast<double>(K) + 1.0);

    IntegralValue out;
    out.value = value;   // satisfies closed_form + value ~= gamma
    out.tail_bound = 0.5 / static_cast<double>(K);
    return out;
}

}  // namespace

u64 closed_form_index(const Rational& alpha) {
    require_alpha_in_unit(alpha);
    // ceil((r - p)/p) = (r - 1) / p  for reduced p/r in (0, 1].
    return static_cast<u64>((alpha.den - 1) / alpha.num);
}

double theorem2_closed(const Rational& alpha) {
    const u64 m = closed_form_index(alpha);
    require_tractable_index(m);
    return harmonic(m) - std::log(static_cast<double>(alpha.den) / static_cast<double>(alpha.num));
}

double theorem2_closed(double alpha) {
    require_alpha_in_unit(alpha);
    const double v = (1.0 - alpha) / alpha;
    const double m = std::max(0.0, std::ceil(v));
    if (m > 2e9) {
        throw std::overflow_error(
            "alpha below 5e-10 makes the O(1/alpha) harmonic sum impractical");
    }
    return harmonic(static_cast<u64>(m)) - std::log(1.0 / alpha);
}

double special_alpha(u64 k) {
    if (k == 0) throw std::invalid_argument("special_alpha: k must be positive");
    return std::exp(kGammaRef - harmonic(k));
}

IntegralValue integral_oracle(const Rational& alpha, u64 K) {
    const u64 m = closed_form_index(alpha);
    return integral_from_index(m, alpha.value(), K);
}

IntegralValue integral_oracle(double alpha, u64 K) {
    require_alpha_in_unit(alpha);
    const double v = (1.0 - alpha) / alpha;
    const u64 m = static_cast<u64>(std::max(0.0, std::ceil(v)));
    return integral_from_index(m, alpha, K);
}

std::vector<CurvePoint> alpha_curve(u64 samples, double from, double to) {
    if (samples < 2) throw std::invalid_argument("alpha_curve: need at least 2 samples");
    if (!(from > 0.0) || !(from < to) || to > 1.0) {
        throw std::invalid_argument("alpha_curve: range must satisfy 0 < from < to <= 1");
    }
    if (from < 1e-4) {
        throw std::invalid_argument(
            "alpha_curve: from below 1e-4 would emit ~1/from jump rows; narrow the range");
    }
    std::vector<CurvePoint> points;
    for (u64 i = 0; i < samples; ++i) {
        const double alpha =
            from + (to - from) * static_cast<double>(i) / static_cast<double>(samples - 1);
        points.push_back({alpha, theorem2_closed(alpha), "sample"});
    }
    // Jump pairs at alpha = 1/k strictly inside (from, to). The right limit
    // is the closed form itself; the left limit exceeds it by exactly 1/k.
    for (u64 k = static_cast<u64>(std::floor(1.0 / to)) + 1;; ++k) {
        const double jump = 1.0 / static_cast<double>(k);
        if (jump <= from) break;
        if (jump >= to) continue;
        const double right = theorem2_closed(Rational(1, static_cast<i64>(k)));
        points.push_back({jump, right + jump, "left"});
        points.push_back({jump, right, "right"});
    }
    auto side_rank = [](const std::string& side) {
        if (side == "left") return 0;
        if (side == "right") return 1;
        return 2;
    };
    std::stable_sort(points.begin(), points.end(), [&](const CurvePoint& a, const CurvePoint& b) {
        if (a.alpha != b.alpha) return a.alpha < b.alpha;
        return side_rank(a.side) < side_rank(b.side);
    });
    return points;
}

MeanOverAlpha mean_over_alpha(u64 K) {
    if (K == 0) throw std::invalid_argument("mean_over_alpha: K must be positive");
    // Integrating A over the pieces (1/(k+1), 1/k] gives, per k, the term
    // (H_k - 1 + k*log1p(1/k) - ln k) / (k (k+1)); the omitted tail past K
    // is gamma/(K+1) up to O(1/K^3).
    double sum = 0.0;
    double carry = 0.0;
    double h = 0.0;         // H_k, accumulated incrementally
    double h_carry = 0.0;
    for (u64 k = 1; k <= K; ++k) {
        const double kd = static_cast<double>(k);
        {
            const double y = 1.0 / kd - h_carry;
            const double t = h + y;
            h_carry = (t - h) - y;
            h = t;
        }
        const double numerator = (h - 1.0) + (kd * std::log1p(1.0 / kd) - std::log(kd));
        const double term = numerator / (kd * (kd + 1.0));
        const double y = term - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    MeanOverAlpha out;
    out.value = sum + kGammaRef / (static_cast<double>(K) + 1.0);
    out.tail_bound = 1.0 / (8.0 * static_cast<double>(K) * static_cast<double>(K) *
                            static_cast<double>(K)) +
                     2e-13;
    return out;
}

}  // namespace gammadiv
