#pragma once

// Series approximations to the Euler-Mascheroni constant gamma:
// the classic H_n - ln(n+1) truncation and a logarithm-free two-window
// reciprocal sum driven purely by integer square comparisons.

#include <numbers>
#include <optional>
#include <string>

#include "gammadiv/types.hpp"

namespace gammadiv {

// Double nearest to gamma = 0.57721566490153286060...
inline constexpr double kGammaRef = std::numbers::egamma;

// Whether an exact square root d = sqrt(q) (when integral) counts as part
// of the high window or is excluded from both windows.
enum class RootPolicy { ExcludeRoot, RootInHigh };

const char* to_string(RootPolicy policy);
std::optional<RootPolicy> parse_root_policy(const std::string& text);

// An approximation to gamma together with a bound that is actually true:
// |gamma - value| <= guaranteed_abs_error.
struct GammaEstimate {
    double value = 0.0;
    std::string source;            // "classic(n=...)" | "logfree(q=..., policy=...)" | "reference"
    double guaranteed_abs_error = 0.0;
};

// H_n = sum_{k<=n} 1/k. Blocked stride-4 accumulation with Kahan
// compensation across blocks: deterministic, |error| well under 1e-10
// even at n = 10^9, and fast enough to call there (~1-2 s).
double harmonic(u64 n);

// classic_term(n) = H_n - ln(n+1), an underestimate of gamma whose
// shortfall lies in (1/(2(n+1)), 1/(n+1)]; guaranteed_abs_error = 1/(n+1).
// Throws std::invalid_argument on n == 0.
GammaEstimate classic_term(u64 n);

// Log-free estimate S(q) = sum_{k^2 < q} 1/k - sum_{k in high window, k <= q} 1/k,
// where the high window opens at the first k with k^2 > q (ExcludeRoot) or
// k^2 >= q (RootInHigh). O(q) time. Throws std::invalid_argument on q == 0.
//
// Error bound: 1/floor(sqrt(q)) for ExcludeRoot; RootInHigh additionally
// subtracts 1/sqrt(q) at perfect squares, so its bound carries a +1/q term.
GammaEstimate logfree_estimate(u64 q, RootPolicy policy = RootPolicy::ExcludeRoot);

// n^2 * (gamma_ref - S(n^2)) under ExcludeRoot; tends to 2/3 as n grows.
// Cost is the O(n^2) reciprocal sum, so n is capped at 10^5.
// Throws std::invalid_argument on n < 2, std::overflow_error past the cap.
double error_scaling(u64 n);

// The compile-time double nearest to gamma, as an estimate record.
GammaEstimate gamma_reference();

}  // namespace gammadiv
