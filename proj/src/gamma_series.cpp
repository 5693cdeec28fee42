#include "gammadiv/gamma_series.hpp"

#include <cmath>
#include <stdexcept>

namespace gammadiv {

const char* to_string(RootPolicy policy) {
    return policy == RootPolicy::ExcludeRoot ? "exclude-root" : "root-in-high";
}

std::optional<RootPolicy> parse_root_policy(const std::string& text) {
    if (text == "exclude-root") return RootPolicy::ExcludeRoot;
    if (text == "root-in-high") return RootPolicy::RootInHigh;
    return std::nullopt;
}

namespace {

// Kahan-compensated accumulator for long reciprocal sums.
struct Compensated {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

// sum_{k=lo..hi} 1/k. Four independent lanes inside fixed blocks keep the
// division chain pipelined; block totals are combined with compensation so
// the result is deterministic and accurate to ~1e-11 even for 10^9 terms.
double reciprocal_sum(u64 lo, u64 hi) {
    if (hi < lo) return 0.0;
    constexpr u64 kBlock = 4096;
    Compensated total;
    u64 k = lo;
    while (k <= hi) {
        const u64 end = (hi - k >= kBlock - 1) ? k + kBlock - 1 : hi;
        double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
        while (k + 3 <= end) {
            s0 += 1.0 / static_cast<double>(k);
            s1 += 1.0 / static_cast<double>(k + 1);
            s2 += 1.0 / static_cast<double>(k + 2);
            s3 += 1.0 / static_cast<double>(k + 3);
            k += 4;
        }
        for (; k <= end; ++k) s0 += 1.0 / static_cast<double>(k);
        total.add((s0 + s1) + (s2 + s3));
        if (end == hi) break;
    }
    return total.sum;
}

}  // namespace

double harmonic(u64 n) {
    return reciprocal_sum(1, n);
}

GammaEstimate classic_term(u64 n) {
    if (n == 0) throw std::invalid_argument("classic_term: n must be positive");
    GammaEstimate est;
    est.value = harmonic(n) - std::log(static_cast<double>(n) + 1.0);
    est.source = "classic(n=" + std::to_string(n) + ")";
    est.guaranteed_abs_error = 1.0 / (static_cast<double>(n) + 1.0);
    return est;
}

GammaEstimate logfree_estimate(u64 q, RootPolicy policy) {
    if (q == 0) throw std::invalid_argument("logfree_estimate: q must be positive");
    const u64 root = isqrt(q);
    const bool square = root * root == q;
    // Low window: k with k^2 < q.
    const u64 low_max = square ? root - 1 : root;
    // High window: first k with k^2 > q, or k^2 >= q when the root joins it.
    const u64 high_min = (square && policy == RootPolicy::RootInHigh) ? root : root + 1;

    GammaEstimate est;
    est.value = reciprocal_sum(1, low_max) - reciprocal_sum(high_min, q);
    est.source = std::string("logfree(q=") + std::to_string(q) +
                 ", policy=" + to_string(policy) + ")";
    est.guaranteed_abs_error = 1.0 / static_cast<double>(root) +
                               (policy == RootPolicy::RootInHigh
                                    ? 1.0 / static_cast<double>(q)
                                    : 0.0);
    return est;
}

double error_scaling(u64 n) {
    if (n < 2) throw std::invalid_argument("error_scaling: n must be at least 2");
    if (n > 100'000) {
        throw std::overflow_error("error_scaling: n > 1e5 makes the O(n^2) sum impractical");
    }
    const double n2 = static_cast<double>(n) * static_cast<double>(n);
    const GammaEstimate est = logfree_estimate(n * n, RootPolicy::ExcludeRoot);
    return n2 * (kGammaRef - est.value);
}

GammaEstimate gamma_reference() {
    GammaEstimate est;
    est.value = kGammaRef;
    est.source = "reference";
    est.guaranteed_abs_error = 1.2e-16;  // half-ulp of the stored double, rounded up
    return est;
}

}  // namespace gammadiv
