#pragma once

// Exact divisor enumeration, the divisor summatory function D(n), and a
// streaming generator over all (divisor, multiple) pairs up to a bound.

#include <algorithm>
#include <utility>
#include <vector>

#include "gammadiv/types.hpp"

namespace gammadiv {

// Sorted divisor list of q plus the count window code keeps needing.
struct DivisorProfile {
    u64 q = 0;
    std::vector<u64> divisors;   // ascending, 1 and q included
    u64 count() const { return divisors.size(); }
};

// All divisors of q via trial division to sqrt(q). Throws on q == 0.
DivisorProfile divisors(u64 q);

inline constexpr u64 kMaxSummatoryInput = 10'000'000'000'000'000ull;

// D(n) = sum_{q<=n} tau(q) = sum_{d<=n} floor(n/d), computed with the
// hyperbola fold in O(sqrt(n)). Throws std::invalid_argument on n == 0 and
// std::overflow_error for n > kMaxSummatoryInput (keeps D(n) inside i64).
u64 divisor_summatory(u64 n);

// Streams every pair (d, q) with lo <= q <= hi and d | q, visiting each
// such pair exactly once as visit(d, q). Enumeration walks the hyperbola:
// outer loop over the smaller cofactor a <= sqrt(hi), inner over multiples
// q = a*b in range, emitting (a, q) and, when b > a, (b, q). Pairs arrive
// in no particular divisor order; visitors must be order-independent
// accumulators. Returns the number of pairs visited (= D(hi) - D(lo-1)).
//
// Key property: visiting [1,B] equals visiting [1,m] then [m+1,B] for any
// split point m — each inner loop partitions by q — which is what makes
// checkpointed and multi-worker accumulation exact.
template <class Visitor>
u64 stream_divisor_pairs(u64 lo, u64 hi, Visitor&& visit) {
    if (lo == 0) lo = 1;
    if (hi < lo) return 0;
    u64 pairs = 0;
    for (u64 a = 1; a <= hi / a; ++a) {
        const u64 start = std::max(lo, a * a);   // b = q/a >= a from here up
        u64 q = ((start + a - 1) / a) * a;
        for (; q <= hi; q += a) {
            visit(a, q);
            ++pairs;
            const u64 b = q / a;
            if (b != a) {
                visit(b, q);
                ++pairs;
            }
            if (q > hi - a) break;  // next multiple would pass hi (or wrap)
        }
    }
    return pairs;
}

// Convenience overload for the full range [1, B].
template <class Visitor>
u64 stream_divisor_pairs(u64 bound, Visitor&& visit) {
    return stream_divisor_pairs(1, bound, std::forward<Visitor>(visit));
}

}  // namespace gammadiv
