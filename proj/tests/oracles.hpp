#pragma once

// Independent slow-path oracles for the tests. Everything here is written
// from the window definitions directly (longhand 128-bit arithmetic or
// per-divisor counting formulas), deliberately NOT sharing code with the
// library's classifiers, so agreement between the two is meaningful.

#include <cmath>
#include <cstdint>
#include <vector>

#include "gammadiv/divisor.hpp"
#include "gammadiv/gamma_series.hpp"
#include "gammadiv/types.hpp"

namespace oracle {

using gammadiv::i64;
using gammadiv::u64;
using i128 = __int128;
using u128 = unsigned __int128;

// --- per-q brute force over explicit divisor lists ----------------------

// z for F(q) = sqrt(q): low d^4 < q; high d^4 >(=) q and d^2 < q.
inline i64 z_sqrt_brute(u64 q, bool root_in_high) {
    i64 z = 0;
    for (const u64 d : gammadiv::divisors(q).divisors) {
        const u128 d2 = static_cast<u128>(d) * d;
        const u128 d4 = d2 * d2;  // q <= 1e9 in tests; no overflow
        if (d4 < q) ++z;
        else if (d4 == q) { if (root_in_high && d2 < q) --z; }
        else if (d2 < q) --z;
    }
    return z;
}

// z for F(q) = q^(2/3): sqrt(F) = q^(1/3), so low is d^6 < q^2 and the
// top edge is d^3 < q^2, both written as longhand products.
inline i64 z_power23_brute(u64 q, bool root_in_high) {
    i64 z = 0;
    const u128 q2 = static_cast<u128>(q) * q;
    for (const u64 d : gammadiv::divisors(q).divisors) {
        const u128 d3 = static_cast<u128>(d) * d * d;
        const u128 d6 = d3 * d3;  // d <= q <= 1e5 in tests; fits u128
        const bool below_top = d3 < q2;
        if (d6 < q2) ++z;
        else if (d6 == q2) { if (root_in_high && below_top) --z; }
        else if (below_top) --z;
    }
    return z;
}

// z for F(q) = q/2: low 2 d^2 < q; high 2 d^2 >(=) q and 2 d < q.
inline i64 z_half_brute(u64 q, bool root_in_high) {
    i64 z = 0;
    for (const u64 d : gammadiv::divisors(q).divisors) {
        const u128 lhs = static_cast<u128>(2) * d * d;
        const bool below_top = 2 * static_cast<u128>(d) < q;
        if (lhs < q) ++z;
        else if (lhs == q) { if (root_in_high && below_top) --z; }
        else if (below_top) --z;
    }
    return z;
}

// z for F(q) = c: low d^2 < c; high d^2 >(=) c and d < c.
inline i64 z_const_brute(u64 q, i64 c, bool root_in_high) {
    i64 z = 0;
    for (const u64 d : gammadiv::divisors(q).divisors) {
        const u128 d2 = static_cast<u128>(d) * d;
        const u128 cc = static_cast<u128>(c);
        if (d2 < cc) ++z;
        else if (d2 == cc) { if (root_in_high && d < static_cast<u64>(c)) --z; }
        else if (d < static_cast<u64>(c)) --z;
    }
    return z;
}

// alpha-threshold statistic (closed top): low r d^2 < p n,
// high r d^2 > p n and r d <= p n.
inline i64 theorem2_brute(u64 n, i64 p, i64 r) {
    i64 s = 0;
    for (const u64 d : gammadiv::divisors(n).divisors) {
        const u128 lhs = static_cast<u128>(r) * d * d;
        const u128 rhs = static_cast<u128>(p) * n;
        if (lhs < rhs) ++s;
        else if (lhs > rhs && static_cast<u128>(r) * d <= rhs) --s;
    }
    return s;
}

// doubling statistic: (d^4 > n and d^2 < n) minus twice (d^8 > n and d^4 < n).
inline i64 doubling_brute(u64 n) {
    i64 s = 0;
    for (const u64 d : gammadiv::divisors(n).divisors) {
        const u128 d2 = static_cast<u128>(d) * d;
        const u128 d4 = d2 * d2;              // n <= 1e9 in tests
        const u128 d8 = d4 < (static_cast<u128>(1) << 64) ? d4 * d4 : ~static_cast<u128>(0);
        if (d4 > n && d2 < n) s += 1;
        if (d8 > n && d4 < n) s -= 2;
    }
    return s;
}

// --- counting-formula routes (O(sqrt B) or O(B/2), no divisor lists) ----

// Sum of z_sqrt over n <= B by counting multiples per divisor.
inline i64 zf_sqrt_row_sum(u64 B, bool root_in_high) {
    i64 total = 0;
    for (u64 d = 1; d * d <= B; ++d) {
        const u64 m = B / d;
        const u64 d3 = d * d * d;
        const i64 low = static_cast<i64>(m > d3 ? m - d3 : 0);
        const u64 top = root_in_high ? d3 : d3 - 1;
        const u64 cap = top < m ? top : m;
        const i64 high = static_cast<i64>(cap > d ? cap - d : 0);
        total += low - high;
    }
    return total;
}

// Sum of the closed-top alpha-threshold statistic over n <= B.
inline i64 theorem2_row_sum(u64 B, i64 p, i64 r) {
    i64 total = 0;
    const u64 up = static_cast<u64>(p);
    const u64 ur = static_cast<u64>(r);
    const u64 m_min = (ur + up - 1) / up;  // ceil(r/p)
    for (u64 d = 1; d <= B; ++d) {
        const u64 m_cap = B / d;
        if (m_cap < m_min && d * d * ur >= up * B) break;  // nothing left
        const u64 rd = ur * d;
        const u64 low_from = rd / up + 1;                      // m > rd/p
        const i64 low = static_cast<i64>(m_cap >= low_from ? m_cap - low_from + 1 : 0);
        const u64 high_to = (rd + up - 1) / up;                // ceil(rd/p), then -1 below
        const u64 cap = (high_to - 1) < m_cap ? high_to - 1 : m_cap;
        const i64 high = static_cast<i64>(cap >= m_min ? cap - m_min + 1 : 0);
        total += low - high;
    }
    return total;
}

// Sum of the doubling statistic over n <= B.
inline i64 doubling_row_sum(u64 B) {
    i64 total = 0;
    for (u64 d = 1; d * d <= B; ++d) {
        const u64 m = B / d;
        const u128 d3 = static_cast<u128>(d) * d * d;
        const u128 d7 = d3 * d3 * d;
        const u128 cap1 = (d3 - 1) < m ? d3 - 1 : m;
        const i64 c1 = static_cast<i64>(cap1 > d ? static_cast<u64>(cap1) - d : 0);
        const u128 cap2 = (d7 - 1) < m ? d7 - 1 : m;
        const i64 c2 =
            cap2 > d3 ? static_cast<i64>(static_cast<u64>(cap2) - static_cast<u64>(d3)) : 0;
        total += c1 - 2 * c2;
    }
    return total;
}

// --- direct O(n) references --------------------------------------------

// D(n) as a plain sum of floor(n/k).
inline u64 divisor_summatory_direct(u64 n) {
    u64 sum = 0;
    for (u64 k = 1; k <= n; ++k) sum += n / k;
    return sum;
}

// Mean of {n/k} as a direct compensated sum of remainders.
inline double dlvp_direct(u64 n) {
    double sum = 0.0;
    double carry = 0.0;
    for (u64 k = 1; k <= n; ++k) {
        const double term = static_cast<double>(n % k) / static_cast<double>(k);
        const double y = term - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    return sum / static_cast<double>(n);
}

}  // namespace oracle
