#include "gammadiv/divisor.hpp"

#include <stdexcept>

namespace gammadiv {

DivisorProfile divisors(u64 q) {
    if (q == 0) throw std::invalid_argument("divisors: q must be positive");
    DivisorProfile profile;
    profile.q = q;
    std::vector<u64> small;
    std::vector<u64> large;
    for (u64 d = 1; d <= q / d; ++d) {
        if (q % d != 0) continue;
        small.push_back(d);
        const u64 e = q / d;
        if (e != d) large.push_back(e);
    }
    profile.divisors = std::move(small);
    profile.divisors.insert(profile.divisors.end(), large.rbegin(), large.rend());
    return profile;
}

u64 divisor_summatory(u64 n) {
    if (n == 0) throw std::invalid_argument("divisor_summatory: n must be positive");
    if (n > kMaxSummatoryInput) {
        throw std::overflow_error("divisor_summatory: n exceeds 10^16 exact-arithmetic guard");
    }
    // Dirichlet hyperbola: D(n) = 2*sum_{d<=sqrt(n)} floor(n/d) - floor(sqrt(n))^2.
    const u64 root = isqrt(n);
    u64 fold = 0;
    for (u64 d = 1; d <= root; ++d) fold += n / d;
    return 2 * fold - root * root;
}

}  // namespace gammadiv
