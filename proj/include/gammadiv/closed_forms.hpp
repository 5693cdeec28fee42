#pragma once

// Closed-form limits for the alpha-threshold statistic, the independent
// piecewise integral oracle for the same quantity, the jump-aware curve
// over alpha, and the mean of the curve over (0, 1].

#include <string>
#include <vector>

#include "gammadiv/types.hpp"

namespace gammadiv {

// Index of the closed form: m(alpha) = ceil((1 - alpha)/alpha), i.e. the
// number of full reciprocal terms. Equals floor(1/alpha) when 1/alpha is
// not an integer, and 1/alpha - 1 when it is (right-continuous choice).
u64 closed_form_index(const Rational& alpha);

// A(alpha) = H_m - ln(1/alpha) with m as above: the limit of the mean of
// the alpha-threshold statistic. Requires 0 < alpha <= 1. A(1) = 0;
// A(alpha) -> gamma as alpha -> 0. The Rational overload evaluates jump
// points alpha = 1/k exactly in the right-continuous convention; the
// double overload derives m from the given floating-point alpha.
// O(1/alpha) time (harmonic number); alpha below 5e-10 is rejected.
double theorem2_closed(const Rational& alpha);
double theorem2_closed(double alpha);

// The alpha with A(alpha) = gamma_ref inside (1/(k+1), 1/k): equals
// exp(gamma_ref - H_k). Requires k >= 1.
double special_alpha(u64 k);

// Piecewise evaluation of the exact integral complementing A(alpha):
// value approximates gamma - A(alpha) with truncation error below
// tail_bound = 1/(2K). Requires 0 < alpha <= 1 and
// K >= closed_form_index(alpha) + 1.
struct IntegralValue {
    double value = 0.0;
    double tail_bound = 0.0;
};
IntegralValue integral_oracle(const Rational& alpha, u64 K);
IntegralValue integral_oracle(double alpha, u64 K);

// One row of the curve alpha -> A(alpha). side is "sample" for grid
// points, "left"/"right" for the two one-sided limits emitted at each
// jump alpha = 1/k strictly inside the range. left - right = 1/k exactly.
struct CurvePoint {
    double alpha = 0.0;
    double value = 0.0;
    std::string side;
};

// samples >= 2 evenly spaced grid points on [from, to] (0 < from < to <= 1,
// from >= 1e-4 to keep the jump list finite) plus the jump pairs, sorted by
// alpha ascending (left, right, then sample at equal alpha).
std::vector<CurvePoint> alpha_curve(u64 samples, double from, double to);

// Mean of A over alpha in (0, 1]: converges to zeta(2) - 1 = pi^2/6 - 1.
// Truncation (plus rounding) error is below tail_bound ~ 1/(8 K^3).
struct MeanOverAlpha {
    double value = 0.0;
    double tail_bound = 0.0;
};
MeanOverAlpha mean_over_alpha(u64 K);

// Side-by-side record for one alpha: the closed form, the empirical mean
// (when a sieve was run; bound == 0 otherwise), and the integral oracle.
struct AlphaAnalysis {
    Rational alpha{1, 2};
    u64 m = 0;                        // closed_form_index(alpha)
    double closed_form = 0.0;
    u64 empirical_bound = 0;
    double empirical_mean = 0.0;
    double empirical_discrepancy = 0.0;  // |empirical_mean - closed_form|
    double integral_value = 0.0;
    double integral_tail_bound = 0.0;
    double identity_gap = 0.0;           // |closed_form + integral - gamma_ref|
};

}  // namespace gammadiv
