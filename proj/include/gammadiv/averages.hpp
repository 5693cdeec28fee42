#pragma once

// Ensemble averages over n <= B of divisor-window statistics, computed by
// streaming divisor pairs once and keeping exact integer partial sums.
// Runs are checkpointed, resumable from a digest-protected state file, and
// splittable across workers without changing a single bit of the result.

#include <string>
#include <vector>

#include "gammadiv/gamma_series.hpp"
#include "gammadiv/threshold.hpp"
#include "gammadiv/types.hpp"

namespace gammadiv {

struct Checkpoint {
    u64 bound = 0;     // statistics accumulated over n in [1, bound]
    i64 exact_sum = 0; // exact integer sum of the statistic
    double mean = 0.0; // exact_sum / bound
};

struct AverageSeries {
    std::string statistic;   // human-readable run label
    u64 bound = 0;
    std::vector<Checkpoint> checkpoints;  // ascending bounds, last == bound
    const Checkpoint& final_checkpoint() const { return checkpoints.back(); }
};

// Which per-n statistic a sieve run accumulates.
enum class StatisticKind {
    ZfAverage,   // z_F(n) = #Low - #High for a threshold family F
    Theorem2,    // alpha-threshold count: #{d^2 < alpha*n} - #{d^2 > alpha*n, d <= alpha*n}
    Doubling,    // #{n^(1/4) < d < n^(1/2)} - 2*#{n^(1/8) < d < n^(1/4)}, ends open
};

// Full description of a sieve run. workers deliberately does not affect
// results (exact integer partial sums over a fixed partition), only speed.
struct RunSpec {
    StatisticKind kind = StatisticKind::ZfAverage;
    FSpec f;                                  // ZfAverage
    RootPolicy policy = RootPolicy::RootInHigh;  // ZfAverage
    Rational alpha{1, 2};                     // Theorem2
    u64 bound = 0;
    u64 stride = 10'000;                      // checkpoints at stride*2^j, plus bound
    std::vector<u64> explicit_checkpoints;    // overrides the stride schedule
    unsigned workers = 1;

    std::string statistic_label() const;
    std::vector<u64> checkpoint_schedule() const;  // ascending, last == bound
};

// A sieve run that advances one checkpoint segment per step() and can be
// serialized between steps. The state file is a self-describing text
// record ending in an fnv1a64 digest line; load() rejects corruption and
// resume_or_start() rejects files written by a different configuration.
class ResumableRun {
  public:
    explicit ResumableRun(RunSpec spec);

    // Parses a state file; throws std::runtime_error on bad digest,
    // malformed records, or internally inconsistent progress.
    static ResumableRun load(const std::string& path);

    // load(path) when it exists (verifying it matches spec, workers aside),
    // otherwise a fresh run. The new workers value always wins.
    static ResumableRun resume_or_start(RunSpec spec, const std::string& path);

    const RunSpec& spec() const { return spec_; }
    u64 processed() const;        // highest n folded into the sum so far
    i64 partial_sum() const { return sum_; }
    bool finished() const { return next_ == schedule_.size(); }

    // Processes the next segment; returns false when already finished.
    bool step();

    // Atomic write (tmp + rename). Throws std::runtime_error on I/O error.
    void save(const std::string& path) const;

    // Completed checkpoints as a series (valid once finished()).
    AverageSeries series() const;

  private:
    RunSpec spec_;
    std::vector<u64> schedule_;
    std::size_t next_ = 0;   // first unprocessed schedule index
    i64 sum_ = 0;
    std::vector<Checkpoint> done_;

    i64 segment_sum(u64 lo, u64 hi) const;
};

// Options shared by the one-call averaging fronts below.
struct SieveOptions {
    u64 stride = 10'000;
    unsigned workers = 1;
    std::vector<u64> checkpoints;  // explicit schedule override
};

// Mean of z_F(n) over n <= bound. With the defaults (F = sqrt,
// RootInHigh) the mean tends to gamma.
AverageSeries zf_average(const FSpec& f, u64 bound,
                         RootPolicy policy = RootPolicy::RootInHigh,
                         const SieveOptions& options = {});

// The naive full-pairing count #{d | q : d < sqrt(q)} - #{d | q : d > sqrt(q)}.
// Identically zero, because d <-> q/d swaps the two sides; this is the
// statistic a two-window z is often carelessly conflated with.
i64 z0(u64 q);

// Scans z0 over n <= bound, tracking the running sum (identically zero)
// and the largest |z0(n)| seen. Single-threaded; options.workers ignored.
struct FallacyReport {
    AverageSeries series;
    std::vector<i64> max_abs_at_checkpoint;  // running max, aligned with series
    i64 max_abs_z = 0;
    u64 argmax_q = 0;
};
FallacyReport fallacy_scan(u64 bound, const SieveOptions& options = {});

// Mean of the alpha-threshold statistic for alpha = p/r in (0, 1):
// per n, #{d | n : d^2 < alpha n} - #{d | n : d^2 > alpha n and d <= alpha n}.
// The inner boundary d^2 = alpha n is excluded from both windows; the top
// edge is closed (d = alpha n counts as High), which is the convention
// whose mean converges to the ceiling closed form at every alpha,
// unit fractions included. Tends to theorem2_closed(alpha).
AverageSeries theorem2_empirical(const Rational& alpha, u64 bound,
                                 const SieveOptions& options = {});

// Mean over k <= n of the fractional part {n/k}: exactly
// H_n - D(n)/n, which tends to 1 - gamma. O(sqrt(n)) for the divisor
// summatory plus O(n) for the harmonic number; n capped at 10^10.
double dlvp_average(u64 n);

// Mean of the doubling statistic (see StatisticKind::Doubling): both
// windows strict-open. Tends to 0, with slow oscillation.
AverageSeries doubling_statistic(u64 bound, const SieveOptions& options = {});

}  // namespace gammadiv
