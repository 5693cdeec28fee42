// Acceptance gate: twelve checks, one PASS/FAIL line each, with measured
// values and wall times. Exit status 0 only when every check passes.
//
// Tolerances and time budgets are pinned here on purpose — edit the code,
// not the environment, if they ever need to move.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "gammadiv/averages.hpp"
#include "gammadiv/cli_app.hpp"
#include "gammadiv/closed_forms.hpp"
#include "gammadiv/divisor.hpp"
#include "gammadiv/gamma_series.hpp"
#include "gammadiv/threshold.hpp"
#include "oracles.hpp"

using namespace gammadiv;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int g_failures = 0;

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

template <class Fn>
void criterion(int id, const char* name, double time_budget_ms, Fn fn) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o = fn();
    const double ms = ms_since(t0);
    if (time_budget_ms > 0.0 && ms >= time_budget_ms) {
        o.pass = false;
        char buf[64];
        std::snprintf(buf, sizeof(buf), "; over the %.0f ms budget", time_budget_ms);
        o.detail += buf;
    }
    std::printf("[%s] %2d. %s  (%s; %.2f ms)\n", o.pass ? "PASS" : "FAIL", id, name,
                o.detail.c_str(), ms);
    std::fflush(stdout);
    if (!o.pass) ++g_failures;
}

std::string fmtg(double v, const char* spec = "%.6g") {
    char buf[48];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

}  // namespace

int main() {
    std::printf("acceptance: divisor-window statistics for the Euler-Mascheroni constant\n");

    // 1. The three displayed log-free sums, as exact rationals. The q=16
    // display keeps the root inside the high window; q=4 and q=9 drop it.
    criterion(1, "displayed log-free sums at q=4,9,16 match their exact rationals", 1.0, [] {
        const double s4 = logfree_estimate(4, RootPolicy::ExcludeRoot).value;
        const double s9 = logfree_estimate(9, RootPolicy::ExcludeRoot).value;
        const double s16 = logfree_estimate(16, RootPolicy::RootInHigh).value;
        const double e4 = std::fabs(s4 - 5.0 / 12.0);
        const double e9 = std::fabs(s9 - 1271.0 / 2520.0);
        const double e16 = std::fabs(s16 - 206081.0 / 720720.0);
        const double worst = std::max({e4, e9, e16});
        Outcome o;
        o.pass = worst <= 1e-12;
        o.detail = "max |sum - exact| = " + fmtg(worst, "%.3g");
        return o;
    });

    // 2. Claimed shortfall envelope gamma - (H_n - ln(n+1)) in [1/(2n), 1/n].
    // The measured shortfall lies in (1/(2(n+1)), 1/(n+1)], which undershoots
    // the claimed lower edge at every single n, so this check fails honestly.
    criterion(2, "classic-term shortfall lies in [1/(2n), 1/n] for every n <= 10^4", 1000.0, [] {
        u64 violations = 0;
        u64 first_n = 0;
        double first_shortfall = 0.0;
        u64 inside_shifted = 0;
        for (u64 n = 1; n <= 10'000; ++n) {
            const double shortfall = kGammaRef - classic_term(n).value;
            const double lo = 0.5 / static_cast<double>(n);
            const double hi = 1.0 / static_cast<double>(n);
            if (!(shortfall >= lo && shortfall <= hi)) {
                ++violations;
                if (first_n == 0) {
                    first_n = n;
                    first_shortfall = shortfall;
                }
            }
            const double np1 = static_cast<double>(n + 1);
            if (shortfall > 0.5 / np1 && shortfall <= 1.0 / np1) ++inside_shifted;
        }
        Outcome o;
        o.pass = violations == 0;
        std::ostringstream d;
        d << violations << "/10000 n violate the claimed envelope; first at n=" << first_n
          << ": shortfall " << fmtg(first_shortfall, "%.15g") << " < 1/(2n) = "
          << fmtg(0.5 / static_cast<double>(first_n), "%.15g") << "; " << inside_shifted
          << "/10000 land in the shifted envelope (1/(2(n+1)), 1/(n+1)]";
        o.detail = d.str();
        return o;
    });

    // 3. n^2 * (gamma - logfree(n^2)) sits within 5% of 2/3 and tightens.
    criterion(3, "square-window error scaling approaches 2/3", 5000.0, [] {
        const double v100 = error_scaling(100);
        const double v316 = error_scaling(316);
        const double v1000 = error_scaling(1000);
        const double target = 2.0 / 3.0;
        const double d100 = std::fabs(v100 - target);
        const double d316 = std::fabs(v316 - target);
        const double d1000 = std::fabs(v1000 - target);
        Outcome o;
        o.pass = d100 <= 0.05 * target && d316 <= 0.05 * target && d1000 <= 0.05 * target &&
                 d1000 < d100;
        o.detail = "n=100: " + fmtg(v100, "%.12g") + ", n=316: " + fmtg(v316, "%.12g") +
                   ", n=1000: " + fmtg(v1000, "%.12g");
        return o;
    });

    // 4. The full-pairing statistic vanishes identically.
    criterion(4, "z0(q) = 0 exactly for every q <= 10^6", 10'000.0, [] {
        for (u64 q = 1; q <= 20'000; ++q) {
            if (z0(q) != 0) {
                Outcome o;
                o.detail = "z0(" + std::to_string(q) + ") != 0";
                return o;
            }
        }
        const FallacyReport report = fallacy_scan(1'000'000);
        Outcome o;
        o.pass = report.max_abs_z == 0;
        o.detail = "max |z0| over 10^6 values = " + std::to_string(report.max_abs_z);
        if (report.max_abs_z != 0) o.detail += " at q=" + std::to_string(report.argmax_q);
        return o;
    });

    // 5. The sqrt-family window average closes in on gamma.
    criterion(5, "zf-average(sqrt) mean within 0.05 of gamma, sharpening 10^5 -> 10^7", 60'000.0,
              [] {
                  SieveOptions options;
                  options.checkpoints = {100'000, 1'000'000, 10'000'000};
                  options.workers = 1;
                  const AverageSeries series =
                      zf_average(FSpec::sqrt(), 10'000'000, RootPolicy::RootInHigh, options);
                  const double e5 = std::fabs(series.checkpoints[0].mean - kGammaRef);
                  const double e6 = std::fabs(series.checkpoints[1].mean - kGammaRef);
                  const double e7 = std::fabs(series.checkpoints[2].mean - kGammaRef);
                  Outcome o;
                  o.pass = e7 <= 0.05 && e6 < e5 && e7 < e6;
                  o.detail = "means " + fmtg(series.checkpoints[0].mean, "%.8g") + " -> " +
                             fmtg(series.checkpoints[1].mean, "%.8g") + " -> " +
                             fmtg(series.checkpoints[2].mean, "%.8g") + ", |err| " +
                             fmtg(e5, "%.3g") + " -> " + fmtg(e6, "%.3g") + " -> " +
                             fmtg(e7, "%.3g");
                  return o;
              });

    // 6. Closed form, sieve, and integral oracle triangulate every alpha.
    criterion(6, "alpha-threshold triangle at alpha = 1/2, 1/3, 2/3, 1/4", 120'000.0, [] {
        const Rational alphas[] = {Rational(1, 2), Rational(1, 3), Rational(2, 3),
                                   Rational(1, 4)};
        Outcome o;
        o.pass = true;
        std::ostringstream d;
        for (const Rational& alpha : alphas) {
            SieveOptions options;
            options.checkpoints = {100'000, 10'000'000};
            const AverageSeries series = theorem2_empirical(alpha, 10'000'000, options);
            const double closed = theorem2_closed(alpha);
            const IntegralValue integral = integral_oracle(alpha, 10'000);
            const double disc5 = std::fabs(series.checkpoints[0].mean - closed);
            const double disc7 = std::fabs(series.checkpoints[1].mean - closed);
            const double gap = std::fabs(closed + integral.value - kGammaRef);
            if (!(disc7 <= 0.05 && gap <= 1e-4 && disc7 < disc5)) o.pass = false;
            if (d.tellp() > 0) d << ", ";
            d << to_string(alpha) << ": disc " << fmtg(disc7, "%.2g") << ", identity gap "
              << fmtg(gap, "%.2g");
        }
        o.detail = d.str();
        return o;
    });

    // 7. The fractional-part mean via the O(sqrt n) divisor identity.
    criterion(7, "fractional-part mean at 10^9 within 10^-3 of 1 - gamma, O(sqrt n) fast", 0.0,
              [] {
                  const auto t0 = std::chrono::steady_clock::now();
                  const double big = dlvp_average(1'000'000'000);
                  const double big_ms = ms_since(t0);
                  const double err = std::fabs(big - (1.0 - kGammaRef));

                  const u64 d_fast = divisor_summatory(1'000'000);
                  const u64 d_slow = oracle::divisor_summatory_direct(1'000'000);
                  const double float_gap =
                      std::fabs(dlvp_average(1'000'000) - oracle::dlvp_direct(1'000'000));

                  Outcome o;
                  o.pass = err <= 1e-3 && big_ms < 5000.0 && d_fast == d_slow &&
                           float_gap <= 1e-11;
                  o.detail = "value " + fmtg(big, "%.12g") + ", |err| " + fmtg(err, "%.3g") +
                             " in " + fmtg(big_ms, "%.0f") + " ms; at 10^6 the direct oracle " +
                             "agrees exactly (D=" + std::to_string(d_fast) + ", float gap " +
                             fmtg(float_gap, "%.2g") + ")";
                  return o;
              });

    // 8. Mean of the closed form over alpha.
    criterion(8, "mean over alpha at K=10^4 equals 0.644934068 within 10^-6", 1000.0, [] {
        const MeanOverAlpha mean = mean_over_alpha(10'000);
        const double err = std::fabs(mean.value - 0.644934068);
        Outcome o;
        o.pass = err <= 1e-6;
        o.detail = "value " + fmtg(mean.value, "%.15g") + ", |err| " + fmtg(err, "%.3g");
        return o;
    });

    // 9. The interior alphas that set the closed form exactly to gamma.
    criterion(9, "closed form at special_alpha(k) hits gamma to 10^-12 for k = 1..50", 1.0, [] {
        double worst = 0.0;
        for (u64 k = 1; k <= 50; ++k) {
            worst = std::max(worst, std::fabs(theorem2_closed(special_alpha(k)) - kGammaRef));
        }
        Outcome o;
        o.pass = worst <= 1e-12;
        o.detail = "max |closed(special_alpha) - gamma| = " + fmtg(worst, "%.3g");
        return o;
    });

    // 10. The doubling statistic: bounded at 10^7, and claimed to shrink
    // from 10^5 to 10^7. The exact sums say otherwise (8.5e-3 grows to
    // 1.15e-2 before the next sign change), so the second clause fails.
    criterion(10, "doubling-statistic mean small at 10^7 and below its 10^5 magnitude", 60'000.0,
              [] {
                  SieveOptions options;
                  options.checkpoints = {100'000, 10'000'000};
                  const AverageSeries series = doubling_statistic(10'000'000, options);
                  const double m5 = series.checkpoints[0].mean;
                  const double m7 = series.checkpoints[1].mean;
                  Outcome o;
                  o.pass = std::fabs(m7) <= 0.1 && std::fabs(m7) < std::fabs(m5);
                  o.detail = "|mean| at 10^5 = " + fmtg(std::fabs(m5), "%.6g") +
                             ", at 10^7 = " + fmtg(std::fabs(m7), "%.6g") +
                             (std::fabs(m7) < std::fabs(m5) ? "" : " (magnitude grew)");
                  return o;
              });

    // 11. Worker count is a speed knob, not a results knob.
    criterion(11, "1, 2, and 8 workers produce identical sums and identical CSV bytes", 0.0, [] {
        std::vector<i64> sums;
        std::vector<std::string> csv;
        for (const unsigned workers : {1u, 2u, 8u}) {
            SieveOptions options;
            options.workers = workers;
            options.stride = 100'000;
            sums.push_back(zf_average(FSpec::sqrt(), 1'000'000, RootPolicy::RootInHigh, options)
                               .final_checkpoint()
                               .exact_sum);
            std::ostringstream out, err;
            const int code = run({"zf-average", "--B", "1000000", "--stride", "100000",
                                  "--workers", std::to_string(workers)},
                                 out, err);
            if (code != 0) {
                Outcome o;
                o.detail = "CLI exited with " + std::to_string(code);
                return o;
            }
            csv.push_back(out.str());
        }
        Outcome o;
        o.pass = sums[0] == sums[1] && sums[0] == sums[2] && csv[0] == csv[1] && csv[0] == csv[2];
        o.detail = "exact sum " + std::to_string(sums[0]) + ", CSV " +
                   std::to_string(csv[0].size()) + " bytes" + (o.pass ? "" : " (diverged)");
        return o;
    });

    // 12. Sieve totals equal independent per-q brute force.
    criterion(12, "every sieve statistic matches per-q brute force over q <= 1000", 0.0, [] {
        i64 sqrt_brute = 0, power_brute = 0, half_brute = 0, const_brute = 0, t2_brute = 0,
            dbl_brute = 0;
        for (u64 q = 1; q <= 1000; ++q) {
            sqrt_brute += oracle::z_sqrt_brute(q, true);
            power_brute += oracle::z_power23_brute(q, true);
            half_brute += oracle::z_half_brute(q, true);
            const_brute += oracle::z_const_brute(q, 5, true);
            t2_brute += oracle::theorem2_brute(q, 1, 2);
            dbl_brute += oracle::doubling_brute(q);
        }
        auto final_sum = [](const AverageSeries& s) { return s.final_checkpoint().exact_sum; };
        const bool ok_sqrt = final_sum(zf_average(FSpec::sqrt(), 1000)) == sqrt_brute;
        const bool ok_power =
            final_sum(zf_average(FSpec::power(Rational(2, 3)), 1000)) == power_brute;
        const bool ok_half =
            final_sum(zf_average(FSpec::linear(Rational(1, 2)), 1000)) == half_brute;
        const bool ok_const =
            final_sum(zf_average(FSpec::constant_family(5), 1000)) == const_brute;
        const bool ok_t2 = final_sum(theorem2_empirical(Rational(1, 2), 1000)) == t2_brute;
        const bool ok_dbl = final_sum(doubling_statistic(1000)) == dbl_brute;
        Outcome o;
        o.pass = ok_sqrt && ok_power && ok_half && ok_const && ok_t2 && ok_dbl;
        std::ostringstream d;
        d << "sqrt " << (ok_sqrt ? "ok" : "MISMATCH") << " (" << sqrt_brute << "), power:2/3 "
          << (ok_power ? "ok" : "MISMATCH") << ", linear:1/2 " << (ok_half ? "ok" : "MISMATCH")
          << ", const:5 " << (ok_const ? "ok" : "MISMATCH") << ", alpha=1/2 "
          << (ok_t2 ? "ok" : "MISMATCH") << " (" << t2_brute << "), doubling "
          << (ok_dbl ? "ok" : "MISMATCH") << " (" << dbl_brute << ")";
        o.detail = d.str();
        return o;
    });

    std::printf("summary: %d/12 passed, %d failed\n", 12 - g_failures, g_failures);
    return g_failures == 0 ? 0 : 1;
}
