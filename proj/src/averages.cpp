#include "gammadiv/averages.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "gammadiv/divisor.hpp"

namespace gammadiv {

namespace {

constexpr unsigned kMaxWorkers = 64;

const char* kind_token(StatisticKind kind) {
    switch (kind) {
        case StatisticKind::ZfAverage: return "zf-average";
        case StatisticKind::Theorem2: return "theorem2";
        case StatisticKind::Doubling: return "doubling";
    }
    return "?";
}

// Splits [lo, hi] into contiguous chunks, accumulates fn(d, q) over all
// divisor pairs in each chunk, and adds the exact integer partials in
// chunk order. The partition never changes the total, so worker count
// cannot change the result.
template <class Fn>
i64 threaded_pair_sum(u64 lo, u64 hi, unsigned workers, Fn fn) {
    const u64 len = hi - lo + 1;
    if (workers <= 1 || len < 1024) {
        i64 acc = 0;
        stream_divisor_pairs(lo, hi, [&](u64 d, u64 q) { acc += fn(d, q); });
        return acc;
    }
    const u64 w = std::min<u64>(workers, len);
    std::vector<i64> part(w, 0);
    std::vector<std::thread> pool;
    pool.reserve(w);
    for (u64 i = 0; i < w; ++i) {
        const u64 chunk_lo = lo + len * i / w;
        const u64 chunk_hi = lo + len * (i + 1) / w - 1;
        pool.emplace_back([&part, i, chunk_lo, chunk_hi, fn] {
            i64 acc = 0;
            stream_divisor_pairs(chunk_lo, chunk_hi, [&](u64 d, u64 q) { acc += fn(d, q); });
            part[i] = acc;
        });
    }
    for (auto& t : pool) t.join();
    i64 total = 0;
    for (const i64 p : part) total += p;
    return total;
}

i64 doubling_contribution(u64 d, u64 q) {
    const u128 n = q;
    const u128 d2 = static_cast<u128>(d) * d;
    const u128 d4 = mul_overflows(d2, d2) ? kU128Max : d2 * d2;
    const u128 d8 = mul_overflows(d4, d4) ? kU128Max : d4 * d4;
    i64 s = 0;
    if (d4 > n && d2 < n) s += 1;
    if (d8 > n && d4 < n) s -= 2;
    return s;
}

void validate_run_spec(const RunSpec& spec) {
    if (spec.bound == 0) throw std::invalid_argument("sieve run: bound must be positive");
    if (spec.stride == 0) throw std::invalid_argument("sieve run: stride must be positive");
    switch (spec.kind) {
        case StatisticKind::ZfAverage:
            require_overflow_safe(spec.f, spec.bound);
            break;
        case StatisticKind::Theorem2: {
            if (spec.alpha.num < 1 || spec.alpha.num >= spec.alpha.den) {
                throw std::invalid_argument("theorem2: alpha must satisfy 0 < p/r < 1, got " +
                                            to_string(spec.alpha));
            }
            // Same integer comparisons (r*d^2 vs p*n) as the linear family.
            require_overflow_safe(FSpec::linear(spec.alpha), spec.bound);
            break;
        }
        case StatisticKind::Doubling:
            break;  // saturating powers are always safe
    }
}

// --- state-file plumbing ----------------------------------------------

u64 fnv1a64(const std::string& bytes) {
    u64 hash = 14695981039346656037ull;
    for (const unsigned char c : bytes) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    return hash;
}

std::string hex16(u64 value) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

[[noreturn]] void bad_state(const std::string& path, const std::string& why) {
    throw std::runtime_error("checkpoint file '" + path + "': " + why);
}

u64 parse_u64_field(const std::string& path, const std::string& text, const char* what) {
    u64 value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        bad_state(path, std::string("bad ") + what + " value '" + text + "'");
    }
    return value;
}

i64 parse_i64_field(const std::string& path, const std::string& text, const char* what) {
    i64 value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        bad_state(path, std::string("bad ") + what + " value '" + text + "'");
    }
    return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(text.substr(start));
            return out;
        }
        out.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

}  // namespace

std::string RunSpec::statistic_label() const {
    switch (kind) {
        case StatisticKind::ZfAverage:
            return std::string("zf-average f=") + f.to_string() +
                   " policy=" + gammadiv::to_string(policy);
        case StatisticKind::Theorem2:
            return "theorem2 alpha=" + gammadiv::to_string(alpha);
        case StatisticKind::Doubling:
            return "doubling";
    }
    return "?";
}

std::vector<u64> RunSpec::checkpoint_schedule() const {
    std::vector<u64> schedule;
    if (!explicit_checkpoints.empty()) {
        schedule = explicit_checkpoints;
        std::sort(schedule.begin(), schedule.end());
        schedule.erase(std::unique(schedule.begin(), schedule.end()), schedule.end());
        while (!schedule.empty() && schedule.back() > bound) schedule.pop_back();
        if (!schedule.empty() && schedule.front() == 0) schedule.erase(schedule.begin());
    } else {
        for (u64 b = stride; b < bound; b *= 2) {
            schedule.push_back(b);
            if (b > bound / 2) break;  // next doubling would pass bound (or wrap u64)
        }
    }
    if (schedule.empty() || schedule.back() != bound) schedule.push_back(bound);
    return schedule;
}

ResumableRun::ResumableRun(RunSpec spec) : spec_(std::move(spec)) {
    validate_run_spec(spec_);
    if (spec_.workers == 0) spec_.workers = 1;
    if (spec_.workers > kMaxWorkers) spec_.workers = kMaxWorkers;
    schedule_ = spec_.checkpoint_schedule();
}

u64 ResumableRun::processed() const {
    return done_.empty() ? 0 : done_.back().bound;
}

bool ResumableRun::step() {
    if (finished()) return false;
    const u64 lo = next_ == 0 ? 1 : schedule_[next_ - 1] + 1;
    const u64 hi = schedule_[next_];
    sum_ += segment_sum(lo, hi);
    done_.push_back({hi, sum_, static_cast<double>(sum_) / static_cast<double>(hi)});
    ++next_;
    return true;
}

i64 ResumableRun::segment_sum(u64 lo, u64 hi) const {
    switch (spec_.kind) {
        case StatisticKind::ZfAverage: {
            const FSpec f = spec_.f;
            const RootPolicy policy = spec_.policy;
            return threaded_pair_sum(lo, hi, spec_.workers, [f, policy](u64 d, u64 q) -> i64 {
                switch (detail::classify_unchecked(d, q, f, policy)) {
                    case WindowSide::Low: return 1;
                    case WindowSide::High: return -1;
                    case WindowSide::Neither: return 0;
                }
                return 0;
            });
        }
        case StatisticKind::Theorem2: {
            const u128 p = static_cast<u128>(spec_.alpha.num);
            const u128 r = static_cast<u128>(spec_.alpha.den);
            return threaded_pair_sum(lo, hi, spec_.workers, [p, r](u64 d, u64 q) -> i64 {
                const u128 rd2 = r * d * d;
                const u128 pn = p * q;
                if (rd2 < pn) return 1;                       // low window, d^2 < alpha n
                if (rd2 > pn && r * d <= pn) return -1;       // high window, closed top
                return 0;
            });
        }
        case StatisticKind::Doubling:
            return threaded_pair_sum(lo, hi, spec_.workers, doubling_contribution);
    }
    return 0;
}

AverageSeries ResumableRun::series() const {
    AverageSeries out;
    out.statistic = spec_.statistic_label();
    out.bound = spec_.bound;
    out.checkpoints = done_;
    return out;
}

void ResumableRun::save(const std::string& path) const {
    std::ostringstream body;
    body << "gammadiv-checkpoint v1\n";
    body << "statistic=" << kind_token(spec_.kind) << "\n";
    body << "f=" << (spec_.kind == StatisticKind::ZfAverage ? spec_.f.to_string() : "") << "\n";
    body << "policy="
         << (spec_.kind == StatisticKind::ZfAverage ? gammadiv::to_string(spec_.policy) : "")
         << "\n";
    body << "alpha=" << (spec_.kind == StatisticKind::Theorem2 ? gammadiv::to_string(spec_.alpha) : "")
         << "\n";
    body << "bound=" << spec_.bound << "\n";
    body << "stride=" << spec_.stride << "\n";
    body << "explicit=";
    for (std::size_t i = 0; i < spec_.explicit_checkpoints.size(); ++i) {
        if (i) body << ",";
        body << spec_.explicit_checkpoints[i];
    }
    body << "\n";
    body << "processed=" << processed() << "\n";
    body << "sum=" << sum_ << "\n";
    body << "done=";
    for (std::size_t i = 0; i < done_.size(); ++i) {
        if (i) body << ";";
        body << done_[i].bound << ":" << done_[i].exact_sum;
    }
    body << "\n";
    std::string text = body.str();
    text += "digest=fnv1a64:" + hex16(fnv1a64(text)) + "\n";

    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << text;
        if (!out.good()) throw std::runtime_error("checkpoint file '" + tmp + "': write failed");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        throw std::runtime_error("checkpoint file '" + path + "': rename failed");
    }
}

ResumableRun ResumableRun::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) bad_state(path, "cannot open");
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    if (lines.size() != 12) bad_state(path, "expected 12 lines");
    if (lines[0] != "gammadiv-checkpoint v1") bad_state(path, "bad magic line");

    auto field = [&](std::size_t idx, const std::string& key) -> std::string {
        const std::string prefix = key + "=";
        if (lines[idx].rfind(prefix, 0) != 0) bad_state(path, "expected '" + key + "=' on line " +
                                                                  std::to_string(idx + 1));
        return lines[idx].substr(prefix.size());
    };

    // Verify the digest over everything before the digest line.
    std::string prefix_bytes;
    for (std::size_t i = 0; i + 1 < lines.size(); ++i) prefix_bytes += lines[i] + "\n";
    const std::string digest = field(11, "digest");
    if (digest != "fnv1a64:" + hex16(fnv1a64(prefix_bytes))) {
        bad_state(path, "digest mismatch (file corrupted or edited)");
    }

    RunSpec spec;
    const std::string stat = field(1, "statistic");
    if (stat == "zf-average") spec.kind = StatisticKind::ZfAverage;
    else if (stat == "theorem2") spec.kind = StatisticKind::Theorem2;
    else if (stat == "doubling") spec.kind = StatisticKind::Doubling;
    else bad_state(path, "unknown statistic '" + stat + "'");

    const std::string f_text = field(2, "f");
    const std::string policy_text = field(3, "policy");
    const std::string alpha_text = field(4, "alpha");
    try {
        if (spec.kind == StatisticKind::ZfAverage) {
            spec.f = parse_fspec(f_text);
            const auto policy = parse_root_policy(policy_text);
            if (!policy) bad_state(path, "unknown policy '" + policy_text + "'");
            spec.policy = *policy;
        } else if (spec.kind == StatisticKind::Theorem2) {
            spec.alpha = parse_rational(alpha_text);
        }
    } catch (const std::invalid_argument& e) {
        bad_state(path, e.what());
    }

    spec.bound = parse_u64_field(path, field(5, "bound"), "bound");
    spec.stride = parse_u64_field(path, field(6, "stride"), "stride");
    const std::string explicit_text = field(7, "explicit");
    if (!explicit_text.empty()) {
        for (const std::string& item : split(explicit_text, ',')) {
            spec.explicit_checkpoints.push_back(parse_u64_field(path, item, "explicit checkpoint"));
        }
    }

    ResumableRun run{spec};

    const u64 processed = parse_u64_field(path, field(8, "processed"), "processed");
    const i64 sum = parse_i64_field(path, field(9, "sum"), "sum");
    const std::string done_text = field(10, "done");
    if (!done_text.empty()) {
        for (const std::string& item : split(done_text, ';')) {
            const auto colon = item.find(':');
            if (colon == std::string::npos) bad_state(path, "bad done entry '" + item + "'");
            const u64 b = parse_u64_field(path, item.substr(0, colon), "done bound");
            const i64 s = parse_i64_field(path, item.substr(colon + 1), "done sum");
            run.done_.push_back({b, s, static_cast<double>(s) / static_cast<double>(b)});
        }
    }

    // Progress must be a prefix of the schedule this spec implies.
    if (run.done_.size() > run.schedule_.size()) bad_state(path, "more checkpoints than schedule");
    for (std::size_t i = 0; i < run.done_.size(); ++i) {
        if (run.done_[i].bound != run.schedule_[i]) {
            bad_state(path, "checkpoint bounds do not match the schedule");
        }
    }
    const u64 expect_processed = run.done_.empty() ? 0 : run.done_.back().bound;
    const i64 expect_sum = run.done_.empty() ? 0 : run.done_.back().exact_sum;
    if (processed != expect_processed) bad_state(path, "processed does not match checkpoints");
    if (sum != expect_sum) bad_state(path, "sum does not match checkpoints");
    run.sum_ = sum;
    run.next_ = run.done_.size();
    return run;
}

ResumableRun ResumableRun::resume_or_start(RunSpec spec, const std::string& path) {
    validate_run_spec(spec);
    if (!std::filesystem::exists(path)) return ResumableRun{std::move(spec)};
    ResumableRun run = load(path);
    const RunSpec& got = run.spec();
    auto mismatch = [&](const char* what) {
        throw std::runtime_error("checkpoint file '" + path + "': was written by a different run (" +
                                 what + " differs)");
    };
    if (got.kind != spec.kind) mismatch("statistic");
    if (spec.kind == StatisticKind::ZfAverage &&
        !(got.f == spec.f && got.policy == spec.policy)) mismatch("threshold family/policy");
    if (spec.kind == StatisticKind::Theorem2 && !(got.alpha == spec.alpha)) mismatch("alpha");
    if (got.bound != spec.bound) mismatch("bound");
    if (got.stride != spec.stride) mismatch("stride");
    if (got.explicit_checkpoints != spec.explicit_checkpoints) mismatch("checkpoint list");
    run.spec_.workers = spec.workers;  // worker count never affects results
    return run;
}

namespace {

AverageSeries run_to_completion(RunSpec spec) {
    ResumableRun run{std::move(spec)};
    while (run.step()) {
    }
    return run.series();
}

}  // namespace

AverageSeries zf_average(const FSpec& f, u64 bound, RootPolicy policy,
                         const SieveOptions& options) {
    RunSpec spec;
    spec.kind = StatisticKind::ZfAverage;
    spec.f = f;
    spec.policy = policy;
    spec.bound = bound;
    spec.stride = options.stride;
    spec.explicit_checkpoints = options.checkpoints;
    spec.workers = options.workers;
    return run_to_completion(std::move(spec));
}

AverageSeries theorem2_empirical(const Rational& alpha, u64 bound, const SieveOptions& options) {
    RunSpec spec;
    spec.kind = StatisticKind::Theorem2;
    spec.alpha = alpha;
    spec.bound = bound;
    spec.stride = options.stride;
    spec.explicit_checkpoints = options.checkpoints;
    spec.workers = options.workers;
    return run_to_completion(std::move(spec));
}

AverageSeries doubling_statistic(u64 bound, const SieveOptions& options) {
    RunSpec spec;
    spec.kind = StatisticKind::Doubling;
    spec.bound = bound;
    spec.stride = options.stride;
    spec.explicit_checkpoints = options.checkpoints;
    spec.workers = options.workers;
    return run_to_completion(std::move(spec));
}

i64 z0(u64 q) {
    if (q == 0) throw std::invalid_argument("z0: q must be positive");
    i64 z = 0;
    for (const u64 d : divisors(q).divisors) {
        const u128 d2 = static_cast<u128>(d) * d;
        if (d2 < q) z += 1;
        else if (d2 > q) z -= 1;
    }
    return z;
}

FallacyReport fallacy_scan(u64 bound, const SieveOptions& options) {
    if (bound == 0) throw std::invalid_argument("fallacy_scan: bound must be positive");
    RunSpec spec;
    spec.kind = StatisticKind::ZfAverage;
    spec.f = FSpec::identity();
    spec.policy = RootPolicy::ExcludeRoot;
    spec.bound = bound;
    spec.stride = options.stride;
    spec.explicit_checkpoints = options.checkpoints;

    FallacyReport report;
    report.series.statistic = "fallacy scan of z for F(q)=q";
    report.series.bound = bound;

    constexpr u64 kBlock = 1u << 18;
    std::vector<i64> acc;
    i64 sum = 0;
    u64 block_lo = 1;
    for (const u64 checkpoint : spec.checkpoint_schedule()) {
        for (; block_lo <= checkpoint; ) {
            const u64 block_hi = std::min(checkpoint, block_lo + kBlock - 1);
            acc.assign(block_hi - block_lo + 1, 0);
            stream_divisor_pairs(block_lo, block_hi, [&](u64 d, u64 q) {
                const u128 d2 = static_cast<u128>(d) * d;
                if (d2 < q) acc[q - block_lo] += 1;
                else if (d2 > q) acc[q - block_lo] -= 1;
            });
            for (u64 i = 0; i < acc.size(); ++i) {
                sum += acc[i];
                const i64 mag = acc[i] < 0 ? -acc[i] : acc[i];
                if (mag > report.max_abs_z) {
                    report.max_abs_z = mag;
                    report.argmax_q = block_lo + i;
                }
            }
            block_lo = block_hi + 1;
        }
        report.series.checkpoints.push_back(
            {checkpoint, sum, static_cast<double>(sum) / static_cast<double>(checkpoint)});
        report.max_abs_at_checkpoint.push_back(report.max_abs_z);
    }
    return report;
}

double dlvp_average(u64 n) {
    if (n == 0) throw std::invalid_argument("dlvp_average: n must be positive");
    if (n > 10'000'000'000ull) {
        throw std::overflow_error("dlvp_average: n > 1e10 makes the O(n) harmonic sum impractical");
    }
    // sum_{k<=n} {n/k} = n*H_n - D(n), exactly.
    const double d = static_cast<double>(divisor_summatory(n));
    return harmonic(n) - d / static_cast<double>(n);
}

}  // namespace gammadiv
