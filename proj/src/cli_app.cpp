#include "gammadiv/cli_app.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gammadiv/averages.hpp"
#include "gammadiv/closed_forms.hpp"
#include "gammadiv/divisor.hpp"
#include "gammadiv/gamma_series.hpp"
#include "gammadiv/threshold.hpp"

namespace gammadiv {

namespace {

using nlohmann::json;

constexpr double kZeta2Minus1 = std::numbers::pi * std::numbers::pi / 6.0 - 1.0;

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

// One output table: named columns, rows of preformatted cells, plus the
// config echo and constants carried into the JSON form.
struct Table {
    std::string command;
    json config = json::object();
    json constants = json::object();
    std::vector<std::string> columns;
    std::vector<json> rows;  // objects keyed by column name (typed values)

    void add_row(const json& row) { rows.push_back(row); }

    std::string to_csv() const {
        std::string out;
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (i) out += ",";
            out += columns[i];
        }
        out += "\n";
        for (const json& row : rows) {
            for (std::size_t i = 0; i < columns.size(); ++i) {
                if (i) out += ",";
                const json& cell = row.at(columns[i]);
                if (cell.is_number_float()) {
                    out += fmt(cell.get<double>());
                } else if (cell.is_string()) {
                    out += cell.get<std::string>();
                } else {
                    out += cell.dump();
                }
            }
            out += "\n";
        }
        return out;
    }

    std::string to_json_text() const {
        json doc;
        doc["command"] = command;
        doc["config"] = config;
        doc["constants"] = constants;
        doc["columns"] = columns;
        doc["rows"] = rows;
        return doc.dump(2) + "\n";
    }
};

// Shared flags every subcommand carries.
struct OutputOptions {
    std::string format = "csv";
    std::string output_path;

    void attach(CLI::App* sub) {
        sub->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"csv", "json"}))
            ->capture_default_str();
        sub->add_option("--output", output_path, "write the table to this file instead of stdout");
    }
};

// Sieve knobs shared by the averaging subcommands.
struct SieveFlags {
    u64 stride = 10'000;
    unsigned workers = 1;
    std::string resume_path;

    void attach(CLI::App* sub, bool with_resume = true) {
        sub->add_option("--stride", stride, "first checkpoint; later ones double until the bound")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        sub->add_option("--workers", workers, "worker threads (never affects results)")
            ->check(CLI::Range(1u, 64u))
            ->capture_default_str();
        if (with_resume) {
            sub->add_option("--resume", resume_path,
                            "checkpoint state file: loaded when present, updated as the run advances");
        }
    }

    void echo(json& config) const {
        config["stride"] = stride;
        config["workers"] = workers;
        config["resume"] = resume_path;
    }
};

// Runs a configured sieve, honoring --resume, returning the series.
AverageSeries run_sieve(RunSpec spec, const std::string& resume_path) {
    if (resume_path.empty()) {
        ResumableRun run{std::move(spec)};
        while (run.step()) {
        }
        return run.series();
    }
    ResumableRun run = ResumableRun::resume_or_start(std::move(spec), resume_path);
    if (run.finished()) return run.series();  // nothing left; keep file as is
    while (run.step()) {
        run.save(resume_path);
    }
    return run.series();
}

void series_rows(Table& table, const AverageSeries& series, double target) {
    table.columns = {"bound", "exact_sum", "mean", "target", "abs_error"};
    for (const Checkpoint& c : series.checkpoints) {
        json row;
        row["bound"] = c.bound;
        row["exact_sum"] = c.exact_sum;
        row["mean"] = c.mean;
        row["target"] = target;
        row["abs_error"] = std::fabs(c.mean - target);
        table.add_row(row);
    }
}

void write_result(const Table& table, const OutputOptions& opts, std::ostream& out) {
    const std::string text = opts.format == "json" ? table.to_json_text() : table.to_csv();
    if (opts.output_path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(opts.output_path, std::ios::binary | std::ios::trunc);
    file << text;
    if (!file.good()) {
        throw std::runtime_error("cannot write output file '" + opts.output_path + "'");
    }
}

// Parses text that may be a rational ("2/5", "1") or a decimal ("0.25").
// is_rational reports which overload family applies.
struct AlphaArg {
    bool is_rational = false;
    Rational rational{1, 2};
    double real = 0.5;

    static AlphaArg parse(const std::string& text) {
        AlphaArg a;
        try {
            a.rational = parse_rational(text);
            a.is_rational = true;
            a.real = a.rational.value();
            return a;
        } catch (const std::invalid_argument&) {
        }
        std::size_t used = 0;
        a.real = std::stod(text, &used);  // throws on junk
        if (used != text.size()) throw std::invalid_argument("trailing junk in alpha");
        return a;
    }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"divisor-window statistics converging to the Euler-Mascheroni constant"};
    app.require_subcommand(1);

    // --- gamma-classic ---------------------------------------------------
    u64 classic_n = 1;
    OutputOptions classic_out;
    auto* classic = app.add_subcommand("gamma-classic", "classic series term H_n - ln(n+1)");
    classic->add_option("--n", classic_n, "series index")->required()->check(CLI::PositiveNumber);
    classic_out.attach(classic);

    // --- gamma-approx ----------------------------------------------------
    u64 approx_q = 1;
    std::string approx_policy = "exclude-root";
    OutputOptions approx_out;
    auto* approx = app.add_subcommand("gamma-approx", "log-free two-window estimate at q");
    approx->add_option("--q", approx_q, "window bound")->required()->check(CLI::PositiveNumber);
    approx->add_option("--policy", approx_policy,
                       "what an integral sqrt(q) does: exclude-root | root-in-high")
        ->check(CLI::IsMember({"exclude-root", "root-in-high"}))
        ->capture_default_str();
    approx_out.attach(approx);

    // --- error-scaling ---------------------------------------------------
    u64 scaling_n = 2;
    OutputOptions scaling_out;
    auto* scaling = app.add_subcommand("error-scaling",
                                       "n^2 * (gamma - logfree(n^2)), which tends to 2/3");
    scaling->add_option("--n", scaling_n, "square-root of the window bound (2..10^5)")
        ->required()
        ->check(CLI::Range(static_cast<u64>(2), static_cast<u64>(100'000)));
    scaling_out.attach(scaling);

    // --- zf-average ------------------------------------------------------
    std::string zf_f = "sqrt";
    u64 zf_bound = 0;
    std::string zf_policy = "root-in-high";
    SieveFlags zf_sieve;
    OutputOptions zf_out;
    auto* zf = app.add_subcommand("zf-average", "mean of z_F(n) over n <= B with checkpoints");
    zf->add_option("--f", zf_f, "threshold family: sqrt | power:p/r | linear:p/r | log:c | identity | const:c")
        ->capture_default_str();
    zf->add_option("--B", zf_bound, "bound")->required()->check(CLI::PositiveNumber);
    zf->add_option("--policy", zf_policy, "exclude-root | root-in-high")
        ->check(CLI::IsMember({"exclude-root", "root-in-high"}))
        ->capture_default_str();
    zf_sieve.attach(zf);
    zf_out.attach(zf);

    // --- fallacy ---------------------------------------------------------
    u64 fallacy_bound = 0;
    u64 fallacy_stride = 10'000;
    OutputOptions fallacy_out;
    auto* fallacy = app.add_subcommand(
        "fallacy", "scan z for F(q)=q: every value is 0, so its mean proves nothing");
    fallacy->add_option("--B", fallacy_bound, "bound")->required()->check(CLI::PositiveNumber);
    fallacy->add_option("--stride", fallacy_stride, "first checkpoint; later ones double")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    fallacy_out.attach(fallacy);

    // --- theorem2 --------------------------------------------------------
    std::string t2_alpha = "1/2";
    u64 t2_bound = 0;
    u64 t2_depth = 10'000;
    SieveFlags t2_sieve;
    OutputOptions t2_out;
    auto* t2 = app.add_subcommand(
        "theorem2", "alpha-threshold mean vs its closed form vs the integral oracle");
    t2->add_option("--alpha", t2_alpha, "rational p/r strictly inside (0,1)")->required();
    t2->add_option("--B", t2_bound, "bound")->required()->check(CLI::PositiveNumber);
    t2->add_option("--K", t2_depth, "integral series depth")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    t2_sieve.attach(t2);
    t2_out.attach(t2);

    // --- dlvp ------------------------------------------------------------
    u64 dlvp_n = 0;
    OutputOptions dlvp_out;
    auto* dlvp = app.add_subcommand("dlvp", "mean of the fractional parts {n/k}, k <= n");
    dlvp->add_option("--n", dlvp_n, "bound (up to 10^10)")->required()->check(CLI::PositiveNumber);
    dlvp_out.attach(dlvp);

    // --- doubling --------------------------------------------------------
    u64 doubling_bound = 0;
    SieveFlags doubling_sieve;
    OutputOptions doubling_out;
    auto* doubling = app.add_subcommand(
        "doubling", "mean of the window-doubling statistic (tends to 0, oscillating)");
    doubling->add_option("--B", doubling_bound, "bound")->required()->check(CLI::PositiveNumber);
    doubling_sieve.attach(doubling);
    doubling_out.attach(doubling);

    // --- alpha-curve -----------------------------------------------------
    u64 curve_samples = 0;
    double curve_from = 0.0;
    double curve_to = 0.0;
    OutputOptions curve_out;
    auto* curve = app.add_subcommand(
        "alpha-curve", "closed-form curve A(alpha) with both one-sided limits at jumps");
    curve->add_option("--samples", curve_samples, "grid points (>= 2)")
        ->required()
        ->check(CLI::Range(static_cast<u64>(2), static_cast<u64>(10'000'000)));
    curve->add_option("--from", curve_from, "left end (>= 1e-4)")->required();
    curve->add_option("--to", curve_to, "right end (<= 1)")->required();
    curve_out.attach(curve);

    // --- integral-check --------------------------------------------------
    std::string ic_alpha;
    u64 ic_depth = 10'000;
    OutputOptions ic_out;
    auto* ic = app.add_subcommand(
        "integral-check", "closed form + integral oracle, which must reproduce gamma");
    ic->add_option("--alpha", ic_alpha, "rational p/r or decimal in (0,1]")->required();
    ic->add_option("--K", ic_depth, "series depth (at least ~1/alpha + 1)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    ic_out.attach(ic);

    // --- mean-alpha --------------------------------------------------------
    u64 ma_depth = 0;
    OutputOptions ma_out;
    auto* ma = app.add_subcommand("mean-alpha",
                                  "mean of A over alpha in (0,1]: tends to pi^2/6 - 1");
    ma->add_option("--K", ma_depth, "series depth")->required()->check(CLI::PositiveNumber);
    ma_out.attach(ma);

    // --- parse -------------------------------------------------------------
    std::vector<std::string> argv_storage;
    argv_storage.reserve(args.size() + 1);
    argv_storage.push_back("gammadiv");
    for (const std::string& a : args) argv_storage.push_back(a);
    std::vector<const char*> argv;
    argv.reserve(argv_storage.size());
    for (const std::string& a : argv_storage) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 1;
    }

    // Domain validation beyond CLI11's type checks: anything malformed in
    // the structured string arguments is still a usage error.
    FSpec zf_family = FSpec::sqrt();
    Rational t2_ratio{1, 2};
    AlphaArg ic_arg;
    try {
        if (zf->parsed()) zf_family = parse_fspec(zf_f);
        if (t2->parsed()) {
            t2_ratio = parse_rational(t2_alpha);
            if (t2_ratio.num < 1 || t2_ratio.num >= t2_ratio.den) {
                throw std::invalid_argument("theorem2: alpha must lie strictly inside (0,1)");
            }
        }
        if (ic->parsed()) {
            ic_arg = AlphaArg::parse(ic_alpha);
            if (!(ic_arg.real > 0.0) || ic_arg.real > 1.0) {
                throw std::invalid_argument("integral-check: alpha must lie in (0,1]");
            }
        }
        if (curve->parsed()) {
            if (!(curve_from >= 1e-4) || !(curve_from < curve_to) || !(curve_to <= 1.0)) {
                throw std::invalid_argument(
                    "alpha-curve: range must satisfy 1e-4 <= from < to <= 1");
            }
        }
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return 1;
    }

    try {
        Table table;
        table.constants["gamma_ref"] = kGammaRef;
        OutputOptions* opts = nullptr;

        if (classic->parsed()) {
            table.command = "gamma-classic";
            table.config = {{"n", classic_n}, {"format", classic_out.format}};
            const GammaEstimate est = classic_term(classic_n);
            table.columns = {"n", "value", "target", "abs_error", "guaranteed_abs_error"};
            table.add_row({{"n", classic_n},
                           {"value", est.value},
                           {"target", kGammaRef},
                           {"abs_error", std::fabs(est.value - kGammaRef)},
                           {"guaranteed_abs_error", est.guaranteed_abs_error}});
            opts = &classic_out;
        } else if (approx->parsed()) {
            table.command = "gamma-approx";
            table.config = {{"q", approx_q}, {"policy", approx_policy}, {"format", approx_out.format}};
            const GammaEstimate est = logfree_estimate(approx_q, *parse_root_policy(approx_policy));
            table.columns = {"q", "policy", "value", "target", "abs_error", "guaranteed_abs_error"};
            table.add_row({{"q", approx_q},
                           {"policy", approx_policy},
                           {"value", est.value},
                           {"target", kGammaRef},
                           {"abs_error", std::fabs(est.value - kGammaRef)},
                           {"guaranteed_abs_error", est.guaranteed_abs_error}});
            opts = &approx_out;
        } else if (scaling->parsed()) {
            table.command = "error-scaling";
            table.config = {{"n", scaling_n}, {"format", scaling_out.format}};
            const double value = error_scaling(scaling_n);
            const double target = 2.0 / 3.0;
            table.columns = {"n", "value", "target", "abs_error"};
            table.add_row({{"n", scaling_n},
                           {"value", value},
                           {"target", target},
                           {"abs_error", std::fabs(value - target)}});
            opts = &scaling_out;
        } else if (zf->parsed()) {
            table.command = "zf-average";
            table.config = {{"f", zf_family.to_string()},
                            {"B", zf_bound},
                            {"policy", zf_policy},
                            {"format", zf_out.format}};
            zf_sieve.echo(table.config);
            RunSpec spec;
            spec.kind = StatisticKind::ZfAverage;
            spec.f = zf_family;
            spec.policy = *parse_root_policy(zf_policy);
            spec.bound = zf_bound;
            spec.stride = zf_sieve.stride;
            spec.workers = zf_sieve.workers;
            const AverageSeries series = run_sieve(std::move(spec), zf_sieve.resume_path);
            series_rows(table, series, kGammaRef);
            opts = &zf_out;
        } else if (fallacy->parsed()) {
            table.command = "fallacy";
            table.config = {{"B", fallacy_bound},
                            {"stride", fallacy_stride},
                            {"format", fallacy_out.format}};
            SieveOptions options;
            options.stride = fallacy_stride;
            const FallacyReport report = fallacy_scan(fallacy_bound, options);
            series_rows(table, report.series, 0.0);
            table.columns.push_back("max_abs_z");
            for (std::size_t i = 0; i < table.rows.size(); ++i) {
                table.rows[i]["max_abs_z"] = report.max_abs_at_checkpoint[i];
            }
            opts = &fallacy_out;
        } else if (t2->parsed()) {
            table.command = "theorem2";
            table.config = {{"alpha", to_string(t2_ratio)},
                            {"B", t2_bound},
                            {"K", t2_depth},
                            {"format", t2_out.format}};
            t2_sieve.echo(table.config);
            RunSpec spec;
            spec.kind = StatisticKind::Theorem2;
            spec.alpha = t2_ratio;
            spec.bound = t2_bound;
            spec.stride = t2_sieve.stride;
            spec.workers = t2_sieve.workers;
            const AverageSeries series = run_sieve(std::move(spec), t2_sieve.resume_path);
            const double closed = theorem2_closed(t2_ratio);
            const IntegralValue integral = integral_oracle(t2_ratio, t2_depth);
            series_rows(table, series, closed);
            table.columns.insert(table.columns.end(),
                                 {"integral_value", "integral_tail_bound", "identity_gap"});
            const double gap = std::fabs(closed + integral.value - kGammaRef);
            for (json& row : table.rows) {
                row["integral_value"] = integral.value;
                row["integral_tail_bound"] = integral.tail_bound;
                row["identity_gap"] = gap;
            }
            table.constants["closed_form"] = closed;
            table.constants["closed_form_index"] = closed_form_index(t2_ratio);
            opts = &t2_out;
        } else if (dlvp->parsed()) {
            table.command = "dlvp";
            table.config = {{"n", dlvp_n}, {"format", dlvp_out.format}};
            const double value = dlvp_average(dlvp_n);
            const double target = 1.0 - kGammaRef;
            table.columns = {"n", "value", "target", "abs_error"};
            table.add_row({{"n", dlvp_n},
                           {"value", value},
                           {"target", target},
                           {"abs_error", std::fabs(value - target)}});
            opts = &dlvp_out;
        } else if (doubling->parsed()) {
            table.command = "doubling";
            table.config = {{"B", doubling_bound}, {"format", doubling_out.format}};
            doubling_sieve.echo(table.config);
            RunSpec spec;
            spec.kind = StatisticKind::Doubling;
            spec.bound = doubling_bound;
            spec.stride = doubling_sieve.stride;
            spec.workers = doubling_sieve.workers;
            const AverageSeries series = run_sieve(std::move(spec), doubling_sieve.resume_path);
            series_rows(table, series, 0.0);
            opts = &doubling_out;
        } else if (curve->parsed()) {
            table.command = "alpha-curve";
            table.config = {{"samples", curve_samples},
                            {"from", curve_from},
                            {"to", curve_to},
                            {"format", curve_out.format}};
            table.columns = {"alpha", "value", "side"};
            for (const CurvePoint& p : alpha_curve(curve_samples, curve_from, curve_to)) {
                table.add_row({{"alpha", p.alpha}, {"value", p.value}, {"side", p.side}});
            }
            opts = &curve_out;
        } else if (ic->parsed()) {
            table.command = "integral-check";
            table.config = {{"alpha", ic_alpha}, {"K", ic_depth}, {"format", ic_out.format}};
            double closed = 0.0;
            IntegralValue integral;
            if (ic_arg.is_rational) {
                closed = theorem2_closed(ic_arg.rational);
                integral = integral_oracle(ic_arg.rational, ic_depth);
            } else {
                closed = theorem2_closed(ic_arg.real);
                integral = integral_oracle(ic_arg.real, ic_depth);
            }
            const double identity_sum = closed + integral.value;
            table.columns = {"alpha", "K", "closed_form", "integral_value",
                             "integral_tail_bound", "identity_sum", "target", "identity_gap"};
            table.add_row({{"alpha", ic_arg.real},
                           {"K", ic_depth},
                           {"closed_form", closed},
                           {"integral_value", integral.value},
                           {"integral_tail_bound", integral.tail_bound},
                           {"identity_sum", identity_sum},
                           {"target", kGammaRef},
                           {"identity_gap", std::fabs(identity_sum - kGammaRef)}});
            opts = &ic_out;
        } else if (ma->parsed()) {
            table.command = "mean-alpha";
            table.config = {{"K", ma_depth}, {"format", ma_out.format}};
            const MeanOverAlpha mean = mean_over_alpha(ma_depth);
            table.columns = {"K", "value", "target", "abs_error", "tail_bound"};
            table.add_row({{"K", ma_depth},
                           {"value", mean.value},
                           {"target", kZeta2Minus1},
                           {"abs_error", std::fabs(mean.value - kZeta2Minus1)},
                           {"tail_bound", mean.tail_bound}});
            opts = &ma_out;
        }

        if (opts == nullptr) {
            err << "error: no subcommand selected\n";
            return 1;
        }
        write_result(table, *opts, out);
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace gammadiv
