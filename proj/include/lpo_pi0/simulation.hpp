#pragma once

#include "lpo_pi0/error.hpp"
#include "lpo_pi0/histogram.hpp"
#include "lpo_pi0/json_writer.hpp"
#include "lpo_pi0/mtp.hpp"
#include "lpo_pi0/pi0_estimator.hpp"
#include "lpo_pi0/rng.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace lpo_pi0 {

// --------------------------------------------------------------------------------------------------------------------
// Scenarios and generators
// --------------------------------------------------------------------------------------------------------------------

enum class ScenarioKind { beta_tail, trunc_beta, ushape };

inline std::string_view to_string(ScenarioKind kind) noexcept
{
    switch (kind) {
    case ScenarioKind::beta_tail: return "beta_tail";
    case ScenarioKind::trunc_beta: return "trunc_beta";
    case ScenarioKind::ushape: return "ushape";
    }
    return "beta_tail";
}

inline constexpr std::string_view valid_scenario_kinds = "beta_tail, trunc_beta, ushape";

inline std::optional<ScenarioKind> parse_scenario_kind(std::string_view name) noexcept
{
    if (name == "beta_tail") return ScenarioKind::beta_tail;
    if (name == "trunc_beta") return ScenarioKind::trunc_beta;
    if (name == "ushape") return ScenarioKind::ushape;
    return std::nullopt;
}

struct ScenarioSpec {
    ScenarioKind kind = ScenarioKind::beta_tail;
    double pi0 = 0.9;
    double s = 10.0;          ///< beta shape (beta_tail, trunc_beta)
    double lambda_star = 1.0; ///< support end of the alternative (trunc_beta)
    double a = -1.5;          ///< left alternative mean (ushape)
    double b = 1.5;           ///< right alternative mean (ushape)
    double sd = 0.5;          ///< alternative standard deviation (ushape)
    std::int64_t m = 1000;
    std::int64_t reps = 500;
    std::uint64_t seed = 1;
};

inline void validate(const ScenarioSpec& spec)
{
    auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidScenario, what); };
    if (!(spec.pi0 > 0.0 && spec.pi0 <= 1.0)) fail("pi0 must lie in (0, 1]");
    if (spec.m < 2) fail("m must be at least 2");
    if (spec.reps < 1) fail("reps must be at least 1");
    switch (spec.kind) {
    case ScenarioKind::trunc_beta:
        if (!(spec.lambda_star > 0.0 && spec.lambda_star <= 1.0)) fail("lambda_star must lie in (0, 1]");
        [[fallthrough]];
    case ScenarioKind::beta_tail:
        if (!(spec.s > 0.0) || !std::isfinite(spec.s)) fail("s must be positive");
        break;
    case ScenarioKind::ushape:
        if (!(spec.a < 0.0 && spec.b > 0.0)) fail("ushape needs a < 0 < b");
        if (!(spec.sd > 0.0) || !std::isfinite(spec.sd)) fail("sd must be positive");
        break;
    }
}

struct LabeledSample {
    PValueSample sample;
    std::vector<bool> is_null; ///< in generation (original) order
};

namespace detail {

template <class Alternative>
LabeledSample two_group(double pi0, std::int64_t m, RandomStream& rng, Alternative&& alternative)
{
    std::vector<double> values(static_cast<std::size_t>(m));
    std::vector<bool> is_null(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        is_null[i] = rng.bernoulli(pi0);
        values[i] = is_null[i] ? rng.uniform() : alternative(rng);
    }
    return {load_sample(values), std::move(is_null)};
}

} // namespace detail

/// Inverse CDF of the density (s / lambda_star) (1 - t / lambda_star)^(s-1) on
/// [0, lambda_star], applied to 1 - u.
inline double beta_tail_draw(double u, double s, double lambda_star = 1.0) noexcept
{
    return lambda_star * (1.0 - std::pow(u, 1.0 / s));
}

/// Alternative density s (1 - t)^(s-1) on [0, 1].
inline LabeledSample sample_beta_tail(double pi0, double s, std::int64_t m, RandomStream& rng)
{
    return detail::two_group(pi0, m, rng, [s](RandomStream& r) { return beta_tail_draw(r.uniform(), s); });
}

/// Alternative density (s / lambda_star) (1 - t / lambda_star)^(s-1) on [0, lambda_star].
inline LabeledSample sample_trunc_beta(double pi0, double s, double lambda_star, std::int64_t m, RandomStream& rng)
{
    return detail::two_group(pi0, m, rng,
                             [s, lambda_star](RandomStream& r) { return beta_tail_draw(r.uniform(), s, lambda_star); });
}

/// Null statistic standard deviation: the null variance is 0.025.
inline const double ushape_null_sd = std::sqrt(0.025);

/// One-sided p-value 1 - Phi(x / sigma0).
inline double ushape_p_value(double x) noexcept { return 0.5 * std::erfc(x / ushape_null_sd / std::numbers::sqrt2); }

/// Statistic from pi0 N(0, 0.025) + (1-pi0)/2 N(a, sd^2) + (1-pi0)/2 N(b, sd^2).
inline LabeledSample sample_ushape(double pi0, double a, double b, double sd, std::int64_t m, RandomStream& rng)
{
    std::vector<double> values(static_cast<std::size_t>(m));
    std::vector<bool> is_null(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        is_null[i] = rng.bernoulli(pi0);
        double x;
        if (is_null[i]) {
            x = rng.normal(0.0, ushape_null_sd);
        } else {
            const double mean = rng.bernoulli(0.5) ? a : b;
            x = rng.normal(mean, sd);
        }
        values[i] = ushape_p_value(x);
    }
    return {load_sample(values), std::move(is_null)};
}

inline LabeledSample generate(const ScenarioSpec& spec, RandomStream& rng)
{
    switch (spec.kind) {
    case ScenarioKind::beta_tail: return sample_beta_tail(spec.pi0, spec.s, spec.m, rng);
    case ScenarioKind::trunc_beta: return sample_trunc_beta(spec.pi0, spec.s, spec.lambda_star, spec.m, rng);
    case ScenarioKind::ushape: return sample_ushape(spec.pi0, spec.a, spec.b, spec.sd, spec.m, rng);
    }
    throw Error(ErrorCode::InvalidScenario, "unknown scenario kind");
}

// --------------------------------------------------------------------------------------------------------------------
// Procedures
// --------------------------------------------------------------------------------------------------------------------

enum class ProcedureKind { bh, oracle, plugin };

struct Procedure {
    ProcedureKind kind = ProcedureKind::bh;
    Pi0Method method = Pi0Method::lpo; ///< plugin only

    std::string name() const
    {
        switch (kind) {
        case ProcedureKind::bh: return "bh";
        case ProcedureKind::oracle: return "oracle";
        case ProcedureKind::plugin: return "plugin_" + std::string(to_string(method));
        }
        return "bh";
    }

    friend bool operator==(const Procedure&, const Procedure&) = default;
};

inline std::optional<Procedure> parse_procedure(std::string_view name)
{
    if (name == "bh") return Procedure{ProcedureKind::bh};
    if (name == "oracle") return Procedure{ProcedureKind::oracle};
    if (name.starts_with("plugin_")) {
        if (auto method = parse_method(name.substr(7))) return Procedure{ProcedureKind::plugin, *method};
    }
    return std::nullopt;
}

// --------------------------------------------------------------------------------------------------------------------
// Replicates and summaries
// --------------------------------------------------------------------------------------------------------------------

struct RunOptions {
    double alpha = 0.15;
    double delta = 0.0;
    EstimatorConfig estimator{}; ///< n_min, n_max and lambda for every estimator
    unsigned threads = 1;        ///< replicates run concurrently; results do not depend on it
};

struct ReplicateResult {
    std::int64_t rep = 0;
    std::uint64_t seed_used = 0;
    double pi0_true = 1.0;
    bool failed = false;
    std::string error;
    std::vector<double> pi0_hat; ///< clamped, one per method
    std::vector<double> fdp;     ///< one per procedure
    std::vector<double> fnr;
};

struct MethodSummary {
    std::string name;
    double bias = 0.0; ///< natural units
    double std_dev = 0.0;
    double mse = 0.0;
};

struct ProcedureSummary {
    std::string name;
    double fdr = 0.0;
    double fnr = 0.0;
    double fdr_se = 0.0; ///< Monte-Carlo standard error of fdr
};

struct SummaryTable {
    std::vector<MethodSummary> methods;
    std::vector<ProcedureSummary> procedures;
    std::int64_t reps = 0;
    std::int64_t failed = 0;

    bool valid() const noexcept { return failed == 0; }
};

struct ScenarioResult {
    ScenarioSpec spec;
    std::vector<Pi0Method> methods;
    std::vector<Procedure> procedures;
    RunOptions options;
    std::vector<ReplicateResult> replicates;
    SummaryTable summary;
};

/// Neumaier-compensated sum.
class CompensatedSum {
public:
    void add(double x) noexcept
    {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            carry_ += (sum_ - t) + x;
        } else {
            carry_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const noexcept { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

inline ReplicateResult run_replicate(const ScenarioSpec& spec, const std::vector<Pi0Method>& methods,
                                     const std::vector<Procedure>& procedures, const RunOptions& options,
                                     std::int64_t rep)
{
    ReplicateResult out;
    out.rep = rep;
    out.seed_used = stream_seed(spec.seed, static_cast<std::uint64_t>(rep));
    out.pi0_true = spec.pi0;
    try {
        RandomStream rng(spec.seed, static_cast<std::uint64_t>(rep));
        const auto data = generate(spec, rng);

        std::map<Pi0Method, Pi0Estimate> cache;
        auto estimate_for = [&](Pi0Method method) -> const Pi0Estimate& {
            auto it = cache.find(method);
            if (it == cache.end()) {
                auto cfg = options.estimator;
                cfg.method = method;
                cfg.threads = 1;
                it = cache.emplace(method, estimate(data.sample, cfg)).first;
            }
            return it->second;
        };

        for (auto method : methods) out.pi0_hat.push_back(estimate_for(method).pi0);
        for (const auto& proc : procedures) {
            MtpResult result;
            switch (proc.kind) {
            case ProcedureKind::bh: result = bh_procedure(data.sample, options.alpha); break;
            case ProcedureKind::oracle: result = plugin_mtp(data.sample, options.alpha, spec.pi0, 0.0); break;
            case ProcedureKind::plugin:
                result = plugin_mtp(data.sample, options.alpha, estimate_for(proc.method), options.delta);
                break;
            }
            const auto metrics = error_metrics(result, data.is_null);
            out.fdp.push_back(metrics.fdp);
            out.fnr.push_back(metrics.fnr);
        }
    } catch (const std::exception& e) {
        out.failed = true;
        out.error = e.what();
        out.pi0_hat.clear();
        out.fdp.clear();
        out.fnr.clear();
    }
    return out;
}

/// Bias, population standard deviation and MSE of pi0_hat - pi0_true, and mean
/// FDP/FNR, over the successful replicates. Replicates may come from several
/// conditions (pooled rows).
inline SummaryTable summarize(const std::vector<ReplicateResult>& replicates, const std::vector<Pi0Method>& methods,
                              const std::vector<Procedure>& procedures)
{
    SummaryTable table;
    table.reps = static_cast<std::int64_t>(replicates.size());
    std::vector<const ReplicateResult*> ok;
    for (const auto& r : replicates) {
        if (r.failed) {
            ++table.failed;
        } else {
            ok.push_back(&r);
        }
    }
    const double n = static_cast<double>(ok.size());

    auto mean_of = [&](auto&& value) {
        CompensatedSum sum;
        for (const auto* r : ok) sum.add(value(*r));
        return sum.value() / n;
    };

    for (std::size_t j = 0; j < methods.size(); ++j) {
        MethodSummary row;
        row.name = std::string(to_string(methods[j]));
        if (!ok.empty()) {
            row.bias = mean_of([&](const ReplicateResult& r) { return r.pi0_hat[j] - r.pi0_true; });
            const double variance = mean_of([&](const ReplicateResult& r) {
                const double d = r.pi0_hat[j] - r.pi0_true - row.bias;
                return d * d;
            });
            row.std_dev = std::sqrt(variance);
            row.mse = row.bias * row.bias + variance;
        }
        table.methods.push_back(row);
    }
    for (std::size_t j = 0; j < procedures.size(); ++j) {
        ProcedureSummary row;
        row.name = procedures[j].name();
        if (!ok.empty()) {
            row.fdr = mean_of([&](const ReplicateResult& r) { return r.fdp[j]; });
            row.fnr = mean_of([&](const ReplicateResult& r) { return r.fnr[j]; });
            const double variance = mean_of([&](const ReplicateResult& r) {
                const double d = r.fdp[j] - row.fdr;
                return d * d;
            });
            row.fdr_se = std::sqrt(variance / n);
        }
        table.procedures.push_back(row);
    }
    return table;
}

inline ScenarioResult run_scenario(const ScenarioSpec& spec, const std::vector<Pi0Method>& methods,
                                   const std::vector<Procedure>& procedures, const RunOptions& options = {})
{
    validate(spec);
    check_alpha(options.alpha);
    if (!(options.delta >= 0.0) || !std::isfinite(options.delta)) {
        throw Error(ErrorCode::InvalidDelta, "delta must be a finite value >= 0");
    }
    if (options.estimator.n_min < 1 || options.estimator.n_min > options.estimator.n_max) {
        throw Error(ErrorCode::InvalidRange, "estimator needs 1 <= n_min <= n_max");
    }

    ScenarioResult out;
    out.spec = spec;
    out.methods = methods;
    out.procedures = procedures;
    out.options = options;
    out.replicates.resize(static_cast<std::size_t>(spec.reps));

    const auto reps = static_cast<std::size_t>(spec.reps);
    const unsigned workers = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(reps)));
    if (workers == 1) {
        for (std::size_t r = 0; r < reps; ++r) {
            out.replicates[r] = run_replicate(spec, methods, procedures, options, static_cast<std::int64_t>(r));
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t r = next++; r < reps; r = next++) {
                    out.replicates[r] = run_replicate(spec, methods, procedures, options, static_cast<std::int64_t>(r));
                }
            });
        }
    }
    out.summary = summarize(out.replicates, methods, procedures);
    return out;
}

inline ScenarioResult run_scenario(const ScenarioSpec& spec, const std::vector<Pi0Method>& methods,
                                   const std::vector<Procedure>& procedures, double alpha, RunOptions options = {})
{
    options.alpha = alpha;
    return run_scenario(spec, methods, procedures, options);
}

/// Summary over the replicates of several runs with identical method and
/// procedure lists.
inline SummaryTable pooled_summary(const std::vector<ScenarioResult>& runs)
{
    if (runs.empty()) return {};
    std::vector<ReplicateResult> all;
    for (const auto& run : runs) {
        if (run.methods != runs.front().methods || run.procedures != runs.front().procedures) {
            throw Error(ErrorCode::InvalidConfig, "pooled runs must share methods and procedures");
        }
        all.insert(all.end(), run.replicates.begin(), run.replicates.end());
    }
    return summarize(all, runs.front().methods, runs.front().procedures);
}

/// |pi0_hat(m) - pi0| for one replicate at each size; stream i serves sizes[i].
inline std::vector<double> consistency_probe(double pi0, ScenarioSpec model, const std::vector<std::int64_t>& sizes,
                                             std::uint64_t seed, const EstimatorConfig& cfg = {})
{
    std::vector<double> errors;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        model.m = sizes[i];
        validate(model);
        RandomStream rng(seed, i);
        const auto data = generate(model, rng);
        errors.push_back(std::abs(estimate(data.sample, cfg).pi0 - pi0));
    }
    return errors;
}

// --------------------------------------------------------------------------------------------------------------------
// Output
// --------------------------------------------------------------------------------------------------------------------

/// Two CSV blocks separated by a blank line, values multiplied by 100.
inline std::string summary_csv(const SummaryTable& table)
{
    std::ostringstream out;
    if (!table.valid()) out << "# invalid: " << table.failed << " of " << table.reps << " replicates failed\n";
    out << "method,bias_x100,std_x100,mse_x100\n";
    for (const auto& row : table.methods) {
        out << row.name << ',' << json_number(100.0 * row.bias) << ',' << json_number(100.0 * row.std_dev) << ','
            << json_number(100.0 * row.mse) << '\n';
    }
    out << "\nprocedure,fdr_x100,fnr_x100\n";
    for (const auto& row : table.procedures) {
        out << row.name << ',' << json_number(100.0 * row.fdr) << ',' << json_number(100.0 * row.fnr) << '\n';
    }
    return out.str();
}

inline std::string scenario_json(const ScenarioSpec& spec)
{
    JsonObject o;
    o.string("kind", to_string(spec.kind)).number("pi0", spec.pi0);
    if (spec.kind != ScenarioKind::ushape) o.number("s", spec.s);
    if (spec.kind == ScenarioKind::trunc_beta) o.number("lambda_star", spec.lambda_star);
    if (spec.kind == ScenarioKind::ushape) o.number("a", spec.a).number("b", spec.b).number("sd", spec.sd);
    o.integer("m", spec.m).integer("reps", spec.reps).raw("seed", std::to_string(spec.seed));
    return o.str();
}

inline std::string summary_json(const SummaryTable& table)
{
    std::string methods = "[", procedures = "[";
    for (const auto& row : table.methods) {
        if (methods.size() > 1) methods += ',';
        methods += JsonObject{}.string("method", row.name).number("bias", row.bias).number("std", row.std_dev).number("mse", row.mse).str();
    }
    for (const auto& row : table.procedures) {
        if (procedures.size() > 1) procedures += ',';
        procedures += JsonObject{}
                          .string("procedure", row.name)
                          .number("fdr", row.fdr)
                          .number("fnr", row.fnr)
                          .number("fdr_se", row.fdr_se)
                          .str();
    }
    return JsonObject{}
        .integer("reps", table.reps)
        .integer("failed", table.failed)
        .boolean("valid", table.valid())
        .raw("methods", methods + "]")
        .raw("procedures", procedures + "]")
        .str();
}

/// Full audit dump in natural units, one object per replicate.
inline std::string result_json(const ScenarioResult& result)
{
    std::string methods = "[", procedures = "[", reps = "[";
    for (auto m : result.methods) {
        if (methods.size() > 1) methods += ',';
        methods += json_string(to_string(m));
    }
    for (const auto& p : result.procedures) {
        if (procedures.size() > 1) procedures += ',';
        procedures += json_string(p.name());
    }
    for (const auto& r : result.replicates) {
        if (reps.size() > 1) reps += ',';
        JsonObject o;
        o.integer("rep", r.rep).raw("seed_used", std::to_string(r.seed_used)).boolean("failed", r.failed);
        if (r.failed) o.string("error", r.error);
        o.raw("pi0_hat", json_array(r.pi0_hat)).raw("fdp", json_array(r.fdp)).raw("fnr", json_array(r.fnr));
        reps += o.str();
    }
    return JsonObject{}
        .raw("scenario", scenario_json(result.spec))
        .number("alpha", result.options.alpha)
        .number("delta", result.options.delta)
        .integer("n_min", result.options.estimator.n_min)
        .integer("n_max", result.options.estimator.n_max)
        .raw("methods", methods + "]")
        .raw("procedures", procedures + "]")
        .raw("summary", summary_json(result.summary))
        .raw("replicates", reps + "]")
        .str();
}

// --------------------------------------------------------------------------------------------------------------------
// Scenario files
// --------------------------------------------------------------------------------------------------------------------

struct ScenarioFile {
    ScenarioSpec spec;
    std::vector<Pi0Method> methods{Pi0Method::lpo, Pi0Method::loo, Pi0Method::storey};
    std::vector<Procedure> procedures{{ProcedureKind::bh}, {ProcedureKind::oracle}, {ProcedureKind::plugin, Pi0Method::lpo}};
    RunOptions options;
};

namespace detail {

inline std::string_view trim(std::string_view s) noexcept
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <class T>
T parse_scalar(std::string_view text, std::string_view key, std::size_t line)
{
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw Error(ErrorCode::InvalidScenario, "line " + std::to_string(line) + ": cannot parse value '" +
                                                    std::string(text) + "' for key '" + std::string(key) + "'");
    }
    return value;
}

inline std::vector<std::string_view> split_list(std::string_view text)
{
    std::vector<std::string_view> out;
    while (!text.empty()) {
        const auto comma = text.find(',');
        out.push_back(trim(text.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

} // namespace detail

/// Reads `key = value` lines; '#' starts a comment. `kind` is required.
inline ScenarioFile parse_scenario(std::istream& in)
{
    ScenarioFile file;
    bool have_kind = false;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string_view text = raw;
        if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
        text = detail::trim(text);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorCode::InvalidScenario, "line " + std::to_string(line) + ": expected key = value");
        }
        const auto key = detail::trim(text.substr(0, eq));
        const auto value = detail::trim(text.substr(eq + 1));
        auto real = [&] { return detail::parse_scalar<double>(value, key, line); };
        auto whole = [&] { return detail::parse_scalar<std::int64_t>(value, key, line); };

        if (key == "kind") {
            const auto kind = parse_scenario_kind(value);
            if (!kind) {
                throw Error(ErrorCode::InvalidScenario, "line " + std::to_string(line) + ": unknown kind '" +
                                                            std::string(value) + "'; valid kinds: " +
                                                            std::string(valid_scenario_kinds));
            }
            file.spec.kind = *kind;
            have_kind = true;
        } else if (key == "pi0") {
            file.spec.pi0 = real();
        } else if (key == "s") {
            file.spec.s = real();
        } else if (key == "lambda_star") {
            file.spec.lambda_star = real();
        } else if (key == "a") {
            file.spec.a = real();
        } else if (key == "b") {
            file.spec.b = real();
        } else if (key == "sd") {
            file.spec.sd = real();
        } else if (key == "m") {
            file.spec.m = whole();
        } else if (key == "reps") {
            file.spec.reps = whole();
        } else if (key == "seed") {
            file.spec.seed = detail::parse_scalar<std::uint64_t>(value, key, line);
        } else if (key == "alpha") {
            file.options.alpha = real();
        } else if (key == "delta") {
            file.options.delta = real();
        } else if (key == "lambda") {
            file.options.estimator.lambda = real();
        } else if (key == "nmin") {
            file.options.estimator.n_min = static_cast<int>(whole());
        } else if (key == "nmax") {
            file.options.estimator.n_max = static_cast<int>(whole());
        } else if (key == "threads") {
            file.options.threads = static_cast<unsigned>(std::max<std::int64_t>(1, whole()));
        } else if (key == "methods") {
            file.methods.clear();
            for (auto name : detail::split_list(value)) {
                const auto method = parse_method(name);
                if (!method) {
                    throw Error(ErrorCode::InvalidScenario, "line " + std::to_string(line) + ": unknown method '" +
                                                                std::string(name) + "'; valid: lpo, loo, ss, storey");
                }
                file.methods.push_back(*method);
            }
        } else if (key == "procedures") {
            file.procedures.clear();
            for (auto name : detail::split_list(value)) {
                const auto proc = parse_procedure(name);
                if (!proc) {
                    throw Error(ErrorCode::InvalidScenario,
                                "line " + std::to_string(line) + ": unknown procedure '" + std::string(name) +
                                    "'; valid: bh, oracle, plugin_lpo, plugin_loo, plugin_ss, plugin_storey");
                }
                file.procedures.push_back(*proc);
            }
        } else {
            throw Error(ErrorCode::InvalidScenario,
                        "line " + std::to_string(line) + ": unknown key '" + std::string(key) + "'");
        }
    }
    if (!have_kind) {
        throw Error(ErrorCode::InvalidScenario,
                    "scenario is missing 'kind'; valid kinds: " + std::string(valid_scenario_kinds));
    }
    validate(file.spec);
    return file;
}

} // namespace lpo_pi0
