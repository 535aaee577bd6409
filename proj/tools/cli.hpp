#pragma once

#include "lpo_pi0/lpo_pi0.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace lpo_pi0::cli {

enum ExitCode : int { ok = 0, usage = 2, data = 3, degenerate = 4 };

inline int exit_code_for(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::EmptyInput:
    case ErrorCode::TooFewValues:
    case ErrorCode::OutOfRange:
    case ErrorCode::NonFinite:
    case ErrorCode::ParseError:
    case ErrorCode::IoError:
    case ErrorCode::LengthMismatch: return data;
    case ErrorCode::DegenerateSelection:
    case ErrorCode::PoleAtM:
    case ErrorCode::TooLargeForOracle: return degenerate;
    default: return usage;
    }
}

inline std::string error_json(std::string_view code, std::string_view message, int exit_code)
{
    return JsonObject{}.string("error", code).string("message", message).integer("exit_code", exit_code).str();
}

namespace detail {

struct Sink {
    std::optional<std::string> path;
    std::ostream& fallback;

    void write(const std::string& text) const
    {
        if (!path) {
            fallback << text;
            return;
        }
        std::ofstream file(*path, std::ios::binary);
        if (!file) throw Error(ErrorCode::IoError, "cannot open '" + *path + "' for writing");
        file << text;
        if (!file) throw Error(ErrorCode::IoError, "write to '" + *path + "' failed");
    }
};

inline PValueSample read_sample(const std::string& input, const std::optional<std::string>& column)
{
    return load_sample(read_p_values_file(input, column));
}

inline std::string estimate_csv(const Pi0Estimate& est)
{
    std::string out = "method,m,pi0,pi0_raw,lambda_hat,mu_hat,n_hat,p_hat,risk\n";
    out += std::string(to_string(est.method)) + ',' + std::to_string(est.m) + ',' + json_number(est.pi0) + ',' +
           json_number(est.pi0_raw) + ',' + json_number(est.lambda_hat) + ',' + json_number(est.mu_hat) + ',' +
           std::to_string(est.n_hat) + ',' + std::to_string(est.p_hat) + ',' +
           (est.risk ? json_number(*est.risk) : std::string()) + '\n';
    return out;
}

} // namespace detail

struct EstimatorFlags {
    std::string method = "lpo";
    double lambda = 0.5;
    int n_min = 1;
    int n_max = 100;
    unsigned threads = 1;

    void attach(CLI::App* sub)
    {
        sub->add_option("--method", method, "pi0 estimator")
            ->check(CLI::IsMember({"lpo", "loo", "ss", "storey"}))
            ->capture_default_str();
        sub->add_option("--lambda", lambda, "cut-off for --method ss")->capture_default_str();
        sub->add_option("--nmin", n_min, "smallest grid resolution")->capture_default_str();
        sub->add_option("--nmax", n_max, "largest grid resolution")->capture_default_str();
        sub->add_option("--threads", threads, "worker threads for the partition search")->capture_default_str();
    }

    EstimatorConfig config() const
    {
        EstimatorConfig cfg;
        cfg.method = parse_method(method).value_or(Pi0Method::lpo);
        cfg.lambda = lambda;
        cfg.n_min = n_min;
        cfg.n_max = n_max;
        cfg.threads = std::max(1u, threads);
        return cfg;
    }
};

/// Runs the command line `args` (without the program name). Results go to
/// `out` unless --output is given; diagnostics and error objects go to `err`.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"pi0 estimation by leave-p-out histogram selection, and plug-in FDR control", "lpo_pi0"};
    app.require_subcommand(1);

    std::string input;
    std::optional<std::string> column, output;
    std::string format = "json";

    auto add_io = [&](CLI::App* sub, bool needs_input) {
        auto* opt = sub->add_option("--input", input, "p-value file: one value per line, '#' comments");
        if (needs_input) opt->required();
        sub->add_option("--column", column, "read a CSV file and take this column");
        sub->add_option("--output", output, "write here instead of stdout");
    };

    // estimate
    auto* estimate_cmd = app.add_subcommand("estimate", "estimate pi0");
    EstimatorFlags estimate_flags;
    add_io(estimate_cmd, true);
    estimate_flags.attach(estimate_cmd);
    estimate_cmd->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}))->capture_default_str();

    // mtp
    auto* mtp_cmd = app.add_subcommand("mtp", "plug-in step-up multiple testing");
    EstimatorFlags mtp_flags;
    double alpha = 0.15, delta = 0.0;
    std::optional<double> pi0_override;
    bool one_based = false;
    add_io(mtp_cmd, true);
    mtp_flags.attach(mtp_cmd);
    mtp_cmd->add_option("--alpha", alpha, "target FDR level")->capture_default_str();
    mtp_cmd->add_option("--delta", delta, "added to pi0 before plugging in")->capture_default_str();
    mtp_cmd->add_option("--pi0", pi0_override, "use this pi0 instead of estimating it (1 gives BH)");
    mtp_cmd->add_flag("--one-based", one_based, "report 1-based indices");

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "Monte-Carlo study of one scenario");
    std::optional<std::string> scenario_path, kind, methods_list, procedures_list;
    std::optional<double> sim_pi0, sim_s, sim_lambda_star, sim_left, sim_right, sim_sd, sim_alpha, sim_delta, sim_lambda;
    std::optional<std::int64_t> sim_m, sim_reps;
    std::optional<std::uint64_t> sim_seed;
    std::optional<int> sim_nmin, sim_nmax;
    std::optional<unsigned> sim_threads;
    std::string sim_format = "csv";
    sim_cmd->add_option("--scenario", scenario_path, "key = value scenario file");
    sim_cmd->add_option("--kind", kind, "beta_tail, trunc_beta or ushape");
    sim_cmd->add_option("--pi0", sim_pi0);
    sim_cmd->add_option("--s", sim_s, "beta shape");
    sim_cmd->add_option("--lambda-star", sim_lambda_star, "support end of the trunc_beta alternative");
    sim_cmd->add_option("--alt-left", sim_left, "ushape left mean");
    sim_cmd->add_option("--alt-right", sim_right, "ushape right mean");
    sim_cmd->add_option("--alt-sd", sim_sd, "ushape alternative sd");
    sim_cmd->add_option("--m", sim_m, "p-values per replicate");
    sim_cmd->add_option("--reps", sim_reps, "replicates");
    sim_cmd->add_option("--seed", sim_seed);
    sim_cmd->add_option("--alpha", sim_alpha);
    sim_cmd->add_option("--delta", sim_delta);
    sim_cmd->add_option("--lambda", sim_lambda, "cut-off for the ss method");
    sim_cmd->add_option("--nmin", sim_nmin);
    sim_cmd->add_option("--nmax", sim_nmax);
    sim_cmd->add_option("--threads", sim_threads, "replicates run concurrently");
    sim_cmd->add_option("--methods", methods_list, "comma list of lpo, loo, ss, storey");
    sim_cmd->add_option("--procedures", procedures_list, "comma list of bh, oracle, plugin_<method>");
    sim_cmd->add_option("--output", output, "write <output>.csv and <output>.json");
    sim_cmd->add_option("--format", sim_format, "stdout format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();

    // risk-debug
    auto* debug_cmd = app.add_subcommand("risk-debug", "dump per-partition moments, phi, p and risk as JSON lines");
    std::optional<int> grid_n, grid_k, grid_l;
    std::optional<std::int64_t> fixed_p;
    bool all = false;
    std::int64_t limit = 1000;
    int debug_nmin = 1, debug_nmax = 100;
    add_io(debug_cmd, true);
    debug_cmd->add_option("--N", grid_n, "grid resolution");
    debug_cmd->add_option("--k", grid_k, "first grid cell of the central bin");
    debug_cmd->add_option("--l", grid_l, "end grid cell of the central bin");
    debug_cmd->add_option("--p", fixed_p, "evaluate the risk at this p instead of the selected one");
    debug_cmd->add_flag("--all", all, "every partition with nmin <= N <= nmax");
    debug_cmd->add_option("--limit", limit, "maximum lines for --all")->capture_default_str();
    debug_cmd->add_option("--nmin", debug_nmin)->capture_default_str();
    debug_cmd->add_option("--nmax", debug_nmax)->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return ok;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << error_json("UsageError", e.what(), usage) << '\n';
        return usage;
    }

    try {
        if (estimate_cmd->parsed()) {
            const auto sample = detail::read_sample(input, column);
            const auto est = estimate(sample, estimate_flags.config());
            detail::Sink{output, out}.write(format == "csv" ? detail::estimate_csv(est) : to_json(est) + "\n");
            if (est.degenerate) {
                err << error_json(to_string(ErrorCode::DegenerateSelection),
                                  "no partition had a finite score; single-bin fallback", degenerate)
                    << '\n';
                return degenerate;
            }
            return ok;
        }

        if (mtp_cmd->parsed()) {
            check_alpha(alpha);
            if (pi0_override) check_theta(*pi0_override);
            const auto sample = detail::read_sample(input, column);
            bool fallback = false;
            double pi0 = 1.0;
            if (pi0_override) {
                pi0 = *pi0_override;
            } else {
                const auto est = estimate(sample, mtp_flags.config());
                pi0 = est.pi0;
                fallback = est.degenerate;
            }
            const auto result = plugin_mtp(sample, alpha, pi0, delta);
            detail::Sink{output, out}.write(to_json(result, one_based) + "\n");
            if (fallback) {
                err << error_json(to_string(ErrorCode::DegenerateSelection),
                                  "no partition had a finite score; pi0 fell back to 1", degenerate)
                    << '\n';
                return degenerate;
            }
            return ok;
        }

        if (sim_cmd->parsed()) {
            ScenarioFile file;
            if (scenario_path) {
                std::ifstream in(*scenario_path);
                if (!in) throw Error(ErrorCode::IoError, "cannot open '" + *scenario_path + "'");
                file = parse_scenario(in);
            } else if (!kind) {
                throw Error(ErrorCode::InvalidScenario,
                            "give --scenario or --kind; valid kinds: " + std::string(valid_scenario_kinds));
            }
            if (kind) {
                const auto parsed = parse_scenario_kind(*kind);
                if (!parsed) {
                    throw Error(ErrorCode::InvalidScenario,
                                "unknown kind '" + *kind + "'; valid kinds: " + std::string(valid_scenario_kinds));
                }
                file.spec.kind = *parsed;
            }
            auto& spec = file.spec;
            if (sim_pi0) spec.pi0 = *sim_pi0;
            if (sim_s) spec.s = *sim_s;
            if (sim_lambda_star) spec.lambda_star = *sim_lambda_star;
            if (sim_left) spec.a = *sim_left;
            if (sim_right) spec.b = *sim_right;
            if (sim_sd) spec.sd = *sim_sd;
            if (sim_m) spec.m = *sim_m;
            if (sim_reps) spec.reps = *sim_reps;
            if (sim_seed) spec.seed = *sim_seed;
            if (sim_alpha) file.options.alpha = *sim_alpha;
            if (sim_delta) file.options.delta = *sim_delta;
            if (sim_lambda) file.options.estimator.lambda = *sim_lambda;
            if (sim_nmin) file.options.estimator.n_min = *sim_nmin;
            if (sim_nmax) file.options.estimator.n_max = *sim_nmax;
            if (sim_threads) file.options.threads = std::max(1u, *sim_threads);
            if (methods_list || procedures_list) {
                std::string text;
                if (methods_list) text += "kind = " + std::string(to_string(spec.kind)) + "\nmethods = " + *methods_list + "\n";
                if (procedures_list) text += "kind = " + std::string(to_string(spec.kind)) + "\nprocedures = " + *procedures_list + "\n";
                std::istringstream lists(text);
                const auto parsed = parse_scenario(lists);
                if (methods_list) file.methods = parsed.methods;
                if (procedures_list) file.procedures = parsed.procedures;
            }
            validate(spec);
            if (file.methods.empty() && file.procedures.empty()) {
                throw Error(ErrorCode::InvalidScenario, "nothing to run: no methods and no procedures");
            }

            const auto result = run_scenario(spec, file.methods, file.procedures, file.options);
            const auto csv = summary_csv(result.summary);
            if (output) {
                detail::Sink{*output + ".csv", out}.write(csv);
                detail::Sink{*output + ".json", out}.write(result_json(result) + "\n");
            } else {
                out << (sim_format == "json" ? result_json(result) + "\n" : csv);
            }
            if (!result.summary.valid()) {
                err << error_json("FailedReplicates",
                                  std::to_string(result.summary.failed) + " replicates failed; table is invalid",
                                  degenerate)
                    << '\n';
                return degenerate;
            }
            return ok;
        }

        if (debug_cmd->parsed()) {
            const auto sample = detail::read_sample(input, column);
            const auto m = static_cast<std::int64_t>(sample.size());
            std::string lines;
            if (all) {
                if (limit < 0) throw Error(ErrorCode::InvalidConfig, "--limit must be >= 0");
                std::int64_t written = 0;
                std::optional<GridMoments> grid;
                for (const auto& spec : enumerate_partitions(debug_nmin, debug_nmax)) {
                    if (written >= limit) break;
                    if (!grid || grid->resolution() != spec.resolution) grid.emplace(sample, spec.resolution);
                    lines += risk_debug_json(spec, grid->table(spec.central_lo, spec.central_hi), m, fixed_p) + "\n";
                    ++written;
                }
            } else {
                if (!grid_n || !grid_k || !grid_l) {
                    throw Error(ErrorCode::InvalidConfig, "risk-debug needs --N, --k and --l, or --all");
                }
                const auto spec = make_partition(*grid_n, *grid_k, *grid_l);
                const GridMoments grid(sample, spec.resolution);
                lines = risk_debug_json(spec, grid.table(spec.central_lo, spec.central_hi), m, fixed_p) + "\n";
            }
            detail::Sink{output, out}.write(lines);
            return ok;
        }
    } catch (const Error& e) {
        const int code = exit_code_for(e.code());
        err << error_json(to_string(e.code()), e.what(), code) << '\n';
        return code;
    }
    return usage;
}

} // namespace lpo_pi0::cli
