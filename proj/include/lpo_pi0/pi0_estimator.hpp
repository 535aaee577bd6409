#pragma once

#include "lpo_pi0/error.hpp"
#include "lpo_pi0/histogram.hpp"
#include "lpo_pi0/lpo_risk.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace lpo_pi0 {

enum class Pi0Method { lpo, loo, ss, storey };

inline std::string_view to_string(Pi0Method method) noexcept
{
    switch (method) {
    case Pi0Method::lpo: return "lpo";
    case Pi0Method::loo: return "loo";
    case Pi0Method::ss: return "ss";
    case Pi0Method::storey: return "storey";
    }
    return "lpo";
}

inline std::optional<Pi0Method> parse_method(std::string_view name) noexcept
{
    if (name == "lpo") return Pi0Method::lpo;
    if (name == "loo") return Pi0Method::loo;
    if (name == "ss") return Pi0Method::ss;
    if (name == "storey") return Pi0Method::storey;
    return std::nullopt;
}

struct EstimatorConfig {
    int n_min = 1;
    int n_max = 100;
    Pi0Method method = Pi0Method::lpo;
    double lambda = 0.5; ///< cut-off for Pi0Method::ss
    unsigned threads = 1;
};

struct Pi0Estimate {
    Pi0Method method = Pi0Method::lpo;
    std::int64_t m = 0;
    double pi0_raw = 1.0;
    double pi0 = 1.0; ///< pi0_raw clamped to [1/m, 1]
    double lambda_hat = 0.0;
    double mu_hat = 1.0;
    int n_hat = 0;
    std::optional<double> risk; ///< absent for the cut-off estimators
    std::int64_t p_hat = 0;
    PartitionSpec spec{};
    std::int64_t central_count = 0;
    std::int64_t candidates = 0; ///< partitions scored
    bool degenerate = false;     ///< no partition had a finite score; single-bin fallback
};

inline double clamp_pi0(double raw, std::int64_t m) noexcept
{
    return std::min(1.0, std::max(1.0 / static_cast<double>(m), raw));
}

namespace detail {

struct Candidate {
    PartitionSpec spec{};
    double risk = 0.0;
    std::int64_t p_hat = 1;
    std::int64_t central_count = 0;
};

/// Strict total order: lower risk, then fewer bins, coarser grid, wider central
/// bin, and finally the leftmost central bin.
inline bool better(const Candidate& a, const Candidate& b) noexcept
{
    if (a.risk != b.risk) return a.risk < b.risk;
    if (a.spec.dimension() != b.spec.dimension()) return a.spec.dimension() < b.spec.dimension();
    if (a.spec.resolution != b.spec.resolution) return a.spec.resolution < b.spec.resolution;
    if (a.spec.central_bins() != b.spec.central_bins()) return a.spec.central_bins() > b.spec.central_bins();
    return a.spec.central_lo < b.spec.central_lo;
}

struct ResolutionResult {
    std::optional<Candidate> best;
    std::int64_t scored = 0;
};

inline ResolutionResult search_resolution(const PValueSample& sample, int resolution, bool leave_one_out)
{
    const GridMoments grid(sample, resolution);
    const std::int64_t m = grid.total();
    ResolutionResult out;
    for (int lo = 0; lo < resolution; ++lo) {
        for (int hi = lo + 1; hi <= resolution; ++hi) {
            ++out.scored;
            const MomentTable sums = grid.table(lo, hi);
            const std::int64_t p = leave_one_out ? 1 : select_p(phi_coefficients(sums, m), m).p_hat;
            Candidate c{PartitionSpec{resolution, lo, hi}, lpo_risk(sums, m, p), p, grid.central_count(lo, hi)};
            if (!std::isfinite(c.risk)) continue;
            if (!out.best || better(c, *out.best)) out.best = c;
        }
    }
    return out;
}

} // namespace detail

/// Leave-p-out histogram selection over every non-regular partition with
/// n_min <= N <= n_max. The winner's central-bin height is the estimate.
/// Work is split by N across `cfg.threads`; the result does not depend on it.
inline Pi0Estimate estimate_pi0(const PValueSample& sample, const EstimatorConfig& cfg)
{
    if (cfg.method != Pi0Method::lpo && cfg.method != Pi0Method::loo) {
        throw Error(ErrorCode::InvalidConfig, "estimate_pi0 handles the lpo and loo methods only");
    }
    if (cfg.n_min < 1 || cfg.n_min > cfg.n_max) {
        throw Error(ErrorCode::InvalidRange, "estimator needs 1 <= n_min <= n_max");
    }
    const bool loo = cfg.method == Pi0Method::loo;
    const auto count = static_cast<std::size_t>(cfg.n_max - cfg.n_min + 1);
    std::vector<detail::ResolutionResult> per_resolution(count);

    const unsigned workers = std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(count)));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) {
            per_resolution[i] = detail::search_resolution(sample, cfg.n_min + static_cast<int>(i), loo);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    per_resolution[i] = detail::search_resolution(sample, cfg.n_min + static_cast<int>(i), loo);
                }
            });
        }
    }

    std::optional<detail::Candidate> best;
    std::int64_t scored = 0;
    for (const auto& r : per_resolution) {
        scored += r.scored;
        if (r.best && (!best || detail::better(*r.best, *best))) best = r.best;
    }

    Pi0Estimate est;
    est.method = cfg.method;
    est.m = static_cast<std::int64_t>(sample.size());
    est.candidates = scored;
    if (!best) {
        est.degenerate = true;
        est.spec = PartitionSpec{1, 0, 1};
        est.central_count = est.m;
        est.pi0_raw = 1.0;
        est.pi0 = 1.0;
        est.lambda_hat = 0.0;
        est.mu_hat = 1.0;
        est.n_hat = 1;
        est.p_hat = 1;
        return est;
    }
    est.spec = best->spec;
    est.central_count = best->central_count;
    est.risk = best->risk;
    est.p_hat = best->p_hat;
    est.n_hat = best->spec.resolution;
    est.lambda_hat = best->spec.lambda();
    est.mu_hat = best->spec.mu();
    est.pi0_raw = bin_height(best->central_count, est.m, best->spec.central_width());
    est.pi0 = clamp_pi0(est.pi0_raw, est.m);
    return est;
}

/// #{P_i in [lambda, 1]} / (m (1 - lambda)).
inline Pi0Estimate ss_estimator(const PValueSample& sample, double lambda)
{
    if (!(lambda >= 0.0 && lambda < 1.0)) {
        throw Error(ErrorCode::InvalidLambda, "lambda must lie in [0, 1), got " + std::to_string(lambda));
    }
    const auto values = sample.values();
    const auto tail = values.end() - std::lower_bound(values.begin(), values.end(), lambda);

    Pi0Estimate est;
    est.method = Pi0Method::ss;
    est.m = static_cast<std::int64_t>(values.size());
    est.central_count = tail;
    est.pi0_raw = static_cast<double>(tail) / (static_cast<double>(est.m) * (1.0 - lambda));
    est.pi0 = clamp_pi0(est.pi0_raw, est.m);
    est.lambda_hat = lambda;
    est.mu_hat = 1.0;
    return est;
}

inline Pi0Estimate storey_estimator(const PValueSample& sample)
{
    auto est = ss_estimator(sample, 0.5);
    est.method = Pi0Method::storey;
    return est;
}

/// Dispatches on cfg.method.
inline Pi0Estimate estimate(const PValueSample& sample, const EstimatorConfig& cfg)
{
    switch (cfg.method) {
    case Pi0Method::ss: return ss_estimator(sample, cfg.lambda);
    case Pi0Method::storey: return storey_estimator(sample);
    default: return estimate_pi0(sample, cfg);
    }
}

} // namespace lpo_pi0
