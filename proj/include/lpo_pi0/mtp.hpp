#pragma once

#include "lpo_pi0/error.hpp"
#include "lpo_pi0/histogram.hpp"
#include "lpo_pi0/pi0_estimator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace lpo_pi0 {

/// Right-continuous empirical CDF G(t) = #{P_i <= t} / m over a sorted sample.
class EmpiricalCdf {
public:
    explicit EmpiricalCdf(const PValueSample& sample) : values_(sample.values()) {}

    double operator()(double t) const noexcept
    {
        const auto at_or_below = std::upper_bound(values_.begin(), values_.end(), t) - values_.begin();
        return static_cast<double>(at_or_below) / static_cast<double>(values_.size());
    }

    std::size_t size() const noexcept { return values_.size(); }

private:
    std::span<const double> values_;
};

inline double ecdf(const PValueSample& sample, double t) { return EmpiricalCdf(sample)(t); }

struct MtpResult {
    double threshold = 0.0;
    std::vector<std::size_t> rejected; ///< original input indices, ascending
    std::int64_t k_hat = 0;
    double alpha = 0.0;
    double theta = 1.0;
    double delta = 0.0;
    std::size_t m = 0;
};

inline void check_alpha(double alpha)
{
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw Error(ErrorCode::InvalidAlpha, "alpha must lie in (0, 1), got " + std::to_string(alpha));
    }
}

inline void check_theta(double theta)
{
    if (!(theta > 0.0 && theta <= 1.0)) {
        throw Error(ErrorCode::InvalidTheta, "theta must lie in (0, 1], got " + std::to_string(theta));
    }
}

/// Step-up rule with per-rank cutoffs i * alpha / (m * theta).
/// Rejects every P_i <= p_(k_hat); the reported threshold is
/// min(1, k_hat * alpha / (m * theta)), which lies in [p_(k_hat), p_(k_hat+1)).
inline MtpResult step_up(const PValueSample& sample, double alpha, double theta)
{
    check_alpha(alpha);
    check_theta(theta);
    const auto values = sample.values();
    const auto m = values.size();
    const double scale = alpha / (static_cast<double>(m) * theta);

    std::size_t k_hat = 0;
    for (std::size_t i = m; i >= 1; --i) {
        if (values[i - 1] <= static_cast<double>(i) * scale) {
            k_hat = i;
            break;
        }
    }

    MtpResult out;
    out.m = m;
    out.alpha = alpha;
    out.theta = theta;
    out.k_hat = static_cast<std::int64_t>(k_hat);
    if (k_hat == 0) return out;

    out.threshold = std::min(1.0, static_cast<double>(k_hat) * scale);
    const double cutoff = values[k_hat - 1];
    const auto reject_end = std::upper_bound(values.begin(), values.end(), cutoff) - values.begin();
    const auto original = sample.original_index();
    out.rejected.assign(original.begin(), original.begin() + reject_end);
    std::sort(out.rejected.begin(), out.rejected.end());
    out.k_hat = static_cast<std::int64_t>(out.rejected.size());
    return out;
}

inline double threshold(const PValueSample& sample, double alpha, double theta)
{
    return step_up(sample, alpha, theta).threshold;
}

/// Step-up with theta = min(1, pi0 + delta).
inline MtpResult plugin_mtp(const PValueSample& sample, double alpha, double pi0, double delta)
{
    if (!(delta >= 0.0) || !std::isfinite(delta)) {
        throw Error(ErrorCode::InvalidDelta, "delta must be a finite value >= 0, got " + std::to_string(delta));
    }
    auto out = step_up(sample, alpha, std::min(1.0, pi0 + delta));
    out.delta = delta;
    return out;
}

inline MtpResult plugin_mtp(const PValueSample& sample, double alpha, const Pi0Estimate& pi0, double delta)
{
    return plugin_mtp(sample, alpha, pi0.pi0, delta);
}

inline MtpResult bh_procedure(const PValueSample& sample, double alpha) { return step_up(sample, alpha, 1.0); }

struct ErrorMetrics {
    double fdp = 0.0;
    double fnr = 0.0;
    std::int64_t fp = 0;
    std::int64_t r = 0;
};

/// `is_null[i]` labels hypothesis i in original input order.
inline ErrorMetrics error_metrics(const MtpResult& result, const std::vector<bool>& is_null)
{
    if (is_null.size() != result.m) {
        throw Error(ErrorCode::LengthMismatch, "label vector has " + std::to_string(is_null.size()) +
                                                   " entries for " + std::to_string(result.m) + " hypotheses");
    }
    std::vector<bool> rejected(is_null.size(), false);
    for (auto i : result.rejected) {
        if (i >= is_null.size()) throw Error(ErrorCode::LengthMismatch, "rejected index beyond the label vector", i);
        rejected[i] = true;
    }
    if (static_cast<std::int64_t>(result.rejected.size()) != result.k_hat) {
        throw Error(ErrorCode::LengthMismatch, "k_hat does not match the rejection set");
    }

    ErrorMetrics out;
    std::int64_t alternatives = 0, missed = 0;
    for (std::size_t i = 0; i < is_null.size(); ++i) {
        if (is_null[i]) {
            if (rejected[i]) ++out.fp;
        } else {
            ++alternatives;
            if (!rejected[i]) ++missed;
        }
    }
    out.r = result.k_hat;
    out.fdp = static_cast<double>(out.fp) / static_cast<double>(std::max<std::int64_t>(out.r, 1));
    out.fnr = static_cast<double>(missed) / static_cast<double>(std::max<std::int64_t>(alternatives, 1));
    return out;
}

} // namespace lpo_pi0
