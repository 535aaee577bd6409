#pragma once

// Brute-force references for the closed-form risk and its bias/variance.
// Nothing here goes through GridPrefix, MomentTable or the phi polynomials.

#include "lpo_pi0/error.hpp"
#include "lpo_pi0/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace lpo_pi0 {

namespace detail {

/// Bin of `v` under the half-open convention, by linear scan over the edges.
inline std::size_t scan_bin(double v, const PartitionSpec& spec) noexcept
{
    int cell = 0;
    while (cell + 1 < spec.resolution && v >= grid_edge(cell + 1, spec.resolution)) ++cell;
    if (cell < spec.central_lo) return static_cast<std::size_t>(cell);
    if (cell < spec.central_hi) return static_cast<std::size_t>(spec.central_lo);
    return static_cast<std::size_t>(spec.central_lo + 1 + (cell - spec.central_hi));
}

inline std::vector<double> scan_widths(const PartitionSpec& spec)
{
    std::vector<double> w(static_cast<std::size_t>(spec.dimension()), 1.0 / spec.resolution);
    w[static_cast<std::size_t>(spec.central_lo)] = static_cast<double>(spec.central_hi - spec.central_lo) / spec.resolution;
    return w;
}

} // namespace detail

/// Direct O(m * N) bin counts, used to cross-check the prefix-sum path.
inline std::vector<std::int64_t> scan_bin_counts(std::span<const double> values, const PartitionSpec& spec)
{
    std::vector<std::int64_t> counts(static_cast<std::size_t>(spec.dimension()), 0);
    for (double v : values) ++counts[detail::scan_bin(v, spec)];
    return counts;
}

/// Average over all C(m, p) train/test splits of ||s_train||^2 - 2 mean_{test} s_train(P_i),
/// where s_train is the histogram built from the m - p training points.
inline double lpo_risk_oracle(const PValueSample& sample, const PartitionSpec& spec, int p)
{
    const auto m = static_cast<int>(sample.size());
    if (m > 12) throw Error(ErrorCode::TooLargeForOracle, "leave-p-out oracle is limited to m <= 12");
    if (p < 1 || p > m - 1) throw Error(ErrorCode::InvalidP, "p must lie in [1, m-1]");

    const auto widths = detail::scan_widths(spec);
    std::vector<std::size_t> bin(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) bin[static_cast<std::size_t>(i)] = detail::scan_bin(sample[static_cast<std::size_t>(i)], spec);

    // test-set indicator, iterated over all subsets of size p
    std::vector<bool> in_test(static_cast<std::size_t>(m), false);
    std::fill(in_test.begin(), in_test.begin() + p, true);

    long double total = 0.0L;
    std::int64_t splits = 0;
    std::vector<int> train_counts(widths.size());
    do {
        std::fill(train_counts.begin(), train_counts.end(), 0);
        for (int i = 0; i < m; ++i) {
            if (!in_test[static_cast<std::size_t>(i)]) ++train_counts[bin[static_cast<std::size_t>(i)]];
        }
        const long double n_train = m - p;
        long double norm_sq = 0.0L;
        std::vector<long double> height(widths.size());
        for (std::size_t k = 0; k < widths.size(); ++k) {
            height[k] = train_counts[k] / (n_train * widths[k]);
            norm_sq += height[k] * height[k] * widths[k];
        }
        long double test_mean = 0.0L;
        for (int i = 0; i < m; ++i) {
            if (in_test[static_cast<std::size_t>(i)]) test_mean += height[bin[static_cast<std::size_t>(i)]];
        }
        test_mean /= p;
        total += norm_sq - 2.0L * test_mean;
        ++splits;
    } while (std::prev_permutation(in_test.begin(), in_test.end()));

    return static_cast<double>(total / splits);
}

struct BiasVariance {
    double bias = 0.0;     ///< E[R_p] - (E||s_hat||^2 - 2 <s_hat, s>)
    double variance = 0.0; ///< Var[R_p]
    double mean = 0.0;     ///< E[R_p]
    double truth = 0.0;    ///< E||s_hat||^2 - 2 <s_hat, s> for the m-point histogram
};

/// Exact bias and variance of the closed-form risk by enumerating every
/// multinomial count vector (m_1, ..., m_D) with cell probabilities `alpha`.
inline BiasVariance bias_variance_oracle(std::span<const double> alpha, const PartitionSpec& spec, int m, int p)
{
    const auto dim = static_cast<std::size_t>(spec.dimension());
    if (m > 10 || dim > 3) throw Error(ErrorCode::TooLargeForOracle, "enumeration oracle is limited to m <= 10, D <= 3");
    if (alpha.size() != dim) throw Error(ErrorCode::LengthMismatch, "alpha must have one entry per bin");
    if (m < 2 || p < 1 || p > m - 1) throw Error(ErrorCode::InvalidP, "p must lie in [1, m-1]");

    const auto widths = detail::scan_widths(spec);
    const long double md = m, pd = p;

    auto log_factorial = [](int n) { return std::lgamma(static_cast<long double>(n) + 1.0L); };

    struct Outcome {
        long double prob;
        long double risk;
    };
    std::vector<Outcome> outcomes;
    long double e_risk = 0.0L, e_truth = 0.0L;
    std::vector<int> counts(dim, 0);
    // odometer over compositions of m into dim parts
    auto visit = [&](auto&& self, std::size_t k, int remaining) -> void {
        if (k + 1 == dim) {
            counts[k] = remaining;
            long double log_prob = log_factorial(m);
            for (std::size_t j = 0; j < dim; ++j) {
                log_prob -= log_factorial(counts[j]);
                if (counts[j] > 0) {
                    if (alpha[j] <= 0.0) return;
                    log_prob += counts[j] * std::log(static_cast<long double>(alpha[j]));
                }
            }
            const long double prob = std::exp(log_prob);

            long double first = 0.0L, second = 0.0L, norm_sq = 0.0L, cross = 0.0L;
            for (std::size_t j = 0; j < dim; ++j) {
                const long double h = counts[j] / (md * widths[j]);
                first += h;
                second += (counts[j] / md) * (counts[j] / md) / widths[j];
                norm_sq += h * h * widths[j];
                cross += h * alpha[j];
            }
            const long double risk = (2.0L * md - pd) / ((md - 1.0L) * (md - pd)) * first -
                                     md * (md - pd + 1.0L) / ((md - 1.0L) * (md - pd)) * second;
            outcomes.push_back({prob, risk});
            e_risk += prob * risk;
            e_truth += prob * (norm_sq - 2.0L * cross);
            return;
        }
        for (int c = 0; c <= remaining; ++c) {
            counts[k] = c;
            self(self, k + 1, remaining - c);
        }
    };
    visit(visit, 0, m);

    long double variance = 0.0L;
    for (const auto& o : outcomes) variance += o.prob * (o.risk - e_risk) * (o.risk - e_risk);

    BiasVariance out;
    out.mean = static_cast<double>(e_risk);
    out.truth = static_cast<double>(e_truth);
    out.bias = static_cast<double>(e_risk - e_truth);
    out.variance = static_cast<double>(variance);
    return out;
}

} // namespace lpo_pi0
