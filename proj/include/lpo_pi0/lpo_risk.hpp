#pragma once

#include "lpo_pi0/error.hpp"
#include "lpo_pi0/histogram.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lpo_pi0 {

// --------------------------------------------------------------------------------------------------------------------
// Moment sums s(i,j) = sum_k alpha_k^i / omega_k^j, i in {1,2,3}, j in {1,2}
// --------------------------------------------------------------------------------------------------------------------

struct MomentTable {
    std::array<std::array<double, 2>, 3> s{};

    /// 1-based access matching the usual s(i,j) indexing.
    double operator()(int i, int j) const noexcept { return s[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)]; }
    double& operator()(int i, int j) noexcept { return s[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)]; }
};

struct MomentSums {
    MomentTable table;
    std::vector<double> alpha;
    std::vector<double> omega;

    double operator()(int i, int j) const noexcept { return table(i, j); }
};

inline MomentSums moment_sums(std::span<const double> alpha, std::span<const double> omega)
{
    if (alpha.size() != omega.size() || alpha.empty()) {
        throw Error(ErrorCode::LengthMismatch, "bin probabilities and widths must have the same nonzero length");
    }
    MomentSums out;
    out.alpha.assign(alpha.begin(), alpha.end());
    out.omega.assign(omega.begin(), omega.end());
    for (std::size_t k = 0; k < alpha.size(); ++k) {
        double a = alpha[k];
        for (int i = 1; i <= 3; ++i, a *= alpha[k]) {
            out.table(i, 1) += a / omega[k];
            out.table(i, 2) += a / (omega[k] * omega[k]);
        }
    }
    return out;
}

/// Plug-in sums with alpha_k = m_k / m.
inline MomentSums moment_sums(const BinCounts& counts, const PartitionSpec& spec)
{
    const auto omega = bin_widths(spec);
    if (omega.size() != counts.counts.size()) {
        throw Error(ErrorCode::MismatchedResolution, "bin counts do not match the partition dimension");
    }
    std::vector<double> alpha(omega.size());
    for (std::size_t k = 0; k < alpha.size(); ++k) {
        alpha[k] = static_cast<double>(counts.counts[k]) / static_cast<double>(counts.total);
    }
    return moment_sums(alpha, omega);
}

/// Per-resolution cache serving plug-in moment tables for every (k, l) at one N
/// in O(1). Regular-bin contributions come from integer prefix sums of c^i, so
/// partitions that induce the same bins get bit-identical tables.
class GridMoments {
public:
    GridMoments(const PValueSample& sample, int resolution) : prefix_(grid_prefix(sample, resolution))
    {
        const auto n = static_cast<std::size_t>(resolution);
        for (auto& p : power_prefix_) p.assign(n + 1, 0);
        for (std::size_t j = 0; j < n; ++j) {
            const std::int64_t c = prefix_.count(static_cast<int>(j), static_cast<int>(j) + 1);
            power_prefix_[0][j + 1] = power_prefix_[0][j] + c;
            power_prefix_[1][j + 1] = power_prefix_[1][j] + c * c;
            power_prefix_[2][j + 1] = power_prefix_[2][j] + c * c * c;
        }
        const Wide m = prefix_.total();
        Wide mp = 1;
        for (auto& d : total_power_) {
            mp *= m;
            d = static_cast<double>(mp);
        }
    }

    int resolution() const noexcept { return prefix_.resolution; }
    std::int64_t total() const noexcept { return prefix_.total(); }
    const GridPrefix& prefix() const noexcept { return prefix_; }

    std::int64_t central_count(int lo, int hi) const noexcept { return prefix_.count(lo, hi); }

    MomentTable table(int lo, int hi) const noexcept
    {
        const auto n = static_cast<std::size_t>(prefix_.resolution);
        const auto l = static_cast<std::size_t>(lo);
        const auto h = static_cast<std::size_t>(hi);
        const Wide c = prefix_.count(lo, hi);
        const Wide w = hi - lo;
        const double ratio = static_cast<double>(prefix_.resolution) / static_cast<double>(hi - lo);

        MomentTable out;
        Wide ci = 1;
        for (int i = 1; i <= 3; ++i) {
            const auto& p = power_prefix_[static_cast<std::size_t>(i - 1)];
            const Wide regular = p[n] - (p[h] - p[l]);
            ci *= c;
            // s(i,j) * m^i = (N/w)^j * (regular * w^j + c^i)
            const double m_i = total_power_[static_cast<std::size_t>(i - 1)];
            out(i, 1) = static_cast<double>(regular * w + ci) / m_i * ratio;
            out(i, 2) = static_cast<double>(regular * w * w + ci) / m_i * (ratio * ratio);
        }
        return out;
    }

private:
    __extension__ using Wide = __int128;

    GridPrefix prefix_;
    std::array<std::vector<std::int64_t>, 3> power_prefix_;
    std::array<double, 3> total_power_{};
};

// --------------------------------------------------------------------------------------------------------------------
// Closed-form leave-p-out risk
// --------------------------------------------------------------------------------------------------------------------

inline void check_p(std::int64_t m, double p)
{
    if (!(p >= 1.0 && p <= static_cast<double>(m - 1))) {
        throw Error(ErrorCode::InvalidP, "p must lie in [1, m-1] = [1, " + std::to_string(m - 1) + "], got " +
                                             std::to_string(p));
    }
}

/// R_p = [(2m - p) s11 - m (m - p + 1) s21] / ((m - 1)(m - p)).
/// Same as the two-sum form with alpha_k = m_k/m: the first sum is s11 and the
/// second is s21.
inline double lpo_risk(const MomentTable& sums, std::int64_t m, std::int64_t p) noexcept
{
    const double md = static_cast<double>(m);
    const double pd = static_cast<double>(p);
    const double numerator = (2.0 * md - pd) * sums(1, 1) - md * (md - pd + 1.0) * sums(2, 1);
    return numerator / ((md - 1.0) * (md - pd));
}

inline double lpo_risk(const BinCounts& counts, const PartitionSpec& spec, std::int64_t p)
{
    check_p(counts.total, static_cast<double>(p));
    return lpo_risk(moment_sums(counts, spec).table, counts.total, p);
}

// --------------------------------------------------------------------------------------------------------------------
// Bias, variance and MSE of the risk estimator as rational functions of p
// --------------------------------------------------------------------------------------------------------------------

struct PhiCoefficients {
    double phi0 = 0.0;
    double phi1 = 0.0;
    double phi2 = 0.0;
    double phi3 = 0.0;
    std::int64_t m = 0;
};

/// Coefficients of the exact multinomial variance of R_p,
///   Var[R_p] = (p^2 phi2 + p phi1 + phi0) / [m (m-1) (m-p)]^2,
/// and phi3 = (m-1)^2 (s11 - s21)^2 so that bias^2 = p^2 phi3 / [m (m-1) (m-p)]^2.
/// Obtained from the factorial moments of the multinomial counts; agrees with
/// brute-force enumeration of all count vectors (see bias_variance_oracle).
inline PhiCoefficients phi_coefficients(const MomentTable& s, std::int64_t m_count)
{
    const double m = static_cast<double>(m_count);
    const double s11 = s(1, 1), s21 = s(2, 1), s12 = s(1, 2), s22 = s(2, 2), s32 = s(3, 2);
    const double s21sq = s21 * s21;

    PhiCoefficients phi;
    phi.m = m_count;
    phi.phi2 = 2.0 * m * (m - 1.0) * (2.0 * (m - 2.0) * s32 + s22 - (2.0 * m - 3.0) * s21sq);
    phi.phi1 = -4.0 * m * (m - 1.0) *
               ((m - 1.0) * s11 * s21 - (m + 1.0) * (2.0 * m - 3.0) * s21sq + 2.0 * s22 +
                2.0 * (m - 2.0) * (m + 1.0) * s32);
    phi.phi0 = m * (m - 1.0) *
               (-(m - 1.0) * s11 * s11 + 4.0 * (m - 1.0) * (m + 1.0) * s11 * s21 + (m - 1.0) * s12 -
                2.0 * (m + 1.0) * (m + 1.0) * (2.0 * m - 3.0) * s21sq - 2.0 * (m - 3.0) * (m + 1.0) * s22 +
                4.0 * (m - 2.0) * (m + 1.0) * (m + 1.0) * s32);
    phi.phi3 = (m - 1.0) * (m - 1.0) * (s11 - s21) * (s11 - s21);
    return phi;
}

inline PhiCoefficients phi_coefficients(const MomentSums& sums, std::int64_t m)
{
    return phi_coefficients(sums.table, m);
}

/// The published variance polynomials, transcribed term by term. They do not
/// reproduce the enumerated variance (they go negative even for a single bin)
/// and are kept only for cross-checking and the risk-debug dump.
inline PhiCoefficients printed_phi_coefficients(const MomentTable& s, std::int64_t m_count)
{
    const double m = static_cast<double>(m_count);
    const double s11 = s(1, 1), s21 = s(2, 1), s12 = s(1, 2), s22 = s(2, 2), s32 = s(3, 2);

    PhiCoefficients phi;
    phi.m = m_count;
    phi.phi2 = 2.0 * m * (m - 1.0) * ((m - 2.0) * (s21 + s11 - s32) - m * s22 - (2.0 * m - 3.0) * s21 * s21);
    phi.phi1 = -2.0 * m * (m - 1.0) * (3.0 * m + 1.0) * ((m - 2.0) * (s21 - s32) - m * s22) +
               2.0 * m * (m - 1.0) *
                   (2.0 * (m + 1.0) * (2.0 * m - 3.0) * s21 * s21 + (-3.0 * m * m + 3.0 * m + 4.0) * s11);
    phi.phi0 = 4.0 * m * (m - 1.0) * (m + 1.0) * ((m - 2.0) * (s21 - s32) - m * s22) -
               2.0 * m * (m - 1.0) *
                   ((m * m + 2.0 * m + 1.0) * (2.0 * m - 3.0) * s21 * s21 + (2.0 * m * m * m - 4.0 * m - 2.0) * s11) +
               m * (m - 1.0) * (m - 1.0) * (s12 - s11 * s11);
    phi.phi3 = (m - 1.0) * (m - 1.0) * (s11 - s21) * (s11 - s21);
    return phi;
}

/// B_p = p / (m (m - p)) * sum_k alpha_k (1 - alpha_k) / omega_k.
inline double bias_hat(const MomentTable& s, std::int64_t m, std::int64_t p)
{
    check_p(m, static_cast<double>(p));
    const double md = static_cast<double>(m);
    const double pd = static_cast<double>(p);
    return std::max(0.0, pd / (md * (md - pd)) * (s(1, 1) - s(2, 1)));
}

inline double bias_hat(const MomentSums& sums, std::int64_t m, std::int64_t p) { return bias_hat(sums.table, m, p); }

namespace detail {

inline double mse_denominator(std::int64_t m, double x) noexcept
{
    const double md = static_cast<double>(m);
    const double d = md * (md - 1.0) * (md - x);
    return d * d;
}

} // namespace detail

inline double variance_hat(const PhiCoefficients& phi, std::int64_t m, std::int64_t p)
{
    check_p(m, static_cast<double>(p));
    const double pd = static_cast<double>(p);
    return (pd * pd * phi.phi2 + pd * phi.phi1 + phi.phi0) / detail::mse_denominator(m, pd);
}

/// MSE(x) = {x^2 (phi3 + phi2) + x phi1 + phi0} / [m (m-1) (m-x)]^2 for real x != m.
inline double mse_hat(const PhiCoefficients& phi, std::int64_t m, double x)
{
    if (x == static_cast<double>(m)) throw Error(ErrorCode::PoleAtM, "MSE(x) has a pole at x = m");
    return (x * x * (phi.phi3 + phi.phi2) + x * phi.phi1 + phi.phi0) / detail::mse_denominator(m, x);
}

/// Result of choosing p for one partition.
struct PChoice {
    std::int64_t p_hat = 1;
    std::optional<double> p_real;  ///< stationary point of MSE(x), when defined
    bool rule_overridden = false;  ///< rounded stationary point was not the integer argmin
    bool p_independent = false;    ///< R_p does not depend on p (all mass in one bin)
    bool variance_clamped = false; ///< a negative variance value was clamped to 0
};

namespace detail {

/// bias^2 + max(variance, 0) at integer p.
inline double selection_mse(const PhiCoefficients& phi, std::int64_t m, std::int64_t p, bool& clamped) noexcept
{
    const double pd = static_cast<double>(p);
    const double den = mse_denominator(m, pd);
    const double bias_sq = pd * pd * phi.phi3 / den;
    double variance = (pd * pd * phi.phi2 + pd * phi.phi1 + phi.phi0) / den;
    if (variance < 0.0) {
        variance = 0.0;
        clamped = true;
    }
    return bias_sq + variance;
}

inline std::int64_t round_half_away(double x) noexcept { return static_cast<std::int64_t>(std::round(x)); }

} // namespace detail

/// Integer p minimising the estimated MSE over [1, m-1].
///
/// The derivative of MSE(x) has the sign of the linear function
/// (2m(phi3+phi2) + phi1) x + (m phi1 + 2 phi0), so MSE is monotone on each side
/// of its single stationary point x*. The integer minimiser is therefore one of
/// {1, m-1, floor(x*), ceil(x*)}, which makes the exact search O(1).
/// The rounded stationary point (or 1 when x* falls outside [1, m-1]) is kept
/// unless it is worse than that minimiser by more than 1e-12.
inline PChoice select_p(const PhiCoefficients& phi, std::int64_t m)
{
    if (m < 2) throw Error(ErrorCode::TooFewValues, "select_p requires m >= 2");
    PChoice choice;
    choice.p_independent = phi.phi3 == 0.0;
    const std::int64_t last = m - 1;
    const double md = static_cast<double>(m);
    const double slope = 2.0 * md * (phi.phi3 + phi.phi2) + phi.phi1;
    const double x_star = -(md * phi.phi1 + 2.0 * phi.phi0) / slope;
    if (slope != 0.0 && std::isfinite(x_star)) choice.p_real = x_star;
    if (last == 1) return choice;

    bool clamped = false;
    std::int64_t best = 1;
    double best_mse = detail::selection_mse(phi, m, 1, clamped);
    auto consider = [&](std::int64_t p) {
        p = std::clamp<std::int64_t>(p, 1, last);
        const double v = detail::selection_mse(phi, m, p, clamped);
        if (v < best_mse || (v == best_mse && p < best)) {
            best = p;
            best_mse = v;
        }
    };
    consider(last);
    if (choice.p_real) {
        const double x = std::clamp(*choice.p_real, 1.0, static_cast<double>(last));
        consider(static_cast<std::int64_t>(std::floor(x)));
        consider(static_cast<std::int64_t>(std::ceil(x)));
    }

    std::int64_t rule = 1;
    if (choice.p_real && *choice.p_real >= 1.0 && *choice.p_real <= static_cast<double>(last)) {
        rule = std::clamp<std::int64_t>(detail::round_half_away(*choice.p_real), 1, last);
    }
    const double rule_mse = detail::selection_mse(phi, m, rule, clamped);
    if (rule_mse <= best_mse + 1e-12) {
        choice.p_hat = rule;
    } else {
        choice.p_hat = best;
        choice.rule_overridden = true;
    }
    choice.variance_clamped = clamped;
    return choice;
}

// --------------------------------------------------------------------------------------------------------------------
// Per-partition evaluation
// --------------------------------------------------------------------------------------------------------------------

struct RiskEvaluation {
    PartitionSpec spec;
    std::int64_t p_hat = 1;
    double risk = 0.0;
    std::optional<double> p_real;
};

/// Scores one partition: chooses p (or uses `fixed_p`) and evaluates R_p.
inline RiskEvaluation evaluate_partition(const MomentTable& sums, std::int64_t m, const PartitionSpec& spec,
                                         std::optional<std::int64_t> fixed_p = std::nullopt)
{
    RiskEvaluation out;
    out.spec = spec;
    if (fixed_p) {
        check_p(m, static_cast<double>(*fixed_p));
        out.p_hat = *fixed_p;
    } else {
        const auto choice = select_p(phi_coefficients(sums, m), m);
        out.p_hat = choice.p_hat;
        out.p_real = choice.p_real;
    }
    out.risk = lpo_risk(sums, m, out.p_hat);
    return out;
}

} // namespace lpo_pi0
