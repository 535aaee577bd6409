#pragma once

#include "lpo_pi0/json_writer.hpp"
#include "lpo_pi0/lpo_risk.hpp"
#include "lpo_pi0/mtp.hpp"
#include "lpo_pi0/pi0_estimator.hpp"

#include <string>
#include <vector>

namespace lpo_pi0 {

inline std::string to_json(const Pi0Estimate& est)
{
    const bool histogram = est.method == Pi0Method::lpo || est.method == Pi0Method::loo;
    JsonObject o;
    o.string("method", to_string(est.method))
        .integer("m", est.m)
        .number("pi0", est.pi0)
        .number("pi0_raw", est.pi0_raw)
        .number("lambda_hat", est.lambda_hat)
        .number("mu_hat", est.mu_hat);
    if (histogram) {
        o.integer("n_hat", est.n_hat).integer("p_hat", est.p_hat);
    } else {
        o.raw("n_hat", "null").raw("p_hat", "null");
    }
    o.number("risk", est.risk);
    if (histogram) o.boolean("degenerate", est.degenerate);
    return o.str();
}

inline std::string to_json(const MtpResult& result, bool one_based = false)
{
    std::vector<std::size_t> indices = result.rejected;
    if (one_based) {
        for (auto& i : indices) ++i;
    }
    return JsonObject{}
        .number("alpha", result.alpha)
        .number("theta", result.theta)
        .number("delta", result.delta)
        .integer("k_hat", result.k_hat)
        .number("threshold", result.threshold)
        .raw("rejected_indices", json_int_array<std::size_t>(indices))
        .integer("index_base", one_based ? 1 : 0)
        .str();
}

inline std::string to_json(const MomentTable& s)
{
    JsonObject o;
    for (int i = 1; i <= 3; ++i) {
        for (int j = 1; j <= 2; ++j) o.number("s" + std::to_string(i) + std::to_string(j), s(i, j));
    }
    return o.str();
}

inline std::string to_json(const PhiCoefficients& phi)
{
    return JsonObject{}
        .number("phi0", phi.phi0)
        .number("phi1", phi.phi1)
        .number("phi2", phi.phi2)
        .number("phi3", phi.phi3)
        .str();
}

/// One risk-debug record: moments, both phi sets, the chosen p and the risk.
inline std::string risk_debug_json(const PartitionSpec& spec, const MomentTable& sums, std::int64_t m,
                                   std::optional<std::int64_t> fixed_p = std::nullopt)
{
    const auto phi = phi_coefficients(sums, m);
    const auto choice = select_p(phi, m);
    const std::int64_t p = fixed_p.value_or(choice.p_hat);
    if (fixed_p) check_p(m, static_cast<double>(p));
    return JsonObject{}
        .integer("N", spec.resolution)
        .integer("k", spec.central_lo)
        .integer("l", spec.central_hi)
        .integer("m", m)
        .raw("s", to_json(sums))
        .number("phi0", phi.phi0)
        .number("phi1", phi.phi1)
        .number("phi2", phi.phi2)
        .number("phi3", phi.phi3)
        .raw("printed_phi", to_json(printed_phi_coefficients(sums, m)))
        .integer("p_hat", p)
        .number("p_real", choice.p_real)
        .boolean("p_independent", choice.p_independent)
        .boolean("rule_overridden", choice.rule_overridden)
        .number("risk", lpo_risk(sums, m, p))
        .str();
}

} // namespace lpo_pi0
