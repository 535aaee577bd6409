// Estimates pi0 on one simulated sample and compares BH with the plug-in procedure.

#include "lpo_pi0/lpo_pi0.hpp"

#include <cstdio>

int main()
{
    using namespace lpo_pi0;

    RandomStream rng(2024, 0);
    const auto data = sample_beta_tail(0.7, 25.0, 1000, rng);

    for (auto method : {Pi0Method::lpo, Pi0Method::loo, Pi0Method::storey}) {
        EstimatorConfig cfg;
        cfg.method = method;
        const auto est = estimate(data.sample, cfg);
        std::printf("%-7s pi0 = %.4f  [lambda, mu] = [%.3f, %.3f]\n", std::string(to_string(method)).c_str(), est.pi0,
                    est.lambda_hat, est.mu_hat);
    }

    const auto lpo = estimate_pi0(data.sample, EstimatorConfig{});
    const auto bh = bh_procedure(data.sample, 0.15);
    const auto plugin = plugin_mtp(data.sample, 0.15, lpo, 0.0);
    const auto bh_err = error_metrics(bh, data.is_null);
    const auto plugin_err = error_metrics(plugin, data.is_null);
    std::printf("\nalpha = 0.15, true pi0 = 0.7\n");
    std::printf("bh      rejections %4lld  FDP %.3f  FNR %.3f\n", static_cast<long long>(bh.k_hat), bh_err.fdp, bh_err.fnr);
    std::printf("plug-in rejections %4lld  FDP %.3f  FNR %.3f\n", static_cast<long long>(plugin.k_hat), plugin_err.fdp,
                plugin_err.fnr);
}
