#pragma once

#include <pafit/densities.hpp>
#include <pafit/sampler.hpp>

namespace pafit {

// Hyperprior of one hyperparameter pair (mu_eta, sigma_eta):
// mu_eta ~ N(m, s^2), sigma_eta ~ half-Cauchy(r).
struct HyperPrior {
    double m = 1.0;
    double s = 10.0;
    double r = 5.0;
};

// Hyperprior constants for every parameter family plus the single-model
// prior constants.  NaN means "fill from the data at fit time" (gamma's
// mean from the median degree, mu's mean from the average increment total).
struct HyperConfig {
    HyperPrior alpha{1.0, 10.0, 5.0};
    HyperPrior beta{1.0, 10.0, 5.0};
    HyperPrior gamma{std::numeric_limits<double>::quiet_NaN(), 10.0, 5.0};
    HyperPrior delta{1.0, 10.0, 5.0};
    HyperPrior mu{std::numeric_limits<double>::quiet_NaN(), 10.0, 5.0};
    SingleModelPrior single;
};

// Per-period collapsed likelihood under the (mu_mu, sigma_mu)
// reparametrisation: a = mu^2/sigma^2, b = mu/sigma^2, T = T_s.
double loglik_period(const SufficientStats& stats_s, const PreferenceParams& params,
                     double mu_mu, double sigma_mu);

// Blockwise random-walk Metropolis over the joint posterior of the
// per-period parameters, their normal-prior hyperparameters and the rate
// hyperparameters.  Parameter names follow the pattern alpha_s1..alpha_sS,
// mu_alpha, sigma_alpha, ..., mu_mu, sigma_mu.
// Default chain settings for this model: burn-in 10000, thin 20.
ChainResult fit_hier(const std::vector<SufficientStats>& period_stats, PrefKind kind,
                     bool delta_fixed, const HyperConfig& cfg, const ChainConfig& chain_cfg);

}  // namespace pafit
