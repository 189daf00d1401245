#pragma once

#include <pafit/sampler.hpp>

namespace pafit {

// Pseudoprior for (beta, gamma) while the power model is active: independent
// normals on the log scale.
struct Pseudoprior {
    double log_beta_mean = 0.0;
    double log_beta_sd = 1.0;
    double log_gamma_mean = 0.0;
    double log_gamma_sd = 1.0;

    bool valid() const { return log_beta_sd > 0 && log_gamma_sd > 0; }
};

struct SelectionConfig {
    double p = 0.5;  // prior probability of the piecewise preference function
    Pseudoprior pseudoprior;
    ChainConfig chain;
    bool delta_fixed = false;

    bool valid() const { return p > 0 && p < 1 && pseudoprior.valid() && chain.valid(); }
};

struct SelectionResult {
    std::vector<int> r_trace;  // recorded model indicators
    double posterior_prob_r1 = 0.0;
    double bayes_factor = 0.0;  // B10, or the bound value when bounded
    enum class Bound { None, Lower, Upper } bound = Bound::None;
    ChainResult power_draws;      // draws recorded while r = 0
    ChainResult piecewise_draws;  // draws recorded while r = 1
    double p = 0.5;
};

// Within-MCMC selection between the power and piecewise preference
// functions.  Each iteration updates the active parameters by one MH sweep,
// draws inactive (beta, gamma) from the pseudoprior, and flips the model
// indicator from the two joint-posterior weights.
SelectionResult select(const SufficientStats& stats, const SelectionConfig& cfg,
                       const SingleModelPrior& prior);

// Moment-matched pseudoprior from a pilot piecewise fit.  Falls back to the
// prior when the pilot variance is degenerate.
Pseudoprior tune_pseudoprior(const ChainResult& pilot, const SingleModelPrior& prior,
                             bool* degenerate = nullptr);

// 95% Monte Carlo interval for B10 from the r-trace (ESS-adjusted binomial
// error on the posterior probability, mapped through the odds formula).
std::pair<double, double> bayes_factor_interval(const SelectionResult& result);

std::string selection_json(const SelectionResult& result, const SelectionConfig& cfg);

}  // namespace pafit
