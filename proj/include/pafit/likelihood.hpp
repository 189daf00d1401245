#pragma once

#include <utility>

#include <pafit/evolution_store.hpp>
#include <pafit/preference.hpp>

namespace pafit {

// Gamma(a, b) prior on the Poisson rate mu; b is the rate parameter.
struct RatePrior {
    double shape = 1.0;  // a
    double rate = 1.0;   // b

    // (mean, sd) parametrisation: a = mean^2/sd^2, b = mean/sd^2.
    static RatePrior from_moments(double mean, double sd) {
        return {mean * mean / (sd * sd), mean / (sd * sd)};
    }
    std::pair<double, double> moments() const {
        return {shape / rate, std::sqrt(shape) / rate};
    }
};

// Log-likelihood of the observed increments given degrees and a fixed rate:
//   sum_t [ -mu + A_t log mu + sum_{k,y} n_{t,k,y} (y (log g(k) - log total_t) - log y!) ]
// Returns -infinity when some y > 0 has g(k) = 0 (impossible observation).
double loglik_full(const SufficientStats& stats, const PreferenceParams& params, double mu);

// Log-likelihood with mu integrated out against its Gamma prior:
//   log B_T - sum log y! + a log b - log G(a) + log G(a + A_T) - (a + A_T) log(b + T)
// The log y! constant is retained so the value equals the log of the
// integral of the Gamma prior times the full likelihood.
double loglik_collapsed(const SufficientStats& stats, const PreferenceParams& params,
                        const RatePrior& prior);

// Conjugate update for mu: Gamma(a + A_T, b + T).
RatePrior posterior_mu(const SufficientStats& stats, const RatePrior& prior);

// Straight-line serial implementations, kept as the reference the parallel
// kernels are tested and benchmarked against.
namespace reference {
double loglik_full(const SufficientStats& stats, const PreferenceParams& params, double mu);
double loglik_collapsed(const SufficientStats& stats, const PreferenceParams& params,
                        const RatePrior& prior);
}  // namespace reference

}  // namespace pafit
