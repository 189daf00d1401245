#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <pafit/likelihood.hpp>

namespace pafit {

struct ChainConfig {
    long iterations = 101000;  // total MH iterations including burn-in
    long burn_in = 1000;
    long thin = 10;
    double initial_step = 0.5;  // proposal sd on the sampling scale
    std::uint64_t seed = 1;
    bool adapt = true;  // Robbins-Monro scale adaptation during burn-in only

    long recorded_draws() const { return (iterations - burn_in) / thin; }
    bool valid() const { return iterations > burn_in && burn_in >= 0 && thin >= 1; }
};

struct ChainResult {
    std::vector<std::string> names;
    std::vector<std::vector<double>> samples;  // draw-major, constrained scale
    std::vector<double> log_post;
    std::vector<double> acceptance;  // per component, post burn-in
    std::map<std::string, double> ess;
    bool adaptation_warning = false;  // zero acceptance over burn-in

    std::vector<double> column(const std::string& name) const;
    double mean(const std::string& name) const;
    double quantile(const std::string& name, double q) const;
};

// Effective sample size by overlapping batch means.  Requires length >= 10;
// a (numerically) constant trace reports ESS = 0 as the degenerate flag.
double ess(const std::vector<double>& trace);

// Componentwise Gaussian random-walk Metropolis on an unconstrained vector.
// log_target is evaluated on the sampling scale; to_constrained maps a
// state to the values that get recorded.
ChainResult run_mh(const std::function<double(const std::vector<double>&)>& log_target,
                   const std::vector<double>& init,
                   const std::vector<std::string>& names,
                   const std::function<std::vector<double>(const std::vector<double>&)>& to_constrained,
                   const ChainConfig& cfg);

// Priors of the single model: independent normals on the log-transformed
// preference parameters plus a Gamma prior on the rate.
struct SingleModelPrior {
    double log_mean = 0.0;
    double log_sd = 10.0;
    RatePrior rate{1.0, 0.1};
};

// Random-walk Metropolis fit of the collapsed single-model posterior.
// `shape` carries the preference kind, delta_fixed and the initial gamma.
ChainResult fit_single(const SufficientStats& stats, PrefKind kind, bool delta_fixed,
                       const SingleModelPrior& prior, const ChainConfig& cfg);

// Median of the positive degrees over the whole panel; initialization
// point for gamma.
int median_positive_degree(const SufficientStats& stats);

// Trace CSV (draw,<params...>,log_post) and summary JSON export.
void write_trace_csv(const ChainResult& result, const std::string& path);
std::string summary_json(const ChainResult& result);

}  // namespace pafit
