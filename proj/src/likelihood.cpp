#include <pafit/likelihood.hpp>

#include <cmath>
#include <limits>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pafit {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Shared per-time-point kernel.  log_bt accumulates
// sum_{k,y} n y (log g(k) - log total), log_fact accumulates sum n log y!.
// Returns false on an impossible observation (y > 0 with g(k) = 0).
bool step_terms(const TimeStats& ts, const PreferenceParams& params,
                double& log_bt, double& log_fact) {
    if (ts.degree_counts.empty()) {
        // No existing vertices: empty product, contributes nothing.
        log_bt = log_fact = 0.0;
        return true;
    }
    const double log_total = normalize(ts.degree_counts, params).log_total;
    double bt = 0.0, fact = 0.0;
    for (const auto& [ky, n] : ts.increment_counts) {
        const auto [k, y] = ky;
        const double g = pref_weight(k, params);
        if (!(g > 0)) return false;
        bt += static_cast<double>(n) * y * (std::log(g) - log_total);
        fact += static_cast<double>(n) * std::lgamma(static_cast<double>(y) + 1.0);
    }
    log_bt = bt;
    log_fact = fact;
    return true;
}

// Kahan summation; term counts reach ~1e7 at full-data scale.
double compensated_sum(const std::vector<double>& terms) {
    double sum = 0.0, c = 0.0;
    for (double v : terms) {
        const double y = v - c;
        const double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    return sum;
}

// Steps without existing vertices drop out of the likelihood entirely,
// including the exp(-mu T) factor.
double active_steps(const SufficientStats& stats) {
    double n = 0;
    for (const auto& ts : stats.steps)
        if (!ts.degree_counts.empty()) n += 1.0;
    return n;
}

// Per-t contributions evaluated in parallel, then reduced serially in
// time order so the result is independent of the thread count.
bool accumulate_terms(const SufficientStats& stats, const PreferenceParams& params,
                      double& log_bt_total, double& log_fact_total) {
    const int T = stats.horizon();
    std::vector<double> bt(T), fact(T);
    bool ok = true;
#pragma omp parallel for schedule(static) reduction(&& : ok)
    for (int t = 0; t < T; ++t) {
        if (!step_terms(stats.steps[t], params, bt[t], fact[t])) ok = false;
    }
    if (!ok) return false;
    log_bt_total = compensated_sum(bt);
    log_fact_total = compensated_sum(fact);
    return true;
}

}  // namespace

double loglik_full(const SufficientStats& stats, const PreferenceParams& params, double mu) {
    if (!(mu > 0)) throw std::invalid_argument("loglik_full: mu must be positive");
    double log_bt, log_fact;
    if (!accumulate_terms(stats, params, log_bt, log_fact)) return kNegInf;
    const double a_total = static_cast<double>(stats.total_increments());
    const double T = active_steps(stats);
    return -mu * T + a_total * std::log(mu) + log_bt - log_fact;
}

double loglik_collapsed(const SufficientStats& stats, const PreferenceParams& params,
                        const RatePrior& prior) {
    double log_bt, log_fact;
    if (!accumulate_terms(stats, params, log_bt, log_fact)) return kNegInf;
    const double a = prior.shape, b = prior.rate;
    const double a_total = static_cast<double>(stats.total_increments());
    const double T = active_steps(stats);
    return log_bt - log_fact + a * std::log(b) - std::lgamma(a) +
           std::lgamma(a + a_total) - (a + a_total) * std::log(b + T);
}

RatePrior posterior_mu(const SufficientStats& stats, const RatePrior& prior) {
    return {prior.shape + static_cast<double>(stats.total_increments()),
            prior.rate + active_steps(stats)};
}

namespace reference {

double loglik_full(const SufficientStats& stats, const PreferenceParams& params, double mu) {
    if (!(mu > 0)) throw std::invalid_argument("loglik_full: mu must be positive");
    double sum = 0.0;
    for (const auto& ts : stats.steps) {
        if (ts.degree_counts.empty()) continue;
        const double log_total = normalize(ts.degree_counts, params).log_total;
        sum += -mu + static_cast<double>(ts.total_increment) * std::log(mu);
        for (const auto& [ky, n] : ts.increment_counts) {
            const auto [k, y] = ky;
            const double g = pref_weight(k, params);
            if (!(g > 0)) return kNegInf;
            sum += static_cast<double>(n) *
                   (y * (std::log(g) - log_total) - std::lgamma(static_cast<double>(y) + 1.0));
        }
    }
    return sum;
}

double loglik_collapsed(const SufficientStats& stats, const PreferenceParams& params,
                        const RatePrior& prior) {
    double log_bt = 0.0, log_fact = 0.0;
    double T = 0.0;
    for (const auto& ts : stats.steps) {
        if (ts.degree_counts.empty()) continue;
        T += 1.0;
        const double log_total = normalize(ts.degree_counts, params).log_total;
        for (const auto& [ky, n] : ts.increment_counts) {
            const auto [k, y] = ky;
            const double g = pref_weight(k, params);
            if (!(g > 0)) return kNegInf;
            log_bt += static_cast<double>(n) * y * (std::log(g) - log_total);
            log_fact += static_cast<double>(n) * std::lgamma(static_cast<double>(y) + 1.0);
        }
    }
    const double a = prior.shape, b = prior.rate;
    const double a_total = static_cast<double>(stats.total_increments());
    return log_bt - log_fact + a * std::log(b) - std::lgamma(a) +
           std::lgamma(a + a_total) - (a + a_total) * std::log(b + T);
}

}  // namespace reference

}  // namespace pafit
