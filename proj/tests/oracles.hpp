#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

#include "test_support.hpp"

#include <pafit/preference.hpp>

namespace pafit::testing {

// Brute-force per-vertex Poisson log-likelihood, the independent oracle for
// the histogram-based implementation.
inline double brute_force_loglik(const RawPanel& raw, const PreferenceParams& params, double mu) {
    double lp = 0.0;
    for (std::size_t t = 0; t < raw.degrees.size(); ++t) {
        double total = 0.0;
        for (int k : raw.degrees[t]) total += pref_weight(k, params);
        for (std::size_t i = 0; i < raw.degrees[t].size(); ++i) {
            const double mean = mu * pref_weight(raw.degrees[t][i], params) / total;
            const int y = raw.increments[t][i];
            if (mean == 0.0 && y == 0) continue;
            lp += -mean + y * std::log(mean) - std::lgamma(static_cast<double>(y) + 1.0);
        }
    }
    return lp;
}

// Adaptive Simpson quadrature.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol, int depth = 28) {
    auto simpson = [&](double lo, double hi) {
        return (hi - lo) / 6.0 * (f(lo) + 4.0 * f(0.5 * (lo + hi)) + f(hi));
    };
    std::function<double(double, double, double, double, int)> recurse =
        [&](double lo, double hi, double whole, double eps, int d) -> double {
        const double mid = 0.5 * (lo + hi);
        const double left = simpson(lo, mid), right = simpson(mid, hi);
        if (d <= 0 || std::abs(left + right - whole) < 15.0 * eps)
            return left + right + (left + right - whole) / 15.0;
        return recurse(lo, mid, left, eps / 2.0, d - 1) + recurse(mid, hi, right, eps / 2.0, d - 1);
    };
    const double whole = simpson(a, b);
    return recurse(a, b, whole, tol, depth);
}

// log of the integral of Gamma(mu; a, b) times the brute-force likelihood,
// by quadrature around the integrand's peak.
inline double quadrature_collapsed(const RawPanel& raw, const PreferenceParams& params,
                                   double a, double b) {
    std::int64_t a_total = 0;
    for (const auto& step : raw.increments)
        for (int y : step) a_total += y;
    const double T = static_cast<double>(raw.degrees.size());

    auto log_integrand = [&](double mu) {
        if (!(mu > 0)) return -std::numeric_limits<double>::infinity();
        const double log_prior = a * std::log(b) - std::lgamma(a) + (a - 1.0) * std::log(mu) - b * mu;
        return log_prior + brute_force_loglik(raw, params, mu);
    };

    // The integrand is Gamma(a + A_T, b + T)-shaped in mu.
    const double shape = a + static_cast<double>(a_total);
    const double rate = b + T;
    const double mode = std::max((shape - 1.0) / rate, 1e-8);
    const double sd = std::sqrt(shape) / rate;
    const double peak = log_integrand(mode);
    // Widen until the truncated tails are negligible (skewed for small shape).
    double lo = std::max(mode - 12.0 * sd, 1e-12);
    double hi = mode + 14.0 * sd;
    while (log_integrand(hi) - peak > -60.0) hi += 10.0 * sd;
    while (lo > 1e-12 && log_integrand(lo) - peak > -60.0) lo = std::max(lo - 10.0 * sd, 1e-12);

    const double integral = adaptive_simpson(
        [&](double mu) { return std::exp(log_integrand(mu) - peak); }, lo, hi, 1e-13);
    if (!(integral > 0)) throw std::runtime_error("quadrature_collapsed: vanishing integral");
    return peak + std::log(integral);
}

}  // namespace pafit::testing
