#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace pafit {

enum class PrefKind : int { Power = 0, Piecewise = 1 };

// Parameters of the preference function.  Power form: g(k) = k^alpha + delta.
// Piecewise form grows like the power form up to the threshold gamma and
// linearly with slope beta above it.
struct PreferenceParams {
    PrefKind kind = PrefKind::Power;
    double alpha = 1.0;
    double beta = 1.0;   // piecewise only
    double gamma = 1.0;  // piecewise only
    double delta = 0.0;
    bool delta_fixed = false;  // delta structurally 0, excluded from inference

    bool valid() const {
        if (!(alpha > 0)) return false;
        if (delta_fixed ? delta != 0.0 : !(delta > 0)) return false;
        if (kind == PrefKind::Piecewise && (!(beta > 0) || !(gamma > 0))) return false;
        return true;
    }

    int free_dim() const {
        return (kind == PrefKind::Piecewise ? 3 : 1) + (delta_fixed ? 0 : 1);
    }
};

// k^alpha with the convention 0^alpha = 0 for all alpha > 0.
inline double pow_k(int k, double alpha) {
    if (k == 0) return 0.0;
    if (k == 1) return 1.0;
    return std::exp(alpha * std::log(static_cast<double>(k)));
}

// Preference weight g(k).  Both piecewise branches agree at k = gamma.
inline double pref_weight(int k, const PreferenceParams& p) {
    if (p.kind == PrefKind::Power || static_cast<double>(k) <= p.gamma)
        return pow_k(k, p.alpha) + p.delta;
    return std::exp(p.alpha * std::log(p.gamma)) + p.beta * (k - p.gamma) + p.delta;
}

// Total weight over a degree histogram: sum_k count(k) * g(k).
// The normalized weight of a degree-k vertex is g(k) / total.
struct NormalizedWeights {
    double total = 0.0;
    double log_total = 0.0;
};

inline NormalizedWeights normalize(
    std::span<const std::pair<int, std::int64_t>> degree_histogram,
    const PreferenceParams& p) {
    if (degree_histogram.empty())
        throw std::invalid_argument("normalize: empty degree histogram");
    double total = 0.0;
    for (const auto& [k, count] : degree_histogram)
        total += static_cast<double>(count) * pref_weight(k, p);
    if (!(total > 0))
        throw std::domain_error("normalize: degenerate weights (all g(k) = 0)");
    return {total, std::log(total)};
}

}  // namespace pafit
