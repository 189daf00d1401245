#pragma once

#include <cmath>
#include <limits>
#include <numbers>

namespace pafit {

inline double normal_logpdf(double x, double mean, double sd) {
    const double z = (x - mean) / sd;
    return -0.5 * z * z - std::log(sd) - 0.5 * std::log(2.0 * std::numbers::pi);
}

// log pi(sigma) = log[ 2 / (pi r (1 + (sigma/r)^2)) ] for sigma > 0.
inline double half_cauchy_logpdf(double sigma, double scale) {
    if (!(scale > 0)) return std::numeric_limits<double>::quiet_NaN();
    if (!(sigma > 0)) return -std::numeric_limits<double>::infinity();
    const double z = sigma / scale;
    return std::log(2.0) - std::log(std::numbers::pi) - std::log(scale) - std::log1p(z * z);
}

}  // namespace pafit
