#pragma once

#include <optional>

#include <pafit/evolution_store.hpp>

namespace pafit {

// Geometric degree bins [lo, lo*ratio), starting at min_degree.
struct GeometricBins {
    double ratio = 1.5;
    int min_degree = 1;

    bool valid() const { return ratio > 1.0 && min_degree >= 1; }
};

struct BinRow {
    double k_center = 0.0;  // mean degree of the vertices in the bin
    double mean_increment = 0.0;
    std::int64_t count = 0;
    bool zero_mean = false;  // cannot be placed on a log-log plot
};

// Mean increment per geometric degree bin at one time step.  Empty bins
// are omitted; zero-mean bins are kept but flagged.
std::vector<BinRow> smoothed_averages(const IncrementPanel& panel, Category category, int t,
                                      const GeometricBins& bins);

// Intercept of the best-fitting line with slope fixed to 1 on the log-log
// scale: mean over usable bins of (log mean_increment - log k).
double slope1_intercept(const std::vector<BinRow>& table);

// Free least-squares slope of log mean_increment against log k.
double free_fit_slope(const std::vector<BinRow>& table);

struct SurvivalPoint {
    int k = 0;
    double survival = 0.0;  // empirical P(K >= k)
};

struct SurvivalFit {
    std::vector<SurvivalPoint> points;
    double slope = 0.0;      // least-squares on the body (k below 95th pct)
    double intercept = 0.0;
    bool fit_valid = false;  // false when the body is degenerate
    bool tail_deviates = false;  // upper-tail points lie above the fitted line
};

// Empirical survival function of positive degrees plus a body power-law fit.
// Requires at least 10 positive degrees.
SurvivalFit survival_plot_data(const std::vector<int>& degrees);

// Pearson correlation; throws on zero variance.
double degree_correlation(const std::vector<int>& in_degrees, const std::vector<int>& out_degrees);

void write_smoothed_csv(const std::vector<BinRow>& table, const std::string& path);
void write_survival_csv(const SurvivalFit& fit, const std::string& path);

}  // namespace pafit
