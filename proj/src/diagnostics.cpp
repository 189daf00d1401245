#include <pafit/diagnostics.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace pafit {

std::vector<BinRow> smoothed_averages(const IncrementPanel& panel, Category category, int t,
                                      const GeometricBins& bins) {
    if (!bins.valid()) throw std::invalid_argument("smoothed_averages: invalid bin spec");
    if (t < 1 || t > panel.horizon()) throw std::invalid_argument("smoothed_averages: bad time index");
    const auto& rows = panel.steps[t - 1];
    if (rows.empty()) throw std::invalid_argument("smoothed_averages: no existing vertices at t");

    int max_degree = 0;
    for (const PanelRow& row : rows) max_degree = std::max(max_degree, row.k_prev);
    if (max_degree < bins.min_degree) return {};

    // Bin edges grow geometrically; bin b covers [edge_b, edge_{b+1}).
    std::vector<double> edges{static_cast<double>(bins.min_degree)};
    while (edges.back() <= static_cast<double>(max_degree)) edges.push_back(edges.back() * bins.ratio);

    struct Acc {
        double k_sum = 0.0;
        double inc_sum = 0.0;
        std::int64_t count = 0;
    };
    std::vector<Acc> acc(edges.size() - 1);
    for (const PanelRow& row : rows) {
        if (row.k_prev < bins.min_degree) continue;
        const std::size_t b = static_cast<std::size_t>(
            std::log(static_cast<double>(row.k_prev) / edges.front()) / std::log(bins.ratio));
        const std::size_t bin = std::min(b, acc.size() - 1);
        const int inc = category == Category::Internal ? row.x
                      : category == Category::External ? row.y
                                                       : row.z;
        acc[bin].k_sum += row.k_prev;
        acc[bin].inc_sum += inc;
        ++acc[bin].count;
    }

    std::vector<BinRow> table;
    for (const Acc& a : acc) {
        if (a.count == 0) continue;
        BinRow r;
        r.k_center = a.k_sum / static_cast<double>(a.count);
        r.mean_increment = a.inc_sum / static_cast<double>(a.count);
        r.count = a.count;
        r.zero_mean = !(r.mean_increment > 0);
        table.push_back(r);
    }
    return table;
}

double slope1_intercept(const std::vector<BinRow>& table) {
    double sum = 0.0;
    int n = 0;
    for (const BinRow& r : table) {
        if (r.zero_mean || !(r.k_center > 0)) continue;
        sum += std::log(r.mean_increment) - std::log(r.k_center);
        ++n;
    }
    if (n == 0) throw std::runtime_error("slope1_intercept: no usable bins");
    return sum / static_cast<double>(n);
}

double free_fit_slope(const std::vector<BinRow>& table) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const BinRow& r : table) {
        if (r.zero_mean || !(r.k_center > 0)) continue;
        const double x = std::log(r.k_center), y = std::log(r.mean_increment);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 2) throw std::runtime_error("free_fit_slope: need >= 2 usable bins");
    const double denom = n * sxx - sx * sx;
    if (!(std::abs(denom) > 0)) throw std::runtime_error("free_fit_slope: degenerate bins");
    return (n * sxy - sx * sy) / denom;
}

SurvivalFit survival_plot_data(const std::vector<int>& degrees) {
    std::vector<int> pos;
    for (int k : degrees)
        if (k > 0) pos.push_back(k);
    if (pos.size() < 10) throw std::invalid_argument("survival_plot_data: need >= 10 positive degrees");
    std::sort(pos.begin(), pos.end());

    SurvivalFit fit;
    const double n = static_cast<double>(pos.size());
    for (std::size_t i = 0; i < pos.size();) {
        std::size_t j = i;
        while (j < pos.size() && pos[j] == pos[i]) ++j;
        // P(K >= k) counts this value and everything above it.
        fit.points.push_back({pos[i], static_cast<double>(pos.size() - i) / n});
        i = j;
    }

    // Body fit: least squares on log-log, degrees below the 95th percentile.
    const int cutoff = pos[static_cast<std::size_t>(0.95 * (n - 1))];
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (const SurvivalPoint& pt : fit.points) {
        if (pt.k > cutoff) continue;
        const double x = std::log(static_cast<double>(pt.k)), y = std::log(pt.survival);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    const double denom = m * sxx - sx * sx;
    if (m >= 2 && std::abs(denom) > 1e-12) {
        fit.slope = (m * sxy - sx * sy) / denom;
        fit.intercept = (sy - fit.slope * sx) / m;
        fit.fit_valid = true;
        double tail_resid = 0.0;
        int tail_n = 0;
        for (const SurvivalPoint& pt : fit.points) {
            if (pt.k <= cutoff) continue;
            tail_resid += std::log(pt.survival) -
                          (fit.intercept + fit.slope * std::log(static_cast<double>(pt.k)));
            ++tail_n;
        }
        fit.tail_deviates = tail_n > 0 && tail_resid / tail_n > 0;
    }
    return fit;
}

double degree_correlation(const std::vector<int>& in_degrees, const std::vector<int>& out_degrees) {
    if (in_degrees.size() != out_degrees.size())
        throw std::invalid_argument("degree_correlation: size mismatch");
    const std::size_t n = in_degrees.size();
    if (n < 2) throw std::invalid_argument("degree_correlation: need >= 2 vertices");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += in_degrees[i];
        my += out_degrees[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = in_degrees[i] - mx, dy = out_degrees[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (!(sxx > 0) || !(syy > 0))
        throw std::domain_error("degree_correlation: zero variance, correlation undefined");
    return sxy / std::sqrt(sxx * syy);
}

void write_smoothed_csv(const std::vector<BinRow>& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_smoothed_csv: cannot open '" + path + "'");
    out << "k_center,mean_increment,count,zero_mean\n";
    out.precision(12);
    for (const BinRow& r : table)
        out << r.k_center << ',' << r.mean_increment << ',' << r.count << ','
            << (r.zero_mean ? 1 : 0) << '\n';
}

void write_survival_csv(const SurvivalFit& fit, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_survival_csv: cannot open '" + path + "'");
    out << "k,survival,fitted\n";
    out.precision(12);
    for (const SurvivalPoint& pt : fit.points) {
        out << pt.k << ',' << pt.survival << ',';
        if (fit.fit_valid)
            out << std::exp(fit.intercept + fit.slope * std::log(static_cast<double>(pt.k)));
        else
            out << "NA";
        out << '\n';
    }
}

}  // namespace pafit
