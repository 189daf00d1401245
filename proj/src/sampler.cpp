#include <pafit/sampler.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

#include <pafit/densities.hpp>

#include <json.hpp>

namespace pafit {

std::vector<double> ChainResult::column(const std::string& name) const {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw std::invalid_argument("ChainResult: no parameter '" + name + "'");
    const std::size_t j = static_cast<std::size_t>(it - names.begin());
    std::vector<double> out;
    out.reserve(samples.size());
    for (const auto& draw : samples) out.push_back(draw[j]);
    return out;
}

double ChainResult::mean(const std::string& name) const {
    const auto col = column(name);
    double s = 0.0;
    for (double v : col) s += v;
    return s / static_cast<double>(col.size());
}

double ChainResult::quantile(const std::string& name, double q) const {
    auto col = column(name);
    if (col.empty()) throw std::runtime_error("ChainResult: no samples");
    std::sort(col.begin(), col.end());
    const double pos = q * static_cast<double>(col.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, col.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return col[lo] * (1.0 - frac) + col[hi] * frac;
}

double ess(const std::vector<double>& trace) {
    const std::size_t n = trace.size();
    if (n < 10) throw std::invalid_argument("ess: trace length must be >= 10");
    const auto [lo, hi] = std::minmax_element(trace.begin(), trace.end());
    if (*lo == *hi) return 0.0;  // degenerate: constant trace
    double mean = 0.0;
    for (double v : trace) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : trace) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n - 1);
    if (!(var > 0)) return 0.0;

    // Overlapping batch means estimate of the asymptotic variance.
    const std::size_t b = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
    const std::size_t m = n - b + 1;
    double window = 0.0;
    for (std::size_t i = 0; i < b; ++i) window += trace[i];
    double ssq = 0.0;
    for (std::size_t i = 0;; ++i) {
        const double bm = window / static_cast<double>(b) - mean;
        ssq += bm * bm;
        if (i + 1 == m) break;
        window += trace[i + b] - trace[i];
    }
    const double asym_var = static_cast<double>(n) * static_cast<double>(b) /
                            (static_cast<double>(n - b) * static_cast<double>(m)) * ssq;
    if (!(asym_var > 0)) return 0.0;
    return std::min(static_cast<double>(n) * var / asym_var, static_cast<double>(n));
}

ChainResult run_mh(const std::function<double(const std::vector<double>&)>& log_target,
                   const std::vector<double>& init,
                   const std::vector<std::string>& names,
                   const std::function<std::vector<double>(const std::vector<double>&)>& to_constrained,
                   const ChainConfig& cfg) {
    if (!cfg.valid()) throw std::invalid_argument("run_mh: invalid ChainConfig");
    const std::size_t dim = init.size();
    if (names.size() != dim) throw std::invalid_argument("run_mh: names/init size mismatch");

    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> norm(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    std::vector<double> state = init;
    double lp = log_target(state);
    if (!std::isfinite(lp))
        throw std::runtime_error("run_mh: log posterior not finite at initialization");

    std::vector<double> log_scale(dim, std::log(cfg.initial_step));
    std::vector<long> accepted(dim, 0), proposed(dim, 0);
    long burn_accepts = 0;

    ChainResult result;
    result.names = names;
    result.samples.reserve(static_cast<std::size_t>(cfg.recorded_draws()));
    result.log_post.reserve(static_cast<std::size_t>(cfg.recorded_draws()));

    std::vector<double> proposal(dim);
    for (long it = 0; it < cfg.iterations; ++it) {
        const bool burning = it < cfg.burn_in;
        for (std::size_t j = 0; j < dim; ++j) {
            proposal = state;
            proposal[j] += std::exp(log_scale[j]) * norm(rng);
            const double lp_new = log_target(proposal);
            const bool accept = std::log(unif(rng)) < lp_new - lp;
            if (accept) {
                state = proposal;
                lp = lp_new;
                if (burning) ++burn_accepts;
            }
            if (burning && cfg.adapt) {
                // Robbins-Monro drift toward 0.44 acceptance, frozen after burn-in.
                const double gain = std::pow(static_cast<double>(it + 1), -0.6);
                log_scale[j] += gain * ((accept ? 1.0 : 0.0) - 0.44);
            }
            if (!burning) {
                ++proposed[j];
                if (accept) ++accepted[j];
            }
        }
        if (!burning && (it - cfg.burn_in + 1) % cfg.thin == 0) {
            result.samples.push_back(to_constrained(state));
            result.log_post.push_back(lp);
        }
    }

    result.adaptation_warning = cfg.burn_in > 0 && burn_accepts == 0;
    result.acceptance.resize(dim);
    for (std::size_t j = 0; j < dim; ++j)
        result.acceptance[j] = proposed[j] > 0
                                   ? static_cast<double>(accepted[j]) / static_cast<double>(proposed[j])
                                   : 0.0;
    if (result.samples.size() >= 10)
        for (const auto& name : names) result.ess[name] = ess(result.column(name));
    return result;
}

int median_positive_degree(const SufficientStats& stats) {
    std::vector<std::pair<int, std::int64_t>> hist;
    for (const auto& ts : stats.steps)
        for (const auto& [k, c] : ts.degree_counts)
            if (k > 0) hist.emplace_back(k, c);
    if (hist.empty()) return 1;
    std::sort(hist.begin(), hist.end());
    std::int64_t total = 0;
    for (const auto& [k, c] : hist) total += c;
    std::int64_t seen = 0;
    for (const auto& [k, c] : hist) {
        seen += c;
        if (2 * seen >= total) return k;
    }
    return hist.back().first;
}

ChainResult fit_single(const SufficientStats& stats, PrefKind kind, bool delta_fixed,
                       const SingleModelPrior& prior, const ChainConfig& cfg) {
    std::vector<std::string> names{"alpha"};
    std::vector<double> init{0.0};  // alpha = 1
    if (kind == PrefKind::Piecewise) {
        names.insert(names.end(), {"beta", "gamma"});
        init.push_back(0.0);  // beta = 1
        init.push_back(std::log(static_cast<double>(std::max(median_positive_degree(stats), 1))));
    }
    if (!delta_fixed) {
        names.push_back("delta");
        init.push_back(0.0);  // delta = 1
    }

    auto to_params = [kind, delta_fixed](const std::vector<double>& v) {
        PreferenceParams p;
        p.kind = kind;
        p.delta_fixed = delta_fixed;
        std::size_t j = 0;
        p.alpha = std::exp(v[j++]);
        if (kind == PrefKind::Piecewise) {
            p.beta = std::exp(v[j++]);
            p.gamma = std::exp(v[j++]);
        }
        p.delta = delta_fixed ? 0.0 : std::exp(v[j++]);
        return p;
    };

    auto log_target = [&stats, &prior, to_params](const std::vector<double>& v) {
        double lp = 0.0;
        for (double x : v) lp += normal_logpdf(x, prior.log_mean, prior.log_sd);
        return lp + loglik_collapsed(stats, to_params(v), prior.rate);
    };
    auto to_constrained = [](const std::vector<double>& v) {
        std::vector<double> out(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::exp(v[i]);
        return out;
    };
    return run_mh(log_target, init, names, to_constrained, cfg);
}

void write_trace_csv(const ChainResult& result, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_trace_csv: cannot open '" + path + "'");
    out << "draw";
    for (const auto& name : result.names) out << ',' << name;
    out << ",log_post\n";
    out.precision(17);
    for (std::size_t i = 0; i < result.samples.size(); ++i) {
        out << i + 1;
        for (double v : result.samples[i]) out << ',' << v;
        out << ',' << result.log_post[i] << '\n';
    }
}

std::string summary_json(const ChainResult& result) {
    nlohmann::json params = nlohmann::json::object();
    for (const auto& name : result.names) {
        const auto col = result.column(name);
        double mean = result.mean(name);
        double sq = 0.0;
        for (double v : col) sq += (v - mean) * (v - mean);
        const double sd = col.size() > 1 ? std::sqrt(sq / static_cast<double>(col.size() - 1)) : 0.0;
        params[name] = {
            {"mean", mean},
            {"sd", sd},
            {"q2.5", result.quantile(name, 0.025)},
            {"q50", result.quantile(name, 0.5)},
            {"q97.5", result.quantile(name, 0.975)},
            {"ess", result.ess.count(name) ? result.ess.at(name) : 0.0},
        };
    }
    nlohmann::json j{
        {"draws", result.samples.size()},
        {"parameters", params},
        {"acceptance", result.acceptance},
        {"adaptation_warning", result.adaptation_warning},
    };
    return j.dump(2);
}

}  // namespace pafit
