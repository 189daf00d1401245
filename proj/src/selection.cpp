#include <pafit/selection.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <pafit/densities.hpp>

#include <json.hpp>

namespace pafit {

namespace {

PreferenceParams params_from(const std::vector<double>& u, PrefKind kind, bool delta_fixed) {
    PreferenceParams p;
    p.kind = kind;
    p.delta_fixed = delta_fixed;
    p.alpha = std::exp(u[0]);
    p.beta = std::exp(u[1]);
    p.gamma = std::exp(u[2]);
    p.delta = delta_fixed ? 0.0 : std::exp(u[3]);
    return p;
}

}  // namespace

SelectionResult select(const SufficientStats& stats, const SelectionConfig& cfg,
                       const SingleModelPrior& prior) {
    if (!cfg.valid()) throw std::invalid_argument("select: invalid SelectionConfig");
    const auto& chain = cfg.chain;
    const bool dfix = cfg.delta_fixed;

    std::mt19937_64 rng(chain.seed);
    std::normal_distribution<double> norm(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    // State layout: [log alpha, log beta, log gamma, log delta].
    std::vector<double> u{0.0, 0.0,
                          std::log(static_cast<double>(std::max(median_positive_degree(stats), 1))),
                          0.0};

    auto log_prior_component = [&prior](double v) {
        return normal_logpdf(v, prior.log_mean, prior.log_sd);
    };
    auto pseudo_logpdf = [&cfg](const std::vector<double>& v) {
        return normal_logpdf(v[1], cfg.pseudoprior.log_beta_mean, cfg.pseudoprior.log_beta_sd) +
               normal_logpdf(v[2], cfg.pseudoprior.log_gamma_mean, cfg.pseudoprior.log_gamma_sd);
    };
    // Collapsed posterior of the active parameters under model r.
    auto log_post = [&](const std::vector<double>& v, int r) {
        double lp = log_prior_component(v[0]);
        if (r == 1) lp += log_prior_component(v[1]) + log_prior_component(v[2]);
        if (!dfix) lp += log_prior_component(v[3]);
        return lp + loglik_collapsed(stats, params_from(v, r == 1 ? PrefKind::Piecewise : PrefKind::Power, dfix),
                                     prior.rate);
    };

    int r = 1;  // start in the richer model; burn-in sorts the rest out
    double lp = log_post(u, r);
    if (!std::isfinite(lp)) throw std::runtime_error("select: log posterior not finite at initialization");

    std::vector<double> log_scale(4, std::log(chain.initial_step));
    const double log_p1 = std::log(cfg.p), log_p0 = std::log1p(-cfg.p);

    SelectionResult result;
    result.p = cfg.p;
    result.power_draws.names = dfix ? std::vector<std::string>{"alpha"}
                                    : std::vector<std::string>{"alpha", "delta"};
    result.piecewise_draws.names = dfix ? std::vector<std::string>{"alpha", "beta", "gamma"}
                                        : std::vector<std::string>{"alpha", "beta", "gamma", "delta"};

    auto active = [&](int model) {
        std::vector<int> idx{0};
        if (model == 1) idx.insert(idx.end(), {1, 2});
        if (!dfix) idx.push_back(3);
        return idx;
    };

    std::vector<double> proposal(4);
    for (long it = 0; it < chain.iterations; ++it) {
        const bool burning = it < chain.burn_in;

        // Step 1: MH sweep over the active parameters.
        for (int j : active(r)) {
            proposal = u;
            proposal[j] += std::exp(log_scale[j]) * norm(rng);
            const double lp_new = log_post(proposal, r);
            const bool accept = std::log(unif(rng)) < lp_new - lp;
            if (accept) {
                u = proposal;
                lp = lp_new;
            }
            if (burning && chain.adapt) {
                const double gain = std::pow(static_cast<double>(it + 1), -0.6);
                log_scale[j] += gain * ((accept ? 1.0 : 0.0) - 0.44);
            }
        }

        // Step 2: refresh the inactive pair from the pseudoprior.
        if (r == 0) {
            u[1] = cfg.pseudoprior.log_beta_mean + cfg.pseudoprior.log_beta_sd * norm(rng);
            u[2] = cfg.pseudoprior.log_gamma_mean + cfg.pseudoprior.log_gamma_sd * norm(rng);
        }

        // Steps 3-5: joint-posterior weights of the two assembled vectors,
        // then flip the indicator.
        const double lw0 = log_post(u, 0) + pseudo_logpdf(u) + log_p0;
        const double lw1 = log_post(u, 1) + log_p1;
        const double prob0 = 1.0 / (1.0 + std::exp(lw1 - lw0));
        r = unif(rng) < prob0 ? 0 : 1;
        lp = log_post(u, r);

        if (!burning && (it - chain.burn_in + 1) % chain.thin == 0) {
            result.r_trace.push_back(r);
            auto& draws = r == 1 ? result.piecewise_draws : result.power_draws;
            std::vector<double> row;
            for (int j : active(r)) row.push_back(std::exp(u[j]));
            draws.samples.push_back(std::move(row));
            draws.log_post.push_back(lp);
        }
    }

    const auto n = static_cast<double>(result.r_trace.size());
    double ones = 0;
    for (int v : result.r_trace) ones += v;
    result.posterior_prob_r1 = ones / n;

    const double odds_prior = cfg.p / (1.0 - cfg.p);
    if (ones == n) {
        result.bound = SelectionResult::Bound::Lower;
        result.bayes_factor = (n - 1.0) / odds_prior;
    } else if (ones == 0) {
        result.bound = SelectionResult::Bound::Upper;
        result.bayes_factor = 1.0 / ((n - 1.0) * odds_prior);
    } else {
        result.bayes_factor = (ones / (n - ones)) / odds_prior;
    }

    for (auto* draws : {&result.power_draws, &result.piecewise_draws})
        if (draws->samples.size() >= 10)
            for (const auto& name : draws->names) draws->ess[name] = ess(draws->column(name));
    return result;
}

Pseudoprior tune_pseudoprior(const ChainResult& pilot, const SingleModelPrior& prior,
                             bool* degenerate) {
    if (pilot.samples.size() < 100)
        throw std::invalid_argument("tune_pseudoprior: pilot needs >= 100 draws");
    Pseudoprior pp;
    bool fell_back = false;
    auto match = [&](const std::string& name, double& mean_out, double& sd_out) {
        auto col = pilot.column(name);
        double m = 0.0;
        for (double& v : col) {
            v = std::log(v);
            m += v;
        }
        m /= static_cast<double>(col.size());
        double sq = 0.0;
        for (double v : col) sq += (v - m) * (v - m);
        const double sd = std::sqrt(sq / static_cast<double>(col.size() - 1));
        if (sd > 1e-12) {
            mean_out = m;
            sd_out = sd;
        } else {
            mean_out = prior.log_mean;
            sd_out = prior.log_sd;
            fell_back = true;
        }
    };
    match("beta", pp.log_beta_mean, pp.log_beta_sd);
    match("gamma", pp.log_gamma_mean, pp.log_gamma_sd);
    if (degenerate) *degenerate = fell_back;
    return pp;
}

std::pair<double, double> bayes_factor_interval(const SelectionResult& result) {
    const double n = static_cast<double>(result.r_trace.size());
    const double inf = std::numeric_limits<double>::infinity();
    if (result.bound == SelectionResult::Bound::Lower) return {result.bayes_factor, inf};
    if (result.bound == SelectionResult::Bound::Upper) return {0.0, result.bayes_factor};

    std::vector<double> trace(result.r_trace.begin(), result.r_trace.end());
    double n_eff = n;
    if (trace.size() >= 10) {
        const double e = ess(trace);
        if (e > 1.0) n_eff = e;
    }
    const double q = result.posterior_prob_r1;
    const double se = std::sqrt(q * (1.0 - q) / n_eff);
    const double lo = std::clamp(q - 1.96 * se, 0.5 / n, 1.0 - 0.5 / n);
    const double hi = std::clamp(q + 1.96 * se, 0.5 / n, 1.0 - 0.5 / n);
    const double odds_prior = result.p / (1.0 - result.p);
    return {(lo / (1.0 - lo)) / odds_prior, (hi / (1.0 - hi)) / odds_prior};
}

std::string selection_json(const SelectionResult& result, const SelectionConfig& cfg) {
    const auto [lo, hi] = bayes_factor_interval(result);
    nlohmann::json j{
        {"posterior_prob_r0", 1.0 - result.posterior_prob_r1},
        {"posterior_prob_r1", result.posterior_prob_r1},
        {"bayes_factor", result.bayes_factor},
        {"bound_flag", result.bound == SelectionResult::Bound::None  ? "none"
                       : result.bound == SelectionResult::Bound::Lower ? "greater_than"
                                                                       : "less_than"},
        {"bayes_factor_interval", {lo, hi}},
        {"p", cfg.p},
        {"pseudoprior",
         {{"log_beta_mean", cfg.pseudoprior.log_beta_mean},
          {"log_beta_sd", cfg.pseudoprior.log_beta_sd},
          {"log_gamma_mean", cfg.pseudoprior.log_gamma_mean},
          {"log_gamma_sd", cfg.pseudoprior.log_gamma_sd}}},
        {"seed", cfg.chain.seed},
        {"recorded_draws", result.r_trace.size()},
    };
    return j.dump(2);
}

}  // namespace pafit
