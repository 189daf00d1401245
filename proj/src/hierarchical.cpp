#include <pafit/hierarchical.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace pafit {

double loglik_period(const SufficientStats& stats_s, const PreferenceParams& params,
                     double mu_mu, double sigma_mu) {
    if (!(mu_mu > 0) || !(sigma_mu > 0))
        throw std::invalid_argument("loglik_period: mu_mu and sigma_mu must be positive");
    return loglik_collapsed(stats_s, params, RatePrior::from_moments(mu_mu, sigma_mu));
}

namespace {

struct Family {
    std::string name;
    int slot;       // component index inside PreferenceParams assembly
    HyperPrior hp;
    double init;
};

}  // namespace

ChainResult fit_hier(const std::vector<SufficientStats>& period_stats, PrefKind kind,
                     bool delta_fixed, const HyperConfig& cfg, const ChainConfig& chain_cfg) {
    const int S = static_cast<int>(period_stats.size());
    if (S == 1)
        throw std::invalid_argument(
            "fit_hier: a single period has no hierarchy; use the single model (fit_single)");
    if (S < 2) throw std::invalid_argument("fit_hier: need at least 2 periods");
    if (!chain_cfg.valid()) throw std::invalid_argument("fit_hier: invalid ChainConfig");

    // Data-driven defaults for the NaN hyperprior means.
    SufficientStats all;
    for (const auto& ps : period_stats)
        all.steps.insert(all.steps.end(), ps.steps.begin(), ps.steps.end());
    const double med_degree = static_cast<double>(std::max(median_positive_degree(all), 1));
    double mean_a = 0.0;
    for (const auto& ts : all.steps) mean_a += static_cast<double>(ts.total_increment);
    mean_a = std::max(mean_a / std::max<double>(1.0, static_cast<double>(all.steps.size())), 0.1);

    auto resolve = [](HyperPrior hp, double fallback) {
        if (std::isnan(hp.m)) hp.m = fallback;
        return hp;
    };

    std::vector<Family> families;
    families.push_back({"alpha", 0, resolve(cfg.alpha, 1.0), 1.0});
    if (kind == PrefKind::Piecewise) {
        families.push_back({"beta", 1, resolve(cfg.beta, 1.0), 1.0});
        families.push_back({"gamma", 2, resolve(cfg.gamma, med_degree), med_degree});
    }
    if (!delta_fixed) families.push_back({"delta", 3, resolve(cfg.delta, 1.0), 1.0});
    const int P = static_cast<int>(families.size());
    const HyperPrior rate_hp = resolve(cfg.mu, mean_a);

    // State: theta[s][f] (constrained, > 0), hyper means/sds, rate pair.
    std::vector<std::vector<double>> theta(S, std::vector<double>(P));
    for (int s = 0; s < S; ++s)
        for (int f = 0; f < P; ++f) theta[s][f] = families[f].init;
    std::vector<double> hyper_mean(P), hyper_sd(P, 1.0);
    for (int f = 0; f < P; ++f) hyper_mean[f] = families[f].init;
    double mu_mu = rate_hp.m;
    double sigma_mu = std::max(1.0, mu_mu / 2.0);

    auto assemble = [&](const std::vector<double>& th) {
        PreferenceParams p;
        p.kind = kind;
        p.delta_fixed = delta_fixed;
        for (int f = 0; f < P; ++f) {
            switch (families[f].slot) {
                case 0: p.alpha = th[f]; break;
                case 1: p.beta = th[f]; break;
                case 2: p.gamma = th[f]; break;
                case 3: p.delta = th[f]; break;
            }
        }
        return p;
    };

    auto period_ll = [&](int s) {
        return loglik_period(period_stats[s], assemble(theta[s]), mu_mu, sigma_mu);
    };
    // Truncated-normal prior on each positive parameter; the truncation
    // mass is ignored in the hyperparameter updates.
    auto theta_logprior = [&](int s) {
        double lp = 0.0;
        for (int f = 0; f < P; ++f) {
            if (!(theta[s][f] > 0)) return -std::numeric_limits<double>::infinity();
            lp += normal_logpdf(theta[s][f], hyper_mean[f], hyper_sd[f]);
        }
        return lp;
    };
    auto hyper_logprior = [&]() {
        double lp = 0.0;
        for (int f = 0; f < P; ++f) {
            lp += normal_logpdf(hyper_mean[f], families[f].hp.m, families[f].hp.s);
            lp += half_cauchy_logpdf(hyper_sd[f], families[f].hp.r);
        }
        if (!(mu_mu > 0)) return -std::numeric_limits<double>::infinity();
        lp += normal_logpdf(mu_mu, rate_hp.m, rate_hp.s);
        lp += half_cauchy_logpdf(sigma_mu, rate_hp.r);
        return lp;
    };

    std::vector<double> ll_cache(S);
    for (int s = 0; s < S; ++s) ll_cache[s] = period_ll(s);

    std::mt19937_64 rng(chain_cfg.seed);
    std::normal_distribution<double> norm(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    // Blocks: S period blocks, then (mu, sigma) per family, then the rate pair.
    const int n_blocks = S + 2 * P + 2;
    std::vector<double> log_scale(n_blocks, std::log(chain_cfg.initial_step));
    std::vector<long> accepted(n_blocks, 0), proposed(n_blocks, 0);

    ChainResult result;
    for (int f = 0; f < P; ++f)
        for (int s = 0; s < S; ++s)
            result.names.push_back(families[f].name + "_s" + std::to_string(s + 1));
    for (int f = 0; f < P; ++f) {
        result.names.push_back("mu_" + families[f].name);
        result.names.push_back("sigma_" + families[f].name);
    }
    result.names.push_back("mu_mu");
    result.names.push_back("sigma_mu");

    auto record_state = [&]() {
        std::vector<double> row;
        row.reserve(result.names.size());
        for (int f = 0; f < P; ++f)
            for (int s = 0; s < S; ++s) row.push_back(theta[s][f]);
        for (int f = 0; f < P; ++f) {
            row.push_back(hyper_mean[f]);
            row.push_back(hyper_sd[f]);
        }
        row.push_back(mu_mu);
        row.push_back(sigma_mu);
        return row;
    };

    auto adapt_or_count = [&](int block, bool accept, long it) {
        const bool burning = it < chain_cfg.burn_in;
        if (burning && chain_cfg.adapt) {
            const double gain = std::pow(static_cast<double>(it + 1), -0.6);
            log_scale[block] += gain * ((accept ? 1.0 : 0.0) - 0.44);
        } else if (!burning) {
            ++proposed[block];
            if (accept) ++accepted[block];
        }
    };

    {
        double lp0 = hyper_logprior();
        for (int s = 0; s < S; ++s) lp0 += ll_cache[s] + theta_logprior(s);
        if (!std::isfinite(lp0))
            throw std::runtime_error("fit_hier: log posterior not finite at initialization");
    }

    for (long it = 0; it < chain_cfg.iterations; ++it) {
        // Period blocks: joint multiplicative proposal on all components of
        // theta_s; the Jacobian term keeps positivity exact.
        for (int s = 0; s < S; ++s) {
            const double step = std::exp(log_scale[s]);
            std::vector<double> old = theta[s];
            double log_jac = 0.0;
            for (int f = 0; f < P; ++f) {
                const double eps = step * norm(rng);
                theta[s][f] = old[f] * std::exp(eps);
                log_jac += eps;
            }
            const double ll_new = period_ll(s);
            double delta = ll_new - ll_cache[s] + log_jac;
            for (int f = 0; f < P; ++f)
                delta += normal_logpdf(theta[s][f], hyper_mean[f], hyper_sd[f]) -
                         normal_logpdf(old[f], hyper_mean[f], hyper_sd[f]);
            const bool accept = std::log(unif(rng)) < delta;
            if (accept)
                ll_cache[s] = ll_new;
            else
                theta[s] = std::move(old);
            adapt_or_count(s, accept, it);
        }

        // Hyperparameter pairs.
        for (int f = 0; f < P; ++f) {
            {
                const int block = S + 2 * f;
                const double old = hyper_mean[f];
                const double cand = old + std::exp(log_scale[block]) * norm(rng);
                double delta = normal_logpdf(cand, families[f].hp.m, families[f].hp.s) -
                               normal_logpdf(old, families[f].hp.m, families[f].hp.s);
                for (int s = 0; s < S; ++s)
                    delta += normal_logpdf(theta[s][f], cand, hyper_sd[f]) -
                             normal_logpdf(theta[s][f], old, hyper_sd[f]);
                const bool accept = std::log(unif(rng)) < delta;
                if (accept) hyper_mean[f] = cand;
                adapt_or_count(block, accept, it);
            }
            {
                const int block = S + 2 * f + 1;
                const double old = hyper_sd[f];
                const double eps = std::exp(log_scale[block]) * norm(rng);
                const double cand = old * std::exp(eps);
                double delta = half_cauchy_logpdf(cand, families[f].hp.r) -
                               half_cauchy_logpdf(old, families[f].hp.r) + eps;
                for (int s = 0; s < S; ++s)
                    delta += normal_logpdf(theta[s][f], hyper_mean[f], cand) -
                             normal_logpdf(theta[s][f], hyper_mean[f], old);
                const bool accept = std::log(unif(rng)) < delta;
                if (accept) hyper_sd[f] = cand;
                adapt_or_count(block, accept, it);
            }
        }

        // Rate hyperparameters enter every period likelihood.
        for (int which = 0; which < 2; ++which) {
            const int block = S + 2 * P + which;
            double& value = which == 0 ? mu_mu : sigma_mu;
            const double old = value;
            const double eps = std::exp(log_scale[block]) * norm(rng);
            value = old * std::exp(eps);
            std::vector<double> ll_new(S);
            double delta = eps;
            for (int s = 0; s < S; ++s) {
                ll_new[s] = period_ll(s);
                delta += ll_new[s] - ll_cache[s];
            }
            if (which == 0)
                delta += normal_logpdf(value, rate_hp.m, rate_hp.s) -
                         normal_logpdf(old, rate_hp.m, rate_hp.s);
            else
                delta += half_cauchy_logpdf(value, rate_hp.r) - half_cauchy_logpdf(old, rate_hp.r);
            const bool accept = std::log(unif(rng)) < delta;
            if (accept)
                ll_cache = std::move(ll_new);
            else
                value = old;
            adapt_or_count(block, accept, it);
        }

        if (it >= chain_cfg.burn_in && (it - chain_cfg.burn_in + 1) % chain_cfg.thin == 0) {
            result.samples.push_back(record_state());
            double lp = hyper_logprior();
            for (int s = 0; s < S; ++s) lp += ll_cache[s] + theta_logprior(s);
            result.log_post.push_back(lp);
        }
    }

    result.acceptance.resize(n_blocks);
    for (int b = 0; b < n_blocks; ++b)
        result.acceptance[b] = proposed[b] > 0
                                   ? static_cast<double>(accepted[b]) / static_cast<double>(proposed[b])
                                   : 0.0;
    if (result.samples.size() >= 10)
        for (const auto& name : result.names) result.ess[name] = ess(result.column(name));
    return result;
}

}  // namespace pafit
