#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "test_support.hpp"

#include <pafit/likelihood.hpp>

using namespace pafit;
using namespace pafit::testing;

namespace {

SufficientStats one_step(std::vector<int> degrees, std::vector<int> increments) {
    RawPanel raw;
    raw.degrees.push_back(std::move(degrees));
    raw.increments.push_back(std::move(increments));
    return stats_from_raw(raw);
}

PreferenceParams random_params(std::mt19937_64& rng, bool piecewise) {
    std::uniform_real_distribution<double> u(0.3, 2.0);
    PreferenceParams p;
    p.kind = piecewise ? PrefKind::Piecewise : PrefKind::Power;
    p.alpha = u(rng);
    p.beta = u(rng);
    p.gamma = 4.0 * u(rng);
    p.delta = u(rng);
    return p;
}

}  // namespace

TEST_CASE("single vertex, no increment: log f = -mu") {
    const auto stats = one_step({1}, {0});
    PreferenceParams p;
    p.delta = 0.5;
    CHECK(loglik_full(stats, p, 1.0) == doctest::Approx(-1.0));
}

TEST_CASE("two vertices, one increment, by hand") {
    const auto stats = one_step({1, 1}, {1, 0});
    PreferenceParams p;  // linear PA, delta = 0
    // means are both mu/2 = 1; log f = (-1 + log 1) + (-1).
    CHECK(loglik_full(stats, p, 2.0) == doctest::Approx(-2.0));
}

TEST_CASE("histogram likelihood equals brute force on random panels") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> mu_dist(0.5, 8.0);
    for (int trial = 0; trial < 100; ++trial) {
        const auto raw = random_raw_panel(rng);
        const auto stats = stats_from_raw(raw);
        const auto params = random_params(rng, trial % 2 == 1);
        const double mu = mu_dist(rng);
        const double fast = loglik_full(stats, params, mu);
        const double serial = reference::loglik_full(stats, params, mu);
        const double brute = brute_force_loglik(raw, params, mu);
        CHECK(fast == doctest::Approx(brute).epsilon(1e-10));
        CHECK(serial == doctest::Approx(brute).epsilon(1e-10));
    }
}

TEST_CASE("parallel and serial collapsed likelihoods agree") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const auto raw = random_raw_panel(rng, 15, 8);
        const auto stats = stats_from_raw(raw);
        const auto params = random_params(rng, trial % 2 == 0);
        const RatePrior prior{1.5, 0.7};
        CHECK(loglik_collapsed(stats, params, prior) ==
              doctest::Approx(reference::loglik_collapsed(stats, params, prior)).epsilon(1e-13));
    }
}

TEST_CASE("impossible observation yields -infinity, not an exception") {
    const auto stats = one_step({0, 1}, {1, 0});  // y > 0 at k = 0 with delta = 0
    PreferenceParams p;
    CHECK(loglik_full(stats, p, 1.0) == -std::numeric_limits<double>::infinity());
    CHECK(loglik_collapsed(stats, p, {1.0, 1.0}) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("collapsed likelihood with no increments reduces to the prior ratio") {
    const auto stats = one_step({1, 2}, {0, 0});
    PreferenceParams p;
    p.delta = 1.0;
    const RatePrior prior{2.0, 3.0};
    // A_T = 0: a log b - a log(b + T), T = 1.
    CHECK(loglik_collapsed(stats, p, prior) ==
          doctest::Approx(2.0 * std::log(3.0) - 2.0 * std::log(4.0)));
}

TEST_CASE("collapsed likelihood matches quadrature") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 25; ++trial) {
        const auto raw = random_raw_panel(rng, 3, 2);
        const auto stats = stats_from_raw(raw);
        const auto params = random_params(rng, trial % 2 == 1);
        const RatePrior prior{1.0 + trial % 3, 0.5 + 0.25 * (trial % 4)};
        const double collapsed = loglik_collapsed(stats, params, prior);
        const double quad = quadrature_collapsed(raw, params, prior.shape, prior.rate);
        CHECK(collapsed == doctest::Approx(quad).epsilon(1e-8));
    }
}

TEST_CASE("collapsed differences match quadrature differences") {
    std::mt19937_64 rng(99);
    const auto raw = random_raw_panel(rng, 3, 2);
    const auto stats = stats_from_raw(raw);
    const auto p1 = random_params(rng, false);
    const auto p2 = random_params(rng, true);
    const RatePrior prior{2.0, 1.0};
    const double diff_impl = loglik_collapsed(stats, p1, prior) - loglik_collapsed(stats, p2, prior);
    const double diff_quad = quadrature_collapsed(raw, p1, prior.shape, prior.rate) -
                             quadrature_collapsed(raw, p2, prior.shape, prior.rate);
    CHECK(diff_impl == doctest::Approx(diff_quad).epsilon(1e-7));
}

TEST_CASE("posterior_mu conjugate update") {
    SUBCASE("no increments") {
        const auto stats = one_step({1}, {0});
        SufficientStats three = stats;
        three.steps.push_back(stats.steps[0]);
        three.steps.push_back(stats.steps[0]);
        const auto post = posterior_mu(three, {1.0, 1.0});
        CHECK(post.shape == doctest::Approx(1.0));
        CHECK(post.rate == doctest::Approx(4.0));
    }
    SUBCASE("mean 2 example") {
        RawPanel raw;
        raw.degrees = {{1, 1}, {1, 1}, {2, 2}, {2, 2}, {3, 3}};
        raw.increments = {{1, 1}, {1, 1}, {1, 1}, {1, 1}, {1, 1}};
        const auto post = posterior_mu(stats_from_raw(raw), {2.0, 1.0});
        CHECK(post.shape == doctest::Approx(12.0));
        CHECK(post.rate == doctest::Approx(6.0));
        CHECK(post.moments().first == doctest::Approx(2.0));
    }
}

TEST_CASE("rate prior moment parametrisation round trips") {
    const auto prior = RatePrior::from_moments(5.0, 2.0);
    const auto [mean, sd] = prior.moments();
    CHECK(mean == doctest::Approx(5.0));
    CHECK(sd == doctest::Approx(2.0));
}

TEST_CASE("collapsed likelihood depends on data only through the histograms") {
    // Shuffling vertex labels leaves the sufficient statistics unchanged.
    std::mt19937_64 rng(31);
    const auto raw = random_raw_panel(rng, 10, 4);
    RawPanel shuffled = raw;
    for (std::size_t t = 0; t < shuffled.degrees.size(); ++t) {
        std::vector<std::size_t> order(shuffled.degrees[t].size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::shuffle(order.begin(), order.end(), rng);
        std::vector<int> d, y;
        for (std::size_t i : order) {
            d.push_back(raw.degrees[t][i]);
            y.push_back(raw.increments[t][i]);
        }
        shuffled.degrees[t] = d;
        shuffled.increments[t] = y;
    }
    const auto params = random_params(rng, true);
    const RatePrior prior{1.0, 1.0};
    CHECK(loglik_collapsed(stats_from_raw(raw), params, prior) ==
          doctest::Approx(loglik_collapsed(stats_from_raw(shuffled), params, prior)));
}

TEST_CASE("poisson means are ordered like the preference weights within a step") {
    std::mt19937_64 rng(13);
    const auto params = random_params(rng, true);
    const double mu = 3.0;
    std::vector<int> degrees{0, 1, 2, 5, 9, 20};
    double total = 0.0;
    for (int k : degrees) total += pref_weight(k, params);
    for (std::size_t i = 0; i + 1 < degrees.size(); ++i) {
        const double m1 = mu * pref_weight(degrees[i], params) / total;
        const double m2 = mu * pref_weight(degrees[i + 1], params) / total;
        CHECK(m1 <= m2);
    }
}
