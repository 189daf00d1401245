#include <pafit/simulator.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <stdexcept>

namespace pafit {

namespace {

constexpr int kRetryLimit = 64;

struct SimState {
    SimConfig cfg;
    std::mt19937_64 rng;
    std::vector<std::vector<VertexId>> in_sources;  // target -> sources
    std::vector<int> first_seen;
    std::set<Edge> edges;
    EvolutionLog log;
    IncrementPanel panel;
    // 1 when the seed edges occupy a bootstrap step at the front of the log,
    // so that replaying the event stream reconstructs the t=0 graph.
    int offset = 0;

    explicit SimState(const SimConfig& c) : cfg(c), rng(c.seed) {
        if (!cfg.valid()) throw std::invalid_argument("simulate: invalid SimConfig");
        in_sources.resize(cfg.n0);
        first_seen.assign(cfg.n0, 0);
        if (cfg.seed_graph == "ring" && cfg.n0 >= 2) {
            offset = 1;
            // Matches ingest(): a vertex is first seen at the step of its
            // first event, which for the seed vertices is the bootstrap step.
            first_seen.assign(cfg.n0, 1);
            log.steps.resize(cfg.steps + 1);
            for (int i = 0; i < cfg.n0; ++i) {
                const VertexId u = i, v = (i + 1) % cfg.n0;
                in_sources[v].push_back(u);
                edges.insert({u, v});
                log.steps[0].additions.push_back({u, v});
            }
        } else {
            log.steps.resize(cfg.steps);
        }
        panel.steps.resize(cfg.steps);
    }

    int vertex_count() const { return static_cast<int>(in_sources.size()); }

    VertexId new_vertex(int t) {
        in_sources.emplace_back();
        first_seen.push_back(t);
        return static_cast<VertexId>(in_sources.size() - 1);
    }

    // Total preference weight over the existing vertices' degrees.
    double total_weight(const std::vector<int>& k_prev, const PreferenceParams& p,
                        const char* category) const {
        double total = 0.0;
        for (int k : k_prev) total += pref_weight(k, p);
        if (!(total > 0))
            throw std::domain_error(std::string("simulate: degenerate weights for ") + category +
                                    " category (total preference weight is 0)");
        return total;
    }

    void finalize() {
        const Date base = parse_date("2020-01-01");
        for (int t = 0; t <= cfg.steps + offset; ++t) log.timeline.push_back(Date{base.days + t});
        panel.timeline.assign(log.timeline.begin() + offset, log.timeline.end());
        log.vertex_first_seen = first_seen;
        log.vertex_names.reserve(first_seen.size());
        for (std::size_t i = 0; i < first_seen.size(); ++i)
            log.vertex_names.push_back("v" + std::to_string(i));
    }
};

int poisson_draw(std::mt19937_64& rng, double mean) {
    if (mean <= 0) return 0;
    return std::poisson_distribution<int>(mean)(rng);
}

// One evolution step.  `draw_counts` supplies the per-vertex increment
// counts for one category given the previous degrees and the total weight;
// the mechanics of wiring edges are shared between the independent-Poisson
// and multinomial forms.
void run_step(SimState& st, int t,
              const std::function<std::vector<int>(const std::vector<int>&, const PreferenceParams&,
                                                   double mu, std::mt19937_64&)>& draw_counts) {
    const int n_prev = st.vertex_count();
    std::vector<int> k_prev(n_prev);
    for (int i = 0; i < n_prev; ++i) k_prev[i] = static_cast<int>(st.in_sources[i].size());

    auto& rows = st.panel.steps[t - 1];
    rows.resize(n_prev);
    for (int i = 0; i < n_prev; ++i) rows[i] = {static_cast<VertexId>(i), k_prev[i], 0, 0, 0};

    auto& step = st.log.steps[t - 1 + st.offset];
    std::set<Edge> added;
    std::set<Edge> removed;  // re-adding within the step would cancel on ingest

    // Deletions act on the t-1 edge set, capped at the current in-degree.
    if (st.cfg.mu_deletion > 0 && n_prev > 0) {
        std::vector<int> z = draw_counts(k_prev, st.cfg.deletion_pref, st.cfg.mu_deletion, st.rng);
        for (int i = 0; i < n_prev; ++i) {
            z[i] = std::min(z[i], k_prev[i]);
            if (z[i] == 0) continue;
            auto& sources = st.in_sources[i];
            // Partial Fisher-Yates: the last z[i] entries become the removals.
            for (int j = 0; j < z[i]; ++j) {
                const int last = static_cast<int>(sources.size()) - 1 - j;
                std::uniform_int_distribution<int> pick(0, last);
                std::swap(sources[pick(st.rng)], sources[last]);
            }
            for (int j = 0; j < z[i]; ++j) {
                const VertexId u = sources.back();
                sources.pop_back();
                st.edges.erase({u, static_cast<VertexId>(i)});
                removed.insert({u, static_cast<VertexId>(i)});
                step.removals.push_back({u, static_cast<VertexId>(i)});
            }
            rows[i].z = z[i];
        }
    }

    // Internal additions: sources sampled uniformly among existing
    // vertices, avoiding self-loops and duplicates.
    if (st.cfg.mu_internal > 0 && n_prev > 0) {
        const std::vector<int> x = draw_counts(k_prev, st.cfg.internal_pref, st.cfg.mu_internal, st.rng);
        std::uniform_int_distribution<int> pick(0, n_prev - 1);
        for (int i = 0; i < n_prev; ++i) {
            for (int j = 0; j < x[i]; ++j) {
                bool placed = false;
                for (int attempt = 0; attempt < kRetryLimit && !placed; ++attempt) {
                    const VertexId u = static_cast<VertexId>(pick(st.rng));
                    if (u == i) continue;
                    const Edge e{u, static_cast<VertexId>(i)};
                    if (st.edges.count(e) || added.count(e) || removed.count(e)) continue;
                    added.insert(e);
                    step.additions.push_back(e);
                    st.in_sources[i].push_back(u);
                    ++rows[i].x;
                    placed = true;
                }
                // Exhausted retries (near-complete neighbourhood): drop the edge.
            }
        }
    }

    // External additions: every new edge comes from a brand-new vertex.
    if (st.cfg.mu_external > 0 && n_prev > 0) {
        const std::vector<int> y = draw_counts(k_prev, st.cfg.external_pref, st.cfg.mu_external, st.rng);
        for (int i = 0; i < n_prev; ++i) {
            for (int j = 0; j < y[i]; ++j) {
                const VertexId u = st.new_vertex(t + st.offset);
                const Edge e{u, static_cast<VertexId>(i)};
                st.edges.insert(e);
                step.additions.push_back(e);
                st.in_sources[i].push_back(u);
                ++rows[i].y;
            }
        }
    }

    for (const Edge& e : added) st.edges.insert(e);
}

std::vector<int> draw_independent(const std::vector<int>& k_prev, const PreferenceParams& p,
                                  double mu, std::mt19937_64& rng, const SimState& st,
                                  const char* cat) {
    const double total = st.total_weight(k_prev, p, cat);
    std::vector<int> counts(k_prev.size());
    for (std::size_t i = 0; i < k_prev.size(); ++i)
        counts[i] = poisson_draw(rng, mu * pref_weight(k_prev[i], p) / total);
    return counts;
}

std::vector<int> draw_multinomial(const std::vector<int>& k_prev, const PreferenceParams& p,
                                  double mu, std::mt19937_64& rng, const SimState& st,
                                  const char* cat) {
    const double total = st.total_weight(k_prev, p, cat);
    std::vector<double> weights(k_prev.size());
    for (std::size_t i = 0; i < k_prev.size(); ++i) weights[i] = pref_weight(k_prev[i], p) / total;
    const int m = poisson_draw(rng, mu);
    std::vector<int> counts(k_prev.size(), 0);
    if (m > 0) {
        std::discrete_distribution<int> alloc(weights.begin(), weights.end());
        for (int j = 0; j < m; ++j) ++counts[alloc(rng)];
    }
    return counts;
}

SimResult run(const SimConfig& cfg, bool multinomial) {
    SimState st(cfg);
    for (int t = 1; t <= cfg.steps; ++t) {
        run_step(st, t,
                 [&st, multinomial](const std::vector<int>& k_prev, const PreferenceParams& p,
                                    double mu, std::mt19937_64& rng) {
                     return multinomial ? draw_multinomial(k_prev, p, mu, rng, st, "requested")
                                        : draw_independent(k_prev, p, mu, rng, st, "requested");
                 });
    }
    st.finalize();
    return {std::move(st.log), std::move(st.panel)};
}

}  // namespace

SimResult simulate(const SimConfig& cfg) { return run(cfg, false); }

SimResult simulate_multinomial(const SimConfig& cfg) { return run(cfg, true); }

void write_events_csv(const EvolutionLog& log, const std::string& path,
                      const std::string& dep_type) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_events_csv: cannot open '" + path + "'");
    out << "from,to,type,action,prev_date,curr_date\n";
    for (int t = 1; t <= log.horizon(); ++t) {
        const std::string prev = format_date(log.timeline[t - 1]);
        const std::string curr = format_date(log.timeline[t]);
        for (const Edge& e : log.steps[t - 1].additions)
            out << log.vertex_names[e.first] << ',' << log.vertex_names[e.second] << ','
                << dep_type << ",added," << prev << ',' << curr << '\n';
        for (const Edge& e : log.steps[t - 1].removals)
            out << log.vertex_names[e.first] << ',' << log.vertex_names[e.second] << ','
                << dep_type << ",removed," << prev << ',' << curr << '\n';
    }
}

}  // namespace pafit
