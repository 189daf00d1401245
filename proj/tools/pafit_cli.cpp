#include <cstdint>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <pafit/diagnostics.hpp>
#include <pafit/evolution_store.hpp>
#include <pafit/hierarchical.hpp>
#include <pafit/sampler.hpp>
#include <pafit/selection.hpp>
#include <pafit/simulator.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Flat key-value config: `key = value` lines, optional [section] headers
// that prefix keys as "section.key", # or ; comments.
class Config {
  public:
    Config() = default;

    static Config from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
        Config cfg;
        std::string line, section;
        long line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const auto hash = line.find_first_of("#;");
            if (hash != std::string::npos) line.erase(hash);
            auto trim = [](std::string s) {
                const auto b = s.find_first_not_of(" \t\r");
                const auto e = s.find_last_not_of(" \t\r");
                return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
            };
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']')
                    throw std::invalid_argument("config: '" + path + "' line " +
                                                std::to_string(line_no) + ": unterminated section");
                section = trim(line.substr(1, line.size() - 2));
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("config: '" + path + "' line " +
                                            std::to_string(line_no) + ": expected key = value");
            std::string key = trim(line.substr(0, eq));
            if (key.empty())
                throw std::invalid_argument("config: '" + path + "' line " +
                                            std::to_string(line_no) + ": empty key");
            if (!section.empty()) key = section + "." + key;
            cfg.values_[key] = trim(line.substr(eq + 1));
        }
        return cfg;
    }

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    std::string str(const std::string& key, const std::string& fallback) const {
        const auto it = values_.find(key);
        return it == values_.end() ? fallback : it->second;
    }

    double num(const std::string& key, double fallback) const {
        const auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        try {
            std::size_t used = 0;
            const double v = std::stod(it->second, &used);
            if (used != it->second.size()) throw std::invalid_argument("trailing junk");
            return v;
        } catch (const std::exception&) {
            throw std::invalid_argument("config: value of '" + key + "' is not a number: '" +
                                        it->second + "'");
        }
    }

    long integer(const std::string& key, long fallback) const {
        const double v = num(key, static_cast<double>(fallback));
        const long l = static_cast<long>(v);
        if (static_cast<double>(l) != v)
            throw std::invalid_argument("config: value of '" + key + "' must be an integer");
        return l;
    }

    bool boolean(const std::string& key, bool fallback) const {
        const auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        if (it->second == "true" || it->second == "1") return true;
        if (it->second == "false" || it->second == "0") return false;
        throw std::invalid_argument("config: value of '" + key + "' must be true or false");
    }

    void set(const std::string& key, const std::string& value) { values_[key] = value; }

    // Canonical serialization: sorted keys, one per line.  Everything that
    // influences a run is folded in here before hashing.
    std::string canonical() const {
        std::string out;
        for (const auto& [k, v] : values_) out += k + "=" + v + "\n";
        return out;
    }

    json to_json() const {
        json j = json::object();
        for (const auto& [k, v] : values_) j[k] = v;
        return j;
    }

  private:
    std::map<std::string, std::string> values_;
};

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

pafit::Category parse_category(const std::string& name) {
    if (name == "internal") return pafit::Category::Internal;
    if (name == "external") return pafit::Category::External;
    if (name == "deletion") return pafit::Category::Deletion;
    throw std::invalid_argument("unknown category '" + name +
                                "' (expected external, internal or deletion)");
}

std::set<std::string> parse_types(const std::string& list) {
    std::set<std::string> types;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) types.insert(item);
    if (types.empty()) throw std::invalid_argument("--types must name at least one dependency type");
    return types;
}

void require_file(const std::string& path, const std::string& what) {
    if (!fs::exists(path))
        throw std::invalid_argument(what + " file not found: '" + path + "'");
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << content;
}

// Chain settings from config with validation errors collected up front.
pafit::ChainConfig chain_from_config(const Config& cfg, std::uint64_t seed, long iterations,
                                     long burn_in, long thin) {
    pafit::ChainConfig chain;
    chain.iterations = cfg.integer("chain.iterations", iterations);
    chain.burn_in = cfg.integer("chain.burn_in", burn_in);
    chain.thin = cfg.integer("chain.thin", thin);
    chain.initial_step = cfg.num("chain.initial_step", 0.5);
    chain.adapt = cfg.boolean("chain.adapt", true);
    chain.seed = seed;
    std::vector<std::string> problems;
    if (chain.burn_in < 0) problems.push_back("chain.burn_in must be >= 0");
    if (chain.thin < 1) problems.push_back("chain.thin must be >= 1");
    if (chain.iterations <= chain.burn_in)
        problems.push_back("chain.iterations must exceed chain.burn_in");
    if (!(chain.initial_step > 0)) problems.push_back("chain.initial_step must be positive");
    if (!problems.empty()) {
        std::string msg = "invalid chain settings:";
        for (const auto& p : problems) msg += "\n  - " + p;
        throw std::invalid_argument(msg);
    }
    return chain;
}

pafit::SingleModelPrior prior_from_config(const Config& cfg) {
    pafit::SingleModelPrior prior;
    prior.log_mean = cfg.num("prior.log_mean", 0.0);
    prior.log_sd = cfg.num("prior.log_sd", 10.0);
    prior.rate.shape = cfg.num("prior.rate_shape", 1.0);
    prior.rate.rate = cfg.num("prior.rate_rate", 0.1);
    std::vector<std::string> problems;
    if (!(prior.log_sd > 0)) problems.push_back("prior.log_sd must be positive");
    if (!(prior.rate.shape > 0)) problems.push_back("prior.rate_shape must be positive");
    if (!(prior.rate.rate > 0)) problems.push_back("prior.rate_rate must be positive");
    if (!problems.empty()) {
        std::string msg = "invalid prior settings:";
        for (const auto& p : problems) msg += "\n  - " + p;
        throw std::invalid_argument(msg);
    }
    return prior;
}

pafit::PreferenceParams pref_from_config(const Config& cfg, const std::string& section) {
    pafit::PreferenceParams p;
    const std::string kind = cfg.str(section + ".kind", "power");
    if (kind == "piecewise")
        p.kind = pafit::PrefKind::Piecewise;
    else if (kind != "power")
        throw std::invalid_argument("config: " + section + ".kind must be power or piecewise");
    p.alpha = cfg.num(section + ".alpha", 1.0);
    p.beta = cfg.num(section + ".beta", 1.0);
    p.gamma = cfg.num(section + ".gamma", 1.0);
    p.delta = cfg.num(section + ".delta", 0.0);
    p.delta_fixed = p.delta == 0.0;
    if (!p.valid())
        throw std::invalid_argument("config: invalid preference parameters in [" + section + "]");
    return p;
}

// Merge independent chains: pooled draws in chain order, per-chain ESS summed.
pafit::ChainResult merge_chains(std::vector<pafit::ChainResult> chains) {
    pafit::ChainResult merged = std::move(chains.front());
    for (std::size_t c = 1; c < chains.size(); ++c) {
        auto& next = chains[c];
        merged.samples.insert(merged.samples.end(), next.samples.begin(), next.samples.end());
        merged.log_post.insert(merged.log_post.end(), next.log_post.begin(), next.log_post.end());
        for (std::size_t j = 0; j < merged.acceptance.size(); ++j)
            merged.acceptance[j] += next.acceptance[j];
        for (const auto& [name, e] : next.ess) merged.ess[name] += e;
        merged.adaptation_warning = merged.adaptation_warning || next.adaptation_warning;
    }
    for (auto& a : merged.acceptance) a /= static_cast<double>(chains.size());
    return merged;
}

json summary_with_provenance(const pafit::ChainResult& result, const Config& resolved) {
    json j = json::parse(pafit::summary_json(result));
    j["config"] = resolved.to_json();
    j["config_hash"] = fnv1a_hex(resolved.canonical());
    return j;
}

// ---- subcommand implementations -----------------------------------------

int run_ingest(const std::string& events, const std::string& types_list, const std::string& out) {
    require_file(events, "events");
    const auto types = parse_types(types_list);

    // Reject types that never occur so a typo fails loudly.
    {
        std::ifstream in(events);
        std::string line;
        std::set<std::string> seen;
        std::getline(in, line);  // header, validated by ingest below
        while (std::getline(in, line)) {
            const auto a = line.find(',');
            if (a == std::string::npos) continue;
            const auto b = line.find(',', a + 1);
            const auto c = line.find(',', b + 1);
            if (b == std::string::npos || c == std::string::npos) continue;
            seen.insert(line.substr(b + 1, c - b - 1));
        }
        for (const auto& t : types)
            if (!seen.count(t)) {
                std::string known;
                for (const auto& s : seen) known += (known.empty() ? "" : ", ") + s;
                throw std::invalid_argument("dependency type '" + t +
                                            "' does not occur in '" + events +
                                            "' (known types: " + known + ")");
            }
    }

    const auto log = pafit::ingest(events, types);
    if (log.horizon() == 0) throw std::invalid_argument("event log is empty after filtering");
    const auto panel = pafit::extract_increments(log);

    fs::create_directories(out);
    {
        std::ofstream pout(fs::path(out) / "panel.csv");
        pout << "t,vertex,k_prev,x,y,z\n";
        for (int t = 1; t <= panel.horizon(); ++t)
            for (const auto& row : panel.steps[t - 1])
                pout << t << ',' << log.vertex_names[row.vertex] << ',' << row.k_prev << ','
                     << row.x << ',' << row.y << ',' << row.z << '\n';
    }
    for (const auto& [name, cat] :
         {std::pair{"external", pafit::Category::External},
          std::pair{"internal", pafit::Category::Internal},
          std::pair{"deletion", pafit::Category::Deletion}})
        pafit::write_stats_csv(pafit::summarize(panel, cat),
                               (fs::path(out) / (std::string(name) + ".csv")).string());
    std::cout << "ingested " << log.vertex_count() << " vertices over " << log.horizon()
              << " steps into " << out << "\n";
    return 0;
}

int run_fit(const std::string& stats_path, const std::string& category, const std::string& pref,
            bool hier, const std::string& config_path, std::uint64_t seed, int n_chains,
            const std::string& out) {
    require_file(stats_path, "stats");
    Config cfg = config_path.empty() ? Config{} : Config::from_file(config_path);
    const pafit::PrefKind kind =
        pref == "piecewise" ? pafit::PrefKind::Piecewise : pafit::PrefKind::Power;
    if (pref != "power" && pref != "piecewise")
        throw std::invalid_argument("--pref must be power or piecewise");
    parse_category(category);  // validates the name
    const bool delta_fixed = cfg.boolean("model.delta_fixed", category == "deletion");

    const auto stats = pafit::read_stats_csv(stats_path);
    if (stats.horizon() == 0) throw std::invalid_argument("stats file has no time steps");
    const auto prior = prior_from_config(cfg);

    // Fold the full run recipe into the provenance record.
    cfg.set("run.command", "fit");
    cfg.set("run.stats", stats_path);
    cfg.set("run.category", category);
    cfg.set("run.pref", pref);
    cfg.set("run.mode", hier ? "hier" : "single");
    cfg.set("run.seed", std::to_string(seed));
    cfg.set("run.chains", std::to_string(n_chains));
    cfg.set("run.delta_fixed", delta_fixed ? "true" : "false");

    std::vector<pafit::ChainResult> chains;
    if (hier) {
        const pafit::ChainConfig chain = chain_from_config(cfg, seed, 210000, 10000, 20);
        const long width = cfg.integer("model.period_width", 0);
        if (width < 1)
            throw std::invalid_argument(
                "hierarchical fit needs model.period_width >= 1 in the config");
        std::vector<pafit::SufficientStats> periods;
        for (int start = 0; start < stats.horizon(); start += static_cast<int>(width)) {
            pafit::SufficientStats s;
            const int stop = std::min<int>(start + static_cast<int>(width), stats.horizon());
            s.steps.assign(stats.steps.begin() + start, stats.steps.begin() + stop);
            periods.push_back(std::move(s));
        }
        pafit::HyperConfig hyper;
        hyper.single = prior;
        std::vector<std::future<pafit::ChainResult>> futs;
        for (int c = 0; c < n_chains; ++c) {
            pafit::ChainConfig cc = chain;
            cc.seed = seed + static_cast<std::uint64_t>(c);
            futs.push_back(std::async(std::launch::async, [=, &periods] {
                return pafit::fit_hier(periods, kind, delta_fixed, hyper, cc);
            }));
        }
        for (auto& f : futs) chains.push_back(f.get());
    } else {
        const pafit::ChainConfig chain = chain_from_config(cfg, seed, 101000, 1000, 10);
        std::vector<std::future<pafit::ChainResult>> futs;
        for (int c = 0; c < n_chains; ++c) {
            pafit::ChainConfig cc = chain;
            cc.seed = seed + static_cast<std::uint64_t>(c);
            futs.push_back(std::async(std::launch::async, [=, &stats] {
                return pafit::fit_single(stats, kind, delta_fixed, prior, cc);
            }));
        }
        for (auto& f : futs) chains.push_back(f.get());
    }
    const auto merged = merge_chains(std::move(chains));

    fs::create_directories(out);
    pafit::write_trace_csv(merged, (fs::path(out) / "trace.csv").string());
    write_text((fs::path(out) / "summary.json").string(),
               summary_with_provenance(merged, cfg).dump(2) + "\n");
    std::cout << "fit wrote " << merged.samples.size() << " draws to " << out << "\n";
    return 0;
}

int run_select(const std::string& stats_path, const std::string& category, double p,
               long pilot_draws, const std::string& config_path, std::uint64_t seed,
               const std::string& out) {
    require_file(stats_path, "stats");
    Config cfg = config_path.empty() ? Config{} : Config::from_file(config_path);
    parse_category(category);
    if (!(p > 0.0) || !(p < 1.0)) throw std::invalid_argument("--p must lie strictly in (0, 1)");
    if (pilot_draws < 100) throw std::invalid_argument("--pilot-draws must be >= 100");

    const auto stats = pafit::read_stats_csv(stats_path);
    if (stats.horizon() == 0) throw std::invalid_argument("stats file has no time steps");
    const auto prior = prior_from_config(cfg);
    const bool delta_fixed = cfg.boolean("model.delta_fixed", category == "deletion");

    cfg.set("run.command", "select");
    cfg.set("run.stats", stats_path);
    cfg.set("run.category", category);
    cfg.set("run.p", std::to_string(p));
    cfg.set("run.pilot_draws", std::to_string(pilot_draws));
    cfg.set("run.seed", std::to_string(seed));
    cfg.set("run.delta_fixed", delta_fixed ? "true" : "false");

    // Pilot piecewise fit feeds the moment-matched pseudoprior.
    pafit::ChainConfig pilot_chain = chain_from_config(cfg, seed, 101000, 1000, 10);
    pilot_chain.thin = 5;
    pilot_chain.iterations = pilot_chain.burn_in + pilot_draws * pilot_chain.thin;
    const auto pilot =
        pafit::fit_single(stats, pafit::PrefKind::Piecewise, delta_fixed, prior, pilot_chain);

    pafit::SelectionConfig sel;
    sel.p = p;
    sel.delta_fixed = delta_fixed;
    sel.chain = chain_from_config(cfg, seed + 1, 101000, 1000, 10);
    bool pseudo_degenerate = false;
    sel.pseudoprior = pafit::tune_pseudoprior(pilot, prior, &pseudo_degenerate);

    const auto result = pafit::select(stats, sel, prior);

    fs::create_directories(out);
    json j = json::parse(pafit::selection_json(result, sel));
    j["pseudoprior_degenerate"] = pseudo_degenerate;
    j["config"] = cfg.to_json();
    j["config_hash"] = fnv1a_hex(cfg.canonical());
    write_text((fs::path(out) / "selection.json").string(), j.dump(2) + "\n");
    if (result.power_draws.samples.size() >= 1)
        pafit::write_trace_csv(result.power_draws, (fs::path(out) / "power_trace.csv").string());
    if (result.piecewise_draws.samples.size() >= 1)
        pafit::write_trace_csv(result.piecewise_draws,
                               (fs::path(out) / "piecewise_trace.csv").string());
    std::cout << "selection wrote B10 estimate to " << out << "\n";
    return 0;
}

int run_simulate(const std::string& config_path, std::uint64_t seed, const std::string& out,
                 bool multinomial) {
    require_file(config_path, "config");
    Config cfg = Config::from_file(config_path);
    pafit::SimConfig sim;
    sim.n0 = static_cast<int>(cfg.integer("sim.n0", 2));
    sim.steps = static_cast<int>(cfg.integer("sim.steps", 1));
    sim.mu_external = cfg.num("sim.mu_external", 0.0);
    sim.mu_internal = cfg.num("sim.mu_internal", 0.0);
    sim.mu_deletion = cfg.num("sim.mu_deletion", 0.0);
    sim.seed_graph = cfg.str("sim.seed_graph", "ring");
    sim.external_pref = pref_from_config(cfg, "external");
    sim.internal_pref = pref_from_config(cfg, "internal");
    sim.deletion_pref = pref_from_config(cfg, "deletion");
    sim.seed = seed;
    if (!sim.valid()) throw std::invalid_argument("invalid simulation settings in the config");

    const auto result = multinomial ? pafit::simulate_multinomial(sim) : pafit::simulate(sim);
    const auto parent = fs::path(out).parent_path();
    if (!parent.empty()) fs::create_directories(parent);
    pafit::write_events_csv(result.log, out);
    std::cout << "simulated " << result.log.vertex_count() << " vertices over "
              << result.drawn.horizon() << " steps into " << out << "\n";
    return 0;
}

int run_diagnose(const std::string& events, const std::string& types_list,
                 const std::string& category, const std::string& date, const std::string& out) {
    require_file(events, "events");
    const auto cat = parse_category(category);
    const auto log = pafit::ingest(events, parse_types(types_list));
    if (log.horizon() == 0) throw std::invalid_argument("event log is empty after filtering");
    const auto panel = pafit::extract_increments(log);

    int t = panel.horizon();
    if (!date.empty()) {
        const pafit::Date target = pafit::parse_date(date);
        t = -1;
        for (int i = 1; i <= panel.horizon(); ++i)
            if (panel.timeline[i] == target) t = i;
        if (t < 0)
            throw std::invalid_argument("date '" + date + "' is not a snapshot date of the log");
    }

    const auto table = pafit::smoothed_averages(panel, cat, t, pafit::GeometricBins{});
    const auto in_deg = pafit::in_degrees_at(log, t);
    const auto out_deg = pafit::out_degrees_at(log, t);

    fs::create_directories(out);
    pafit::write_smoothed_csv(table, (fs::path(out) / "smoothed.csv").string());

    json j;
    j["t"] = t;
    j["date"] = pafit::format_date(panel.timeline[t]);
    j["category"] = category;
    try {
        j["slope1_intercept"] = pafit::slope1_intercept(table);
        j["free_fit_slope"] = pafit::free_fit_slope(table);
    } catch (const std::exception& e) {
        j["slope_fit_error"] = e.what();
    }
    try {
        const auto fit = pafit::survival_plot_data(in_deg);
        pafit::write_survival_csv(fit, (fs::path(out) / "survival.csv").string());
        j["survival"] = {{"slope", fit.slope},
                         {"intercept", fit.intercept},
                         {"fit_valid", fit.fit_valid},
                         {"tail_deviates", fit.tail_deviates}};
    } catch (const std::exception& e) {
        j["survival_error"] = e.what();
    }
    try {
        j["degree_correlation"] = pafit::degree_correlation(in_deg, out_deg);
    } catch (const std::exception& e) {
        j["correlation_error"] = e.what();
    }
    Config prov;
    prov.set("run.command", "diagnose");
    prov.set("run.events", events);
    prov.set("run.types", types_list);
    prov.set("run.category", category);
    prov.set("run.t", std::to_string(t));
    j["config_hash"] = fnv1a_hex(prov.canonical());
    write_text((fs::path(out) / "diagnostics.json").string(), j.dump(2) + "\n");
    std::cout << "diagnostics for t=" << t << " written to " << out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Preferential-attachment inference from network evolution logs"};
    app.require_subcommand(1);

    std::string events, types = "Imports", out, stats, category = "external";
    std::string pref = "power", config_path, date;
    std::uint64_t seed = 1;
    double p = 0.5;
    long pilot_draws = 2000;
    int n_chains = 1;
    bool hier = false, multinomial = false;

    auto* ingest_cmd = app.add_subcommand("ingest", "Build sufficient statistics from an event CSV");
    ingest_cmd->add_option("--events", events, "event CSV path")->required();
    ingest_cmd->add_option("--types", types, "comma-separated dependency types");
    ingest_cmd->add_option("--out", out, "output directory")->required();

    auto* fit_cmd = app.add_subcommand("fit", "Fit a preference model to a stats file");
    fit_cmd->add_option("--stats", stats, "stats CSV path")->required();
    fit_cmd->add_option("--category", category, "external | internal | deletion");
    fit_cmd->add_option("--pref", pref, "power | piecewise");
    fit_cmd->add_flag("--hier,!--single", hier, "hierarchical (per-period) model");
    fit_cmd->add_option("--config", config_path, "config file path");
    fit_cmd->add_option("--seed", seed, "RNG seed");
    fit_cmd->add_option("--chains", n_chains, "number of independent chains")
        ->check(CLI::PositiveNumber);
    fit_cmd->add_option("--out", out, "output directory")->required();

    auto* select_cmd = app.add_subcommand("select", "Bayes-factor selection between the two forms");
    select_cmd->add_option("--stats", stats, "stats CSV path")->required();
    select_cmd->add_option("--category", category, "external | internal | deletion");
    select_cmd->add_option("--p", p, "prior probability of the piecewise model");
    select_cmd->add_option("--pilot-draws", pilot_draws, "pilot draws for pseudoprior tuning");
    select_cmd->add_option("--config", config_path, "config file path");
    select_cmd->add_option("--seed", seed, "RNG seed");
    select_cmd->add_option("--out", out, "output directory")->required();

    auto* sim_cmd = app.add_subcommand("simulate", "Generate an event CSV from a sim config");
    sim_cmd->add_option("--config", config_path, "config file path")->required();
    sim_cmd->add_option("--seed", seed, "RNG seed");
    sim_cmd->add_flag("--multinomial", multinomial, "use the multinomial-total form");
    sim_cmd->add_option("--out", out, "output event CSV path")->required();

    auto* diag_cmd = app.add_subcommand("diagnose", "Smoothed averages, survival and correlation");
    diag_cmd->add_option("--events", events, "event CSV path")->required();
    diag_cmd->add_option("--types", types, "comma-separated dependency types");
    diag_cmd->add_option("--category", category, "external | internal | deletion");
    diag_cmd->add_option("--date", date, "snapshot date (default: last)");
    diag_cmd->add_option("--out", out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // usage problems map to exit 2
    }

    try {
        if (app.got_subcommand(ingest_cmd)) return run_ingest(events, types, out);
        if (app.got_subcommand(fit_cmd))
            return run_fit(stats, category, pref, hier, config_path, seed, n_chains, out);
        if (app.got_subcommand(select_cmd))
            return run_select(stats, category, p, pilot_draws, config_path, seed, out);
        if (app.got_subcommand(sim_cmd)) return run_simulate(config_path, seed, out, multinomial);
        if (app.got_subcommand(diag_cmd)) return run_diagnose(events, types, category, date, out);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
