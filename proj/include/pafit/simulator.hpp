#pragma once

#include <cstdint>
#include <random>

#include <pafit/evolution_store.hpp>
#include <pafit/preference.hpp>

namespace pafit {

// Generative configuration.  Each category has its own Poisson rate and
// preference parameters; a zero rate disables the category.
struct SimConfig {
    int n0 = 2;    // initial vertex count
    int steps = 1; // T
    double mu_external = 0.0;
    double mu_internal = 0.0;
    double mu_deletion = 0.0;
    PreferenceParams external_pref;
    PreferenceParams internal_pref;
    PreferenceParams deletion_pref;
    std::uint64_t seed = 1;
    // "ring": vertex i depends on vertex i+1 mod n0 (every in-degree 1).
    // "empty": no initial edges (needs delta > 0 to get going).
    std::string seed_graph = "ring";

    bool valid() const {
        return n0 >= 1 && steps >= 1 && mu_external >= 0 && mu_internal >= 0 &&
               mu_deletion >= 0 && (seed_graph == "ring" || seed_graph == "empty");
    }
};

struct SimResult {
    EvolutionLog log;
    IncrementPanel drawn;  // the increments actually drawn, for round-trip checks
};

// Draws each existing vertex's increment from its own Poisson distribution
// (the marginal form after multinomial splitting).  External edges come
// from brand-new vertices; internal sources are sampled uniformly among
// existing vertices; deletions remove uniformly chosen existing in-edges,
// capped at the current in-degree.
SimResult simulate(const SimConfig& cfg);

// Draws the per-step edge total from Poisson(mu) and allocates edges by a
// weighted multinomial over existing vertices.  Marginally equivalent to
// simulate(); kept for testing the splitting property.
SimResult simulate_multinomial(const SimConfig& cfg);

// Serializes the log back to the event CSV format that ingest() reads.
void write_events_csv(const EvolutionLog& log, const std::string& path,
                      const std::string& dep_type = "Imports");

}  // namespace pafit
