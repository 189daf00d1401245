#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <pafit/dates.hpp>

namespace pafit {

enum class Action { Added, Removed };

// One row of the event log: a directed dependency edge appearing or
// disappearing between two successive observation dates.
struct EdgeEvent {
    std::string source;
    std::string target;
    std::string dep_type;
    Action action = Action::Added;
    Date prev_date;
    Date curr_date;
};

using VertexId = std::int32_t;
using Edge = std::pair<VertexId, VertexId>;  // (source, target)

// Time-ordered edge changes over a growing vertex set.  Time index t runs
// over the distinct dates where at least one change occurred; t=0 is the
// baseline date before the first change.  Vertices are interned to dense
// ids in order of first appearance and are never removed.
struct EvolutionLog {
    struct Step {
        std::vector<Edge> additions;  // net additions at this date
        std::vector<Edge> removals;   // net removals at this date
    };

    std::vector<Date> timeline;             // size T+1, timeline[0] = baseline
    std::vector<std::string> vertex_names;  // id -> name
    std::vector<int> vertex_first_seen;     // id -> time index of first event
    std::vector<Step> steps;                // steps[t-1] holds changes at time t

    int horizon() const { return static_cast<int>(steps.size()); }  // T
    int vertex_count() const { return static_cast<int>(vertex_names.size()); }
};

enum class Category { Internal, External, Deletion };

// Per-vertex increment record for one time step.
struct PanelRow {
    VertexId vertex = 0;
    int k_prev = 0;  // in-degree at t-1
    int x = 0;       // new edges from existing vertices
    int y = 0;       // new edges from vertices first seen at t
    int z = 0;       // removed edges
    int k_curr() const { return k_prev + x + y - z; }
};

// Rows for every existing vertex at every time step t = 1..T.
struct IncrementPanel {
    std::vector<std::vector<PanelRow>> steps;  // steps[t-1]
    std::vector<Date> timeline;                // copied from the log

    int horizon() const { return static_cast<int>(steps.size()); }
};

// Histogram compression of one time step: likelihoods depend on the panel
// only through these counts.
struct TimeStats {
    std::vector<std::pair<int, std::int64_t>> degree_counts;  // (k, c_{t,k}), k ascending
    std::vector<std::pair<std::pair<int, int>, std::int64_t>> increment_counts;
    // ((k, y), n_{t,k,y}) with y > 0, lexicographic order
    std::int64_t total_increment = 0;  // A_t
    std::int64_t vertex_count = 0;     // number of existing vertices
};

struct SufficientStats {
    std::vector<TimeStats> steps;  // steps[t-1]

    int horizon() const { return static_cast<int>(steps.size()); }
    std::int64_t total_increments() const {
        std::int64_t a = 0;
        for (const auto& s : steps) a += s.total_increment;
        return a;
    }
};

// Reads the event CSV (header: from,to,type,action,prev_date,curr_date),
// keeps only rows whose type is in dep_types, and builds the evolution log.
// Throws std::runtime_error with a line number on malformed rows, on
// duplicate additions and on removals of absent edges.
EvolutionLog ingest(const std::string& path, const std::set<std::string>& dep_types);

// Same, from pre-parsed events (used by the simulator round trip).
EvolutionLog build_log(std::vector<EdgeEvent> events, const std::set<std::string>& dep_types);

// Walks the filtration and produces X/Y/Z increments for every existing
// vertex at every step.  The degree identity k_t = k_{t-1} + X + Y - Z
// holds by construction.
IncrementPanel extract_increments(const EvolutionLog& log);

// Compresses one increment category into per-time histograms.
SufficientStats summarize(const IncrementPanel& panel, Category category);

// Contiguous period split of 1..T.  scheme is "monthly" or "fixed:<w>".
struct Period {
    int index = 0;       // s, 1-based
    int first_step = 0;  // first t in the period (1-based)
    int step_count = 0;  // T_s
};
std::vector<Period> partition_periods(const IncrementPanel& panel, const std::string& scheme);

// Slices sufficient statistics along a period partition.
std::vector<SufficientStats> split_stats(const SufficientStats& stats,
                                         const std::vector<Period>& periods);

// Columnar CSV round trip for sufficient statistics: rows t,k,y,count with
// y = -1 encoding the degree histogram c_{t,k}.
void write_stats_csv(const SufficientStats& stats, const std::string& path);
SufficientStats read_stats_csv(const std::string& path);

// Final in-degree / out-degree snapshots at a time index.
std::vector<int> in_degrees_at(const EvolutionLog& log, int t);
std::vector<int> out_degrees_at(const EvolutionLog& log, int t);

}  // namespace pafit
