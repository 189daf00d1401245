#include <pafit/evolution_store.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace pafit {

namespace {

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

EvolutionLog ingest(const std::string& path, const std::set<std::string>& dep_types) {
    if (dep_types.empty()) throw std::runtime_error("ingest: dep_types must be non-empty");
    std::ifstream in(path);
    if (!in) throw std::runtime_error("ingest: cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line))
        return build_log({}, dep_types);
    {
        auto header = split_row(line);
        const std::vector<std::string> expected{"from", "to", "type", "action", "prev_date", "curr_date"};
        if (header != expected)
            throw std::runtime_error("ingest: '" + path + "' line 1: unexpected header");
    }

    std::vector<EdgeEvent> events;
    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = split_row(line);
        auto fail = [&](const std::string& what) -> std::runtime_error {
            return std::runtime_error("ingest: '" + path + "' line " + std::to_string(line_no) + ": " + what);
        };
        if (fields.size() != 6) throw fail("expected 6 fields, got " + std::to_string(fields.size()));
        EdgeEvent ev;
        ev.source = fields[0];
        ev.target = fields[1];
        ev.dep_type = fields[2];
        if (ev.source.empty() || ev.target.empty()) throw fail("empty vertex name");
        if (fields[3] == "added")
            ev.action = Action::Added;
        else if (fields[3] == "removed")
            ev.action = Action::Removed;
        else
            throw fail("unknown action '" + fields[3] + "'");
        try {
            ev.prev_date = parse_date(fields[4]);
            ev.curr_date = parse_date(fields[5]);
        } catch (const std::invalid_argument& e) {
            throw fail(e.what());
        }
        if (!(ev.prev_date < ev.curr_date)) throw fail("prev_date must precede curr_date");
        if (ev.source == ev.target) throw fail("self-loop " + ev.source + " -> " + ev.target);
        events.push_back(std::move(ev));
    }
    return build_log(std::move(events), dep_types);
}

EvolutionLog build_log(std::vector<EdgeEvent> events, const std::set<std::string>& dep_types) {
    EvolutionLog log;

    std::erase_if(events, [&](const EdgeEvent& e) { return !dep_types.count(e.dep_type); });
    if (events.empty()) return log;

    // Timeline: every date mentioned, sorted.  t=0 is the baseline date.
    std::set<Date> dates;
    for (const auto& e : events) {
        dates.insert(e.prev_date);
        dates.insert(e.curr_date);
    }
    log.timeline.assign(dates.begin(), dates.end());
    std::map<Date, int> date_index;
    for (int i = 0; i < static_cast<int>(log.timeline.size()); ++i)
        date_index[log.timeline[i]] = i;

    // Stable sort by change date keeps file order within a date.
    std::stable_sort(events.begin(), events.end(),
                     [](const EdgeEvent& a, const EdgeEvent& b) { return a.curr_date < b.curr_date; });

    std::unordered_map<std::string, VertexId> ids;
    auto intern = [&](const std::string& name, int t) {
        auto [it, inserted] = ids.emplace(name, static_cast<VertexId>(log.vertex_names.size()));
        if (inserted) {
            log.vertex_names.push_back(name);
            log.vertex_first_seen.push_back(t);
        }
        return it->second;
    };

    log.steps.resize(log.timeline.size() - 1);
    std::set<Edge> edge_set;

    std::size_t pos = 0;
    while (pos < events.size()) {
        const Date date = events[pos].curr_date;
        const int t = date_index.at(date);
        std::vector<Edge> adds, rems;
        for (; pos < events.size() && events[pos].curr_date == date; ++pos) {
            const auto& e = events[pos];
            Edge edge{intern(e.source, t), intern(e.target, t)};
            (e.action == Action::Added ? adds : rems).push_back(edge);
        }
        // Churn within one date (same edge added and removed) nets out:
        // increments are defined on the t-1 -> t set difference.
        std::sort(adds.begin(), adds.end());
        std::sort(rems.begin(), rems.end());
        std::vector<Edge> net_adds, net_rems;
        std::set_difference(adds.begin(), adds.end(), rems.begin(), rems.end(),
                            std::back_inserter(net_adds));
        std::set_difference(rems.begin(), rems.end(), adds.begin(), adds.end(),
                            std::back_inserter(net_rems));

        auto edge_name = [&](const Edge& e) {
            return log.vertex_names[e.first] + " -> " + log.vertex_names[e.second];
        };
        auto& step = log.steps[t - 1];
        for (const Edge& e : net_adds) {
            if (!edge_set.insert(e).second)
                throw std::runtime_error("build_log: duplicate addition of edge " + edge_name(e) +
                                         " at " + format_date(date));
            step.additions.push_back(e);
        }
        for (const Edge& e : net_rems) {
            if (edge_set.erase(e) == 0)
                throw std::runtime_error("build_log: removal of absent edge " + edge_name(e) +
                                         " at " + format_date(date));
            step.removals.push_back(e);
        }
    }
    return log;
}

IncrementPanel extract_increments(const EvolutionLog& log) {
    IncrementPanel panel;
    panel.timeline = log.timeline;
    const int T = log.horizon();
    panel.steps.resize(T);

    std::vector<int> in_deg(log.vertex_count(), 0);
    // Ids are interned in event order, so the existing vertices at t-1 are
    // exactly the ids below n_prev.
    std::vector<int> count_at(T + 1, 0);
    for (int fs : log.vertex_first_seen) ++count_at[fs];
    for (int t = 1; t <= T; ++t) count_at[t] += count_at[t - 1];

    for (int t = 1; t <= T; ++t) {
        const int n_prev = count_at[t - 1];
        auto& rows = panel.steps[t - 1];
        rows.resize(n_prev);
        for (int i = 0; i < n_prev; ++i) {
            rows[i].vertex = i;
            rows[i].k_prev = in_deg[i];
        }
        for (const Edge& e : log.steps[t - 1].additions) {
            if (e.second < n_prev) {
                // Edges between two brand-new vertices fall outside the
                // panel; so do new targets (their degree starts at t).
                if (e.first < n_prev)
                    ++rows[e.second].x;
                else
                    ++rows[e.second].y;
            }
            ++in_deg[e.second];
        }
        for (const Edge& e : log.steps[t - 1].removals) {
            ++rows[e.second].z;
            --in_deg[e.second];
        }
    }
    return panel;
}

SufficientStats summarize(const IncrementPanel& panel, Category category) {
    SufficientStats stats;
    stats.steps.resize(panel.horizon());
    for (int t = 1; t <= panel.horizon(); ++t) {
        auto& ts = stats.steps[t - 1];
        std::map<int, std::int64_t> degrees;
        std::map<std::pair<int, int>, std::int64_t> increments;
        for (const PanelRow& row : panel.steps[t - 1]) {
            ++degrees[row.k_prev];
            const int inc = category == Category::Internal ? row.x
                          : category == Category::External ? row.y
                                                           : row.z;
            if (inc > 0) ++increments[{row.k_prev, inc}];
            ts.total_increment += inc;
        }
        ts.degree_counts.assign(degrees.begin(), degrees.end());
        ts.increment_counts.assign(increments.begin(), increments.end());
        ts.vertex_count = static_cast<std::int64_t>(panel.steps[t - 1].size());
    }
    return stats;
}

std::vector<Period> partition_periods(const IncrementPanel& panel, const std::string& scheme) {
    const int T = panel.horizon();
    if (T == 0) throw std::runtime_error("partition_periods: no time steps");
    std::vector<Period> periods;
    if (scheme == "monthly") {
        int start = 1;
        for (int t = 2; t <= T + 1; ++t) {
            if (t == T + 1 || year_month(panel.timeline[t]) != year_month(panel.timeline[start])) {
                periods.push_back({static_cast<int>(periods.size()) + 1, start, t - start});
                start = t;
            }
        }
    } else if (scheme.rfind("fixed:", 0) == 0) {
        const int w = std::stoi(scheme.substr(6));
        if (w < 1) throw std::runtime_error("partition_periods: width must be >= 1");
        for (int start = 1; start <= T; start += w) {
            const int len = std::min(w, T - start + 1);
            periods.push_back({static_cast<int>(periods.size()) + 1, start, len});
        }
    } else {
        throw std::runtime_error("partition_periods: unknown scheme '" + scheme + "'");
    }
    return periods;
}

std::vector<SufficientStats> split_stats(const SufficientStats& stats,
                                         const std::vector<Period>& periods) {
    std::vector<SufficientStats> out;
    out.reserve(periods.size());
    for (const Period& p : periods) {
        SufficientStats s;
        s.steps.assign(stats.steps.begin() + (p.first_step - 1),
                       stats.steps.begin() + (p.first_step - 1) + p.step_count);
        out.push_back(std::move(s));
    }
    return out;
}

void write_stats_csv(const SufficientStats& stats, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_stats_csv: cannot open '" + path + "'");
    out << "t,k,y,count\n";
    for (int t = 1; t <= stats.horizon(); ++t) {
        const auto& ts = stats.steps[t - 1];
        for (const auto& [k, c] : ts.degree_counts)
            out << t << ',' << k << ",-1," << c << '\n';
        for (const auto& [ky, c] : ts.increment_counts)
            out << t << ',' << ky.first << ',' << ky.second << ',' << c << '\n';
    }
}

SufficientStats read_stats_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_stats_csv: cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || split_row(line) != std::vector<std::string>{"t", "k", "y", "count"})
        throw std::runtime_error("read_stats_csv: '" + path + "': bad header");
    SufficientStats stats;
    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = split_row(line);
        if (fields.size() != 4)
            throw std::runtime_error("read_stats_csv: '" + path + "' line " +
                                     std::to_string(line_no) + ": expected 4 fields");
        int t, k, y;
        std::int64_t count;
        try {
            t = std::stoi(fields[0]);
            k = std::stoi(fields[1]);
            y = std::stoi(fields[2]);
            count = std::stoll(fields[3]);
        } catch (const std::exception&) {
            throw std::runtime_error("read_stats_csv: '" + path + "' line " +
                                     std::to_string(line_no) + ": bad number");
        }
        if (t < 1 || k < 0 || count < 1 || y == 0)
            throw std::runtime_error("read_stats_csv: '" + path + "' line " +
                                     std::to_string(line_no) + ": out-of-range value");
        if (t > stats.horizon()) stats.steps.resize(t);
        auto& ts = stats.steps[t - 1];
        if (y < 0) {
            ts.degree_counts.emplace_back(k, count);
            ts.vertex_count += count;
        } else {
            ts.increment_counts.push_back({{k, y}, count});
            ts.total_increment += static_cast<std::int64_t>(y) * count;
        }
    }
    for (auto& ts : stats.steps) {
        std::sort(ts.degree_counts.begin(), ts.degree_counts.end());
        std::sort(ts.increment_counts.begin(), ts.increment_counts.end());
    }
    return stats;
}

std::vector<int> in_degrees_at(const EvolutionLog& log, int t) {
    if (t < 0 || t > log.horizon()) throw std::runtime_error("in_degrees_at: bad time index");
    std::vector<int> deg(log.vertex_count(), 0);
    for (int s = 1; s <= t; ++s) {
        for (const Edge& e : log.steps[s - 1].additions) ++deg[e.second];
        for (const Edge& e : log.steps[s - 1].removals) --deg[e.second];
    }
    int n_t = 0;
    for (int i = 0; i < log.vertex_count(); ++i)
        if (log.vertex_first_seen[i] <= t) ++n_t;
    deg.resize(n_t);
    return deg;
}

std::vector<int> out_degrees_at(const EvolutionLog& log, int t) {
    if (t < 0 || t > log.horizon()) throw std::runtime_error("out_degrees_at: bad time index");
    std::vector<int> deg(log.vertex_count(), 0);
    for (int s = 1; s <= t; ++s) {
        for (const Edge& e : log.steps[s - 1].additions) ++deg[e.first];
        for (const Edge& e : log.steps[s - 1].removals) --deg[e.first];
    }
    int n_t = 0;
    for (int i = 0; i < log.vertex_count(); ++i)
        if (log.vertex_first_seen[i] <= t) ++n_t;
    deg.resize(n_t);
    return deg;
}

}  // namespace pafit
