#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

#include "tinj/errors.hpp"
#include "tinj/noise_sim.hpp"
#include "tinj/trajectory.hpp"

namespace tinj {

struct LookupEntry {
    Trajectory trajectory;
    double mean_fidelity = 0.0;
    double frequency = 0.0;
};

/// Trajectory whitelist: entries ranked by mean fidelity descending, the
/// whitelist is the minimal prefix whose cumulative frequency reaches the
/// budget. Ties break on higher frequency, then lexicographic trajectory.
struct LookupTable {
    std::vector<LookupEntry> entries;
    std::set<Trajectory> whitelist;
    double budget = 0.0;
    double whitelist_frequency = 0.0;

    bool accepts(const Trajectory& t) const { return whitelist.count(t) != 0; }
};

inline LookupTable build_lookup(std::span<const TrajectoryStats> stats, double budget) {
    if (stats.empty()) throw EmptyStatsError("cannot build a lookup table from empty statistics");
    if (!(budget > 0.0 && budget <= 1.0)) throw std::invalid_argument("budget must be in (0, 1]");
    double freq_sum = 0.0;
    for (const TrajectoryStats& s : stats) freq_sum += s.frequency;
    if (std::abs(freq_sum - 1.0) > 1e-9)
        throw std::invalid_argument("trajectory frequencies must sum to 1");
    LookupTable table;
    table.budget = budget;
    table.entries.reserve(stats.size());
    for (const TrajectoryStats& s : stats)
        table.entries.push_back({s.trajectory, s.mean_fidelity, s.frequency});
    std::sort(table.entries.begin(), table.entries.end(),
              [](const LookupEntry& l, const LookupEntry& r) {
                  if (l.mean_fidelity != r.mean_fidelity) return l.mean_fidelity > r.mean_fidelity;
                  if (l.frequency != r.frequency) return l.frequency > r.frequency;
                  // final tie-break: lexicographic on the printed bit string
                  return l.trajectory.to_compact_string() < r.trajectory.to_compact_string();
              });
    for (const LookupEntry& e : table.entries) {
        if (table.whitelist_frequency >= budget) break;
        table.whitelist.insert(e.trajectory);
        table.whitelist_frequency += e.frequency;
    }
    return table;
}

struct PostselectionSummary {
    long long considered = 0;   // stable shots
    long long accepted = 0;
    double accepted_fraction = 0.0;  // accepted / stable
    double logical_error_rate = 0.0;
    double mean_fidelity = 0.0;
};

/// Filter to stable, whitelisted shots and report their aggregates.
inline PostselectionSummary apply_postselection(std::span<const ShotRecord> records,
                                                const LookupTable& table) {
    PostselectionSummary out;
    detail::KahanSum fid;
    long long errors = 0;
    for (const ShotRecord& rec : records) {
        if (!rec.stable) continue;
        ++out.considered;
        if (!table.accepts(rec.trajectory)) continue;
        ++out.accepted;
        fid.add(rec.fidelity);
        if (rec.logical_error) ++errors;
    }
    if (out.considered > 0)
        out.accepted_fraction = double(out.accepted) / double(out.considered);
    if (out.accepted > 0) {
        out.logical_error_rate = double(errors) / double(out.accepted);
        out.mean_fidelity = fid.sum / double(out.accepted);
    }
    return out;
}

}  // namespace tinj
