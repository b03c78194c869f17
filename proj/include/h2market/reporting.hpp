#pragma once

#include <map>
#include <string>
#include <vector>

#include "h2market/config.hpp"
#include "h2market/scenario.hpp"

namespace h2market {

/// Executes the requested rollouts and sweeps and writes one data file per
/// figure family plus a manifest: penetration paths, market-share stacks,
/// price trajectories, profit series, commission-sweep curves, lump-sum
/// feasibility grids and bargaining-case tables. Returns the artifact
/// paths. Artifacts are byte-stable for identical configs.
std::vector<std::string> run(const RunConfig& config);

/// Runs the baseline plus the three shocks, writing per-scenario artifact
/// directories and a final-period comparison table.
std::vector<std::string> run_scenarios(const RunConfig& config);

/// Structured comparison of two artifact directories (same layout):
/// per-file, per-column max absolute and relative deltas.
struct SeriesDelta {
    std::string file;
    std::string column;
    double max_abs = 0.0;
    double max_rel = 0.0;
};
struct DiffReport {
    std::vector<SeriesDelta> deltas;
    bool identical() const;
    double max_abs() const;
};
DiffReport diff_runs(const std::string& dir_a, const std::string& dir_b);

/// Looks up a named series delta from a diff (file without extension).
const SeriesDelta* find_delta(const DiffReport& report, const std::string& file,
                              const std::string& column);

/// FNV-1a of a file's bytes, hex-encoded; used for the manifest.
std::string file_hash(const std::string& path);

}  // namespace h2market
