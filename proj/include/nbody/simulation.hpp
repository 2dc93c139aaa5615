#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "nbody/integrator.hpp"
#include "nbody/scenario.hpp"

namespace nbody {

/// Raised for malformed config documents, unknown scenario/scheme names, and
/// option combinations the harness rejects. The CLI maps it to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One fully resolved simulation request.
struct RunConfig {
    ScenarioSpec scenario;
    std::string scheme = "midpoint";  // midpoint | gauss2 | gauss3 | rk4
    double dt = 0.1;
    double t_end = 1.0;
    IterationConfig iteration;
    std::filesystem::path out_dir;    // empty: write no files
    std::size_t stride = 1;           // sample every k-th accepted step
};

/// Reads and parses a JSON document; throws ConfigError on IO/parse failure.
nlohmann::json load_json_file(const std::filesystem::path& path);

/// Resolves a config document into a runnable RunConfig.
///
/// Recognized keys: scenario (built-in name, path to a scenario JSON file,
/// or an inline scenario object — required), scheme, dt, t_end, drift_tol,
/// residual_tol, max_iters, max_halvings, out, stride. dt and t_end default
/// to the scenario's own dt0/t_end. The explicit scheme has no iterative
/// solve and no acceptance corridor, so combining scheme "rk4" with any of
/// drift_tol / residual_tol / max_iters / max_halvings is a ConfigError.
RunConfig resolve_config(const nlohmann::json& doc);

/// Result of one harness run: the integration summary plus where the data
/// files were written (empty paths when no out_dir was set) and the sampled
/// series kept in memory for comparisons and audits.
struct SimulationOutput {
    RunSummary summary;
    std::filesystem::path trajectory_csv;
    std::filesystem::path drift_csv;
    std::filesystem::path summary_json;
    std::vector<ExtendedState> sampled_states;  // initial state + sampled steps
    std::vector<DriftRecord> sampled_drift;     // index-aligned with sampled_states
};

/// Runs one configured simulation. When out_dir is set, writes
/// trajectory.csv and drift.csv (every stride-th accepted step, the final
/// step always, preceded by the starting state unless the run has zero
/// steps) plus summary.json. Never throws on an aborted run — the abort
/// reason travels in the summary.
SimulationOutput run_simulation(const RunConfig& cfg);

/// The summary document written to summary.json and printed by the CLI.
nlohmann::json summary_to_json(const RunConfig& cfg, const RunSummary& summary);

/// Two runs of structurally identical scenarios (same body count, masses
/// and gravitational constant — initial states may differ) compared on a
/// common time grid.
struct CompareOutput {
    SimulationOutput a;
    SimulationOutput b;
    std::filesystem::path compare_csv;
    std::filesystem::path compare_json;
    double max_position_deviation = 0.0;    // worst aligned-time body gap
    double final_position_deviation = 0.0;  // gap at the last aligned time
    nlohmann::json report;                  // the compare.json document
};

/// Runs both configs (concurrently, each into its own subdirectory of
/// out_dir when set), aligns the coarser sample grid against the nearest
/// times of the finer one, and reports both energy-drift series side by
/// side with the largest body-position deviation per aligned row.
/// Throws ConfigError when the scenarios are structurally different.
CompareOutput run_compare(RunConfig a, RunConfig b, const std::filesystem::path& out_dir);

// --- CSV plumbing (exposed for round-trip audits in tests) ----------------

/// Shortest decimal form that parses back to exactly the same binary64
/// value (up to 17 significant digits), locale-independent.
std::string format_full(double x);

void write_trajectory_header(std::ostream& os, std::size_t n);
void write_trajectory_row(std::ostream& os, const ExtendedState& s);
void write_drift_header(std::ostream& os);
void write_drift_row(std::ostream& os, const DriftRecord& d);

/// Reads back a trajectory CSV (body count inferred from the header).
std::vector<ExtendedState> read_trajectory_csv(const std::filesystem::path& path);

/// Reads back a drift CSV.
std::vector<DriftRecord> read_drift_csv(const std::filesystem::path& path);

}  // namespace nbody
