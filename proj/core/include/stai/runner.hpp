#ifndef STAI_RUNNER_HPP
#define STAI_RUNNER_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "stai/analysis.hpp"
#include "stai/invariants.hpp"
#include "stai/scenario.hpp"

namespace stai {

struct RunOptions {
    double dt_scale = 1.0; // multiplies the config's dt scale
    std::optional<std::uint64_t> seed_override;
    std::string out_dir;         // empty = write nothing
    std::string format = "json"; // json | csv
    bool gate = true;            // dt/2 convergence rerun
    int workers = 0;             // 0 = hardware concurrency
};

struct ScenarioOutcome {
    ScenarioConfig config; // natural units, as run
    RunResult result;
    std::optional<DriftReport> drift_up;
    std::optional<DriftReport> drift_down;
    std::vector<ArmState> snapshots_up, snapshots_down; // at the config stride
    std::vector<double> grid_positions;
    nlohmann::json record;
};

/// Prepare (eigensolve the tilted trap, build the initial state), propagate
/// both arms, read out, and enforce the dt/2 gate: the run is rejected with
/// GateError when halving dt moves the differential phase by >= 1e-5 rad.
ScenarioOutcome run_scenario_full(const ScenarioConfig& config, const RunOptions& opts = {});

/// run_scenario_full plus artifact emission to opts.out_dir.
RunResult run_scenario(const ScenarioConfig& config, const RunOptions& opts = {});

/// Fan the sweep out over a worker pool; outcomes keep sweep order and all
/// aggregation stays sequential, so outputs are reproducible bit for bit.
std::vector<ScenarioOutcome> run_sweep(const SweepConfig& sweep, const RunOptions& opts = {});

/// Uncompensated (f = 0) rerun of a scenario with t_f stretched by
/// slow_factor at fixed peak displacement.
ScenarioOutcome adiabatic_reference(const ScenarioConfig& config, double slow_factor,
                                    const RunOptions& opts = {});

void write_outcome_files(const ScenarioOutcome& outcome, const RunOptions& opts);
/// Header S,P_up,P_down,delta_phi,visibility.
void write_aggregate_csv(std::ostream& os, std::span<const ScenarioOutcome> outcomes);

constexpr double kGatePhaseTol = 1e-5; // rad

} // namespace stai

#endif
