#ifndef STAI_SCENARIO_HPP
#define STAI_SCENARIO_HPP

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace stai {

/// Declarative description of one interferometer run. All numbers are in
/// natural units unless units.si is set, in which case SI values are
/// converted at load time (to_natural_units) and never seen downstream.
struct ScenarioConfig {
    std::string name = "scenario";

    struct Units {
        bool si = false;
        double hbar = 0.0; // SI J*s; 0 = CODATA default
    } units;

    struct Physical {
        double c = 0.0;    // N when si
        double mass = 1.0; // kg when si
        double hbar = 1.0; // natural value; ignored when si (forced to 1)
    } physical;

    struct PotentialSpec {
        std::string kind = "harmonic"; // harmonic | lattice | tabulated
        double omega = 1.0;            // rad/s when si
        double depth = 0.0;            // J when si
        double period = 1.0;           // m when si
        std::string file;              // two-column CSV x,U for tabulated
    } potential;

    struct TrajectorySpec {
        std::string basis = "polynomial"; // polynomial | tabulated
        double t_f = 1.0;                 // s when si
        std::optional<double> M;          // m when si
        std::optional<double> target_S;   // 1/(N s) when si
        std::optional<double> mu;         // scaling M = coeff * t_f^mu
        double scale_coeff = 0.0;
        std::string file; // waveform CSV for tabulated
    } trajectory;

    struct PivotSpec {
        std::string kind = "constant"; // constant | linear_drift | noisy | spin_locked
        double x0 = 0.0;
        double a = 0.0;
        double b = 0.0;      // drift velocity
        double x0_mean = 0.0;
        double sigma = 0.0;
        double tau = 0.0;
        std::uint64_t seed = 0;
    } pivot;

    struct InitialStateSpec {
        std::string type = "eigenstate"; // eigenstate | superposition |
                                         // random_superposition | gaussian
        int n = 0;
        int modes = 5;
        std::uint64_t seed = 1;
        double width = 0.0;  // gaussian; 0 = trap bottom width
        double center = 0.0; // gaussian
        std::vector<std::complex<double>> coefficients; // superposition
    } initial_state;

    bool compensation = true;

    struct GridSpec {
        int n_points = 0;         // 0 = automatic
        double x_half_extent = 0; // 0 = automatic
        double oversample = 1.0;
        int n_ceiling = 1 << 20;
    } grid;

    struct DtSpec {
        double scale = 1.0; // multiplies min(0.02/omega_eff, t_f/2000)
    } dt;

    std::uint64_t seed = 0;
    bool track_invariant = false;

    struct OutputSpec {
        std::string dir;
        std::string format = "json"; // json | csv
        int snapshot_stride = 0;     // 0 = no snapshots
    } output;
};

ScenarioConfig scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const ScenarioConfig& config);
ScenarioConfig load_scenario(const std::string& path);

/// Convert an SI-declared scenario to natural units hbar = m = 1 with the
/// length scale anchored at the lattice period (or the oscillator length
/// for harmonic traps). Identity when the config is already natural.
ScenarioConfig to_natural_units(const ScenarioConfig& config);

/// One sweep axis: a dotted config path and the values it takes.
struct SweepAxis {
    std::string path; // e.g. "trajectory.M", "physical.c", "pivot.seed"
    std::vector<double> values;
};

struct SweepConfig {
    ScenarioConfig base;
    std::vector<SweepAxis> axes; // cartesian product, first axis slowest
    int workers = 0;             // 0 = hardware concurrency
};

SweepConfig sweep_from_json(const nlohmann::json& j);
nlohmann::json sweep_to_json(const SweepConfig& config);
SweepConfig load_sweep(const std::string& path);

/// Apply one axis value to a config (throws ConfigError on unknown path).
void apply_axis_value(ScenarioConfig& config, const std::string& path, double value);

/// All scenarios of the sweep in deterministic order, named
/// "<base>_000", "<base>_001", ...
std::vector<ScenarioConfig> expand_sweep(const SweepConfig& sweep);

} // namespace stai

#endif
