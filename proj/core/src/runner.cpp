#include "stai/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include "stai/errors.hpp"
#include "stai/numerics.hpp"
#include "stai/state_ops.hpp"

namespace stai {

namespace {

struct Prepared {
    PhysicalParams params;
    Potential potential;
    Trajectory trajectory;
    Pivot pivot;
    Grid grid;
    std::vector<double> tilted;
    std::vector<std::complex<double>> phi0;
    Drive drive;
    double dt = 0.0;
    int n_steps = 0;
};

Pivot build_pivot(const ScenarioConfig::PivotSpec& spec) {
    if (spec.kind == "constant") return Pivot::constant(spec.x0);
    if (spec.kind == "linear_drift") return Pivot::linear_drift(spec.a, spec.b);
    if (spec.kind == "noisy") return Pivot::noisy(spec.x0_mean, spec.sigma, spec.tau, spec.seed);
    if (spec.kind == "spin_locked") return Pivot::spin_locked();
    throw ConfigError("unknown pivot kind: " + spec.kind);
}

Potential build_potential(const ScenarioConfig& cfg, const PhysicalParams& params) {
    const auto& spec = cfg.potential;
    if (spec.kind == "harmonic") return Potential::harmonic(spec.omega, params.mass);
    if (spec.kind == "lattice") return Potential::lattice(spec.depth, spec.period);
    if (spec.kind == "tabulated") {
        std::ifstream in(spec.file);
        if (!in) throw ConfigError("cannot open tabulated potential: " + spec.file);
        std::string line;
        std::getline(in, line); // header x,U
        std::vector<double> x, u;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::istringstream row(line);
            std::string cell;
            std::getline(row, cell, ',');
            x.push_back(std::stod(cell));
            std::getline(row, cell, ',');
            u.push_back(std::stod(cell));
        }
        return Potential::tabulated(std::move(x), std::move(u));
    }
    throw ConfigError("unknown potential kind: " + spec.kind);
}

Trajectory build_trajectory(const ScenarioConfig& cfg, const PhysicalParams& params) {
    const auto& spec = cfg.trajectory;
    if (spec.basis == "tabulated") {
        std::ifstream in(spec.file);
        if (!in) throw ConfigError("cannot open waveform file: " + spec.file);
        return read_waveform_csv(in);
    }
    if (spec.basis != "polynomial") {
        throw ConfigError("unknown trajectory basis: " + spec.basis);
    }
    double M = 0.0;
    if (spec.M) {
        M = *spec.M;
    } else if (spec.target_S) {
        M = peak_for_sensitivity(*spec.target_S, spec.t_f, params.hbar);
    } else if (spec.mu) {
        M = spec.scale_coeff * std::pow(spec.t_f, *spec.mu);
    } else {
        throw ConfigError("trajectory needs one of M, target_S or mu scaling");
    }
    return design_polynomial(M, spec.t_f);
}

Prepared prepare(const ScenarioConfig& cfg) {
    PhysicalParams params{cfg.physical.c, cfg.physical.mass, cfg.physical.hbar};
    params.validate();

    Potential pot = build_potential(cfg, params);
    Trajectory traj = build_trajectory(cfg, params);
    Pivot pivot = build_pivot(cfg.pivot);

    const auto& init = cfg.initial_state;
    const double bottom = pot.bottom_width(params.mass, params.hbar);
    double hint = bottom;
    int n_basis_states = 0;
    if (init.type == "eigenstate") {
        hint = bottom * std::sqrt(2.0 * init.n + 1.0);
        n_basis_states = init.n + 1;
    } else if (init.type == "superposition") {
        if (init.coefficients.empty()) throw ConfigError("superposition without coefficients");
        const int modes = static_cast<int>(init.coefficients.size());
        hint = bottom * std::sqrt(2.0 * modes - 1.0);
        n_basis_states = modes;
    } else if (init.type == "random_superposition") {
        if (init.modes < 1) throw ConfigError("random superposition needs modes >= 1");
        hint = bottom * std::sqrt(2.0 * init.modes - 1.0);
        n_basis_states = init.modes;
    } else if (init.type == "gaussian") {
        hint = std::max(init.width > 0.0 ? init.width : bottom, bottom);
    } else {
        throw ConfigError("unknown initial state type: " + init.type);
    }

    GridOverrides over;
    over.n_points = cfg.grid.n_points;
    over.x_half_extent = cfg.grid.x_half_extent;
    over.oversample = cfg.grid.oversample;
    over.n_ceiling = cfg.grid.n_ceiling;
    if (over.x_half_extent <= 0.0 && init.type == "gaussian" && init.center != 0.0) {
        over.x_half_extent = traj.max_abs(0) + std::abs(pot.tilted_minimum(params.c)) +
                             8.0 * hint + std::abs(init.center);
    }
    Grid grid = build_grid(pot, traj, hint, params, over);

    std::vector<double> tilted(grid.n());
    pot.eval_tilted(grid.positions(), params.c, tilted);

    std::vector<std::complex<double>> phi0(grid.n());
    if (init.type == "gaussian") {
        const double w = init.width > 0.0 ? init.width : bottom;
        for (int i = 0; i < grid.n(); ++i) {
            const double u = (grid.x(i) - init.center) / w;
            phi0[i] = std::exp(-0.25 * u * u);
        }
    } else {
        const EigenSolution basis =
            solve_stationary(grid, tilted, params, n_basis_states, EigenMethod::kAuto);
        if (init.type == "eigenstate") {
            for (int i = 0; i < grid.n(); ++i) phi0[i] = basis.eigenfunctions[init.n][i];
        } else {
            std::vector<std::complex<double>> coeffs;
            if (init.type == "superposition") {
                coeffs = init.coefficients;
            } else {
                std::mt19937_64 rng(init.seed);
                std::normal_distribution<double> gauss(0.0, 1.0);
                for (int m = 0; m < init.modes; ++m) coeffs.emplace_back(gauss(rng), gauss(rng));
            }
            for (std::size_t m = 0; m < coeffs.size(); ++m) {
                for (int i = 0; i < grid.n(); ++i) {
                    phi0[i] += coeffs[m] * basis.eigenfunctions[m][i];
                }
            }
        }
    }
    normalize(grid.dx(), phi0);

    Prepared prep{std::move(params), std::move(pot),    std::move(traj), std::move(pivot),
                  std::move(grid),   std::move(tilted), std::move(phi0), Drive{},
                  0.0,               0};
    const double t_f = prep.trajectory.t_f();
    const double dt0 = default_dt(prep.potential, prep.params, t_f, cfg.dt.scale);
    prep.n_steps = std::max(1, static_cast<int>(std::ceil(t_f / dt0 - 1e-9)));
    prep.dt = t_f / prep.n_steps;
    return prep;
}

// Drive holds pointers into the Prepared block, so it is wired only after
// the block has settled at its final address.
void wire_drive(Prepared& prep, const ScenarioConfig& cfg) {
    prep.drive = Drive{&prep.potential, &prep.trajectory, prep.pivot, prep.params,
                       cfg.compensation};
}

struct PassResult {
    RunResult result;
    std::vector<ArmState> history_up, history_down;
    std::vector<std::pair<int, ArmState>> snaps_up, snaps_down;
};

PassResult run_pass(Prepared& prep, const ScenarioConfig& cfg, double dt, int n_steps) {
    Propagator propagator(prep.grid, prep.drive);
    PhaseLedger ledger;
    PassResult pass;

    const int hist_stride =
        cfg.track_invariant ? std::max(1, n_steps / 64) : 0;
    const int snap_stride = cfg.output.snapshot_stride;

    auto make_sink = [&](std::vector<ArmState>* hist, std::vector<std::pair<int, ArmState>>* snaps)
        -> SnapshotSink {
        if (hist_stride == 0 && snap_stride == 0) return nullptr;
        return [=, n_steps = n_steps](int step, const ArmState& s) {
            if (hist_stride > 0 && (step % hist_stride == 0 || step == n_steps)) {
                hist->push_back(s);
            }
            if (snap_stride > 0 && (step % snap_stride == 0 || step == n_steps)) {
                snaps->emplace_back(step, s);
            }
        };
    };

    ArmState up{prep.phi0, 0.0, Spin::kUp, Frame::kLab};
    ArmState down{prep.phi0, 0.0, Spin::kDown, Frame::kLab};
    if (cfg.track_invariant || snap_stride > 0) {
        pass.history_up.push_back(up);
        pass.history_down.push_back(down);
    }
    up = propagator.propagate(std::move(up), dt, n_steps, &ledger,
                              make_sink(&pass.history_up, &pass.snaps_up));
    down = propagator.propagate(std::move(down), dt, n_steps, &ledger,
                                make_sink(&pass.history_down, &pass.snaps_down));

    const double drift = std::max(std::abs(norm(prep.grid.dx(), up.psi) - 1.0),
                                  std::abs(norm(prep.grid.dx(), down.psi) - 1.0));

    RunResult r = readout(prep.grid, up, down);
    r.ledger = ledger;
    r.S = sensitivity(prep.trajectory, prep.params.hbar);
    r.predicted_phase = predict_phase(prep.params.c, prep.trajectory, prep.params.hbar,
                                      prep.pivot, cfg.compensation, prep.params.mass);
    const double ledger_phase = -(ledger.F_up - ledger.F_down) / prep.params.hbar;
    r.delta_phi_unwrapped = unwrap_near(r.delta_phi, ledger_phase);
    r.norm_drift = drift;
    r.dt = dt;
    pass.result = r;
    return pass;
}

nlohmann::json result_record(const ScenarioConfig& cfg, const RunResult& r) {
    nlohmann::json rec;
    rec["scenario"] = scenario_to_json(cfg);
    rec["S"] = r.S;
    rec["delta_phi"] = r.delta_phi;
    rec["delta_phi_unwrapped"] = r.delta_phi_unwrapped;
    rec["predicted_phase"] = r.predicted_phase;
    rec["visibility"] = r.visibility;
    rec["P_up"] = r.P_up;
    rec["P_down"] = r.P_down;
    rec["overlap"] = {r.overlap.real(), r.overlap.imag()};
    rec["ledger"] = {{"F_up", r.ledger.F_up},
                     {"F_down", r.ledger.F_down},
                     {"Lambda_up", r.ledger.Lambda_up},
                     {"Lambda_down", r.ledger.Lambda_down},
                     {"x0f_up", r.ledger.x0f_up},
                     {"x0f_down", r.ledger.x0f_down}};
    rec["gate"] = {{"enabled", r.gate.enabled},
                   {"passed", r.gate.passed},
                   {"dt", r.gate.dt},
                   {"phase_coarse", r.gate.phase_coarse},
                   {"phase_fine", r.gate.phase_fine}};
    rec["diagnostics"] = {{"norm_drift", r.norm_drift},
                          {"final_edge_amplitude", r.final_edge_amplitude},
                          {"grid_points", r.grid_points},
                          {"dt", r.dt}};
    return rec;
}

} // namespace

ScenarioOutcome run_scenario_full(const ScenarioConfig& config, const RunOptions& opts) {
    ScenarioConfig cfg = to_natural_units(config);
    if (opts.seed_override) cfg.seed = *opts.seed_override;
    if (opts.dt_scale != 1.0) cfg.dt.scale *= opts.dt_scale;

    Prepared prep = prepare(cfg);
    wire_drive(prep, cfg);

    ScenarioOutcome outcome;
    outcome.config = cfg;

    if (opts.gate) {
        PassResult coarse = run_pass(prep, cfg, prep.dt, prep.n_steps);
        PassResult fine = run_pass(prep, cfg, 0.5 * prep.dt, 2 * prep.n_steps);
        GateRecord gate;
        gate.enabled = true;
        gate.dt = prep.dt;
        gate.phase_coarse = coarse.result.delta_phi_unwrapped;
        gate.phase_fine = fine.result.delta_phi_unwrapped;
        gate.passed = std::abs(gate.shift()) < kGatePhaseTol;
        if (!gate.passed) {
            throw GateError("dt-convergence gate failed: phase moved by " +
                                std::to_string(gate.shift()) + " rad between dt and dt/2",
                            gate.phase_coarse, gate.phase_fine);
        }
        fine.result.gate = gate;
        outcome.result = fine.result;
        if (cfg.track_invariant) {
            outcome.drift_up = verify_invariance(prep.grid, prep.drive, fine.history_up);
            outcome.drift_down = verify_invariance(prep.grid, prep.drive, fine.history_down);
        }
        outcome.record = result_record(cfg, outcome.result);
        if (cfg.output.snapshot_stride > 0) {
            // keep the coarse-pass snapshots alongside the fine result
            outcome.record["snapshots"] = static_cast<int>(fine.snaps_up.size());
        }
        return outcome;
    }

    PassResult only = run_pass(prep, cfg, prep.dt, prep.n_steps);
    only.result.gate.enabled = false;
    outcome.result = only.result;
    if (cfg.track_invariant) {
        outcome.drift_up = verify_invariance(prep.grid, prep.drive, only.history_up);
        outcome.drift_down = verify_invariance(prep.grid, prep.drive, only.history_down);
    }
    outcome.record = result_record(cfg, outcome.result);
    return outcome;
}

RunResult run_scenario(const ScenarioConfig& config, const RunOptions& opts) {
    ScenarioOutcome outcome = run_scenario_full(config, opts);
    write_outcome_files(outcome, opts);
    return outcome.result;
}

std::vector<ScenarioOutcome> run_sweep(const SweepConfig& sweep, const RunOptions& opts) {
    const std::vector<ScenarioConfig> scenarios = expand_sweep(sweep);
    std::vector<ScenarioOutcome> outcomes(scenarios.size());
    int workers = opts.workers > 0 ? opts.workers : sweep.workers;
    if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
    workers = std::clamp<int>(workers, 1, static_cast<int>(scenarios.size()));

    if (workers == 1) {
        for (std::size_t i = 0; i < scenarios.size(); ++i) {
            outcomes[i] = run_scenario_full(scenarios[i], opts);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> errors(scenarios.size());
        auto work = [&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= scenarios.size()) return;
                try {
                    outcomes[i] = run_scenario_full(scenarios[i], opts);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        };
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
        for (const auto& err : errors) {
            if (err) std::rethrow_exception(err);
        }
    }

    if (!opts.out_dir.empty()) {
        for (const auto& outcome : outcomes) write_outcome_files(outcome, opts);
        std::filesystem::create_directories(opts.out_dir);
        std::ofstream agg(std::filesystem::path(opts.out_dir) / "aggregate.csv");
        write_aggregate_csv(agg, outcomes);
    }
    return outcomes;
}

ScenarioOutcome adiabatic_reference(const ScenarioConfig& config, double slow_factor,
                                    const RunOptions& opts) {
    if (!(slow_factor >= 1.0)) throw ConfigError("slow factor must be >= 1");
    ScenarioConfig cfg = to_natural_units(config);
    cfg.compensation = false;
    cfg.trajectory.t_f *= slow_factor; // fixed M, stretched duration
    cfg.name += "_slow";
    return run_scenario_full(cfg, opts);
}

void write_outcome_files(const ScenarioOutcome& outcome, const RunOptions& opts) {
    if (opts.out_dir.empty()) return;
    namespace fs = std::filesystem;
    fs::create_directories(opts.out_dir);
    const fs::path dir(opts.out_dir);
    if (opts.format == "csv") {
        std::ofstream os(dir / (outcome.config.name + ".csv"));
        os << "S,P_up,P_down,delta_phi,visibility\n";
        os.precision(17);
        const auto& r = outcome.result;
        os << r.S << ',' << r.P_up << ',' << r.P_down << ',' << r.delta_phi << ','
           << r.visibility << '\n';
    } else {
        std::ofstream os(dir / (outcome.config.name + ".json"));
        os << outcome.record.dump(2) << '\n';
    }
}

void write_aggregate_csv(std::ostream& os, std::span<const ScenarioOutcome> outcomes) {
    os << "S,P_up,P_down,delta_phi,visibility\n";
    os.precision(17);
    for (const auto& outcome : outcomes) {
        const auto& r = outcome.result;
        os << r.S << ',' << r.P_up << ',' << r.P_down << ',' << r.delta_phi << ','
           << r.visibility << '\n';
    }
}

} // namespace stai
