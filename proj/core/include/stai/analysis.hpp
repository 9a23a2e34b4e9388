#ifndef STAI_ANALYSIS_HPP
#define STAI_ANALYSIS_HPP

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "stai/dynamics.hpp"

namespace stai {

struct GateRecord {
    bool enabled = false;
    bool passed = true;
    double dt = 0.0;          // coarse step
    double phase_coarse = 0.0;
    double phase_fine = 0.0;  // at dt/2
    double shift() const { return phase_fine - phase_coarse; }
};

/// Interferometric readout of one run.
struct RunResult {
    std::complex<double> overlap{1.0, 0.0};
    double delta_phi = 0.0;           // principal value, arg(overlap)
    double delta_phi_unwrapped = 0.0; // continued using the phase ledger
    double visibility = 1.0;          // |overlap|
    double P_up = 1.0;
    double P_down = 0.0;
    double S = 0.0;               // sensitivity of the trajectory
    double predicted_phase = 0.0; // closed-form expectation
    PhaseLedger ledger;
    GateRecord gate;
    double norm_drift = 0.0;
    double final_edge_amplitude = 0.0;
    int grid_points = 0;
    double dt = 0.0;
};

/// Overlap, phase, visibility and pi/2-pulse populations from the two arm
/// states at t_f (Born rule on the recombined superposition).
RunResult readout(const Grid& grid, const ArmState& up, const ArmState& down);

/// Closed-form differential phase: 2c*integral(alpha)/hbar minus the
/// pivot contribution 2*integral(x0 f)/hbar. Constant and linear-drift
/// pivots contribute exactly zero; a spin-locked pivot contributes equally
/// to both arms; a noisy pivot is integrated along its realized path.
double predict_phase(double c, const Trajectory& traj, double hbar, const Pivot& pivot,
                     bool compensation = true, double mass = 1.0);

struct EstimationResult {
    enum class Method { kArccosBranch, kPeriodicityScan };
    double c_hat = 0.0;
    Method method = Method::kPeriodicityScan;
    int branch = 0;
    double residual = 0.0; // least-squares misfit at c_hat
    bool ambiguous = false;
};

/// Fit P(S) = 1/2 + 1/2 cos(cS) by coarse frequency scan plus
/// golden-section refinement over [c_lo, c_hi].
EstimationResult estimate_force_scan(std::span<const std::pair<double, double>> populations,
                                     double c_lo, double c_hi);

/// Invert a single (S, P) pair on a declared arccosine branch:
/// cS = 2*pi*k + sign(branch) * arccos(2P - 1).
EstimationResult estimate_force_arccos(double S, double P_up, int branch);

/// Binomially sampled population with N_shots repetitions.
double add_shot_noise(double p, int n_shots, std::uint64_t seed);

/// Bootstrap standard error of the scan estimator under shot noise.
double bootstrap_sigma(std::span<const std::pair<double, double>> populations, int n_shots,
                       double c_lo, double c_hi, int n_resamples, std::uint64_t seed);

/// Unwrap a phase sequence ordered by S assuming |d(phi)/dS| <= c_max.
std::vector<double> unwrap_sweep(std::span<const double> S, std::span<const double> phi,
                                 double c_max);

} // namespace stai

#endif
