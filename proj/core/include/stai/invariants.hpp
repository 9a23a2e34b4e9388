#ifndef STAI_INVARIANTS_HPP
#define STAI_INVARIANTS_HPP

#include <complex>
#include <span>
#include <vector>

#include "stai/dynamics.hpp"

namespace stai {

/// The dynamical invariant of one arm at fixed trajectory values:
/// I = (p -+ m*alpha_dot)^2 / 2m + U_tilted(x -+ alpha).
/// Unitarily equivalent to the static moving-frame Hamiltonian, so its
/// spectrum is time independent.
struct InvariantOperator {
    Spin spin = Spin::kUp;
    double alpha = 0.0;
    double alpha_dot = 0.0;
    const Potential* potential = nullptr;
    PhysicalParams params;
};

/// I * psi, kinetic part in momentum space, potential part pointwise with
/// the exactly shifted tilted trap.
std::vector<std::complex<double>> apply_invariant(const Grid& grid, FftWorkspace& ws,
                                                  const InvariantOperator& op,
                                                  std::span<const std::complex<double>> psi);

double invariant_expectation(const Grid& grid, FftWorkspace& ws, const InvariantOperator& op,
                             std::span<const std::complex<double>> psi);

struct DriftReport {
    double reference = 0.0;                // <I>(0)
    double max_relative_drift = 0.0;       // max_t |<I>(t) - <I>(0)| / |<I>(0)|
    std::vector<double> times;
    std::vector<double> expectations;
    bool passes(double tol = 1e-6) const { return max_relative_drift < tol; }
};

/// Evaluate <I(t)> along a state history and report the worst excursion
/// from its initial value. Always returns a report; thresholds are the
/// caller's business.
DriftReport verify_invariance(const Grid& grid, const Drive& drive,
                              std::span<const ArmState> history);

/// Invariant eigenvector in the gauge
/// psi_n(x, t) = exp(+- i m alpha_dot x / hbar) phi_n(x -+ alpha), unit norm.
std::vector<std::complex<double>> dynamical_mode(const Grid& grid, FftWorkspace& ws, int n,
                                                 Spin spin, double t,
                                                 const EigenSolution& basis,
                                                 const Trajectory& traj,
                                                 const PhysicalParams& params);

/// Lewis-Riesenfeld phase from the closed-form quadrature
/// theta_n(t) = -(1/hbar) integral_0^t [lambda_n + F(t')] dt'.
double lr_phase(int n, Spin spin, const Drive& drive, double t, const EigenSolution& basis);

/// The same phase from its defining matrix element,
/// d theta/dt = <psi_n| i hbar d/dt - H |psi_n> / hbar, with the time
/// derivative taken analytically through alpha and alpha_dot. Slow but
/// independent of the closed form.
double lr_phase_defining(int n, Spin spin, const Drive& drive, double t,
                         const EigenSolution& basis, const Grid& grid);

/// Integrand of the defining integral at one instant (certification hook:
/// must equal -(lambda_n + F(t))/hbar).
double lr_phase_rate(int n, Spin spin, const Drive& drive, double t, const EigenSolution& basis,
                     const Grid& grid, FftWorkspace& ws);

} // namespace stai

#endif
