#ifndef STAI_DYNAMICS_HPP
#define STAI_DYNAMICS_HPP

#include <complex>
#include <functional>
#include <vector>

#include "stai/eigensolver.hpp"
#include "stai/fft.hpp"
#include "stai/grid.hpp"
#include "stai/pivot.hpp"
#include "stai/potential.hpp"
#include "stai/trajectory.hpp"
#include "stai/units.hpp"

namespace stai {

enum class Frame { kLab, kMoving };

/// One spin branch of the interferometer at time t.
struct ArmState {
    std::vector<std::complex<double>> psi;
    double t = 0.0;
    Spin spin = Spin::kUp;
    Frame frame = Frame::kLab;
};

/// Accumulated purely-time-dependent phases, per spin:
///   F = integral of (m*alpha_dot^2/2 +- f*x0 -+ c*alpha),
///   Lambda = integral of (+- f*x0 -+ c*alpha),
///   x0f = integral of x0*f.
/// The differential phase of the run equals -(F_up - F_down)/hbar.
struct PhaseLedger {
    double F_up = 0.0, F_down = 0.0;
    double Lambda_up = 0.0, Lambda_down = 0.0;
    double x0f_up = 0.0, x0f_down = 0.0;

    double& F(Spin s) { return s == Spin::kUp ? F_up : F_down; }
    double& Lambda(Spin s) { return s == Spin::kUp ? Lambda_up : Lambda_down; }
    double& x0f(Spin s) { return s == Spin::kUp ? x0f_up : x0f_down; }
};

/// Everything that drives the two arms: trap, path, pivot, constants, and
/// whether the inertial compensation f = m*alpha_ddot is applied.
struct Drive {
    const Potential* potential = nullptr;
    const Trajectory* trajectory = nullptr;
    Pivot pivot;
    PhysicalParams params;
    bool compensation = true;

    double force(double t) const {
        return compensation ? params.mass * trajectory->evaluate(t, 2) : 0.0;
    }
    /// F^{up/down}(t) for a given pivot value at that instant.
    double F_term(double t, double x0, Spin spin) const {
        const double s = spin_sign(spin);
        const double ad = trajectory->evaluate(t, 1);
        return 0.5 * params.mass * ad * ad + s * force(t) * x0 -
               s * params.c * trajectory->evaluate(t, 0);
    }
};

/// dt <= dt_scale * min(0.02 / omega_eff, t_f / 2000).
double default_dt(const Potential& pot, const PhysicalParams& params, double t_f,
                  double dt_scale = 1.0);

/// Per-frame observer; step_index counts completed steps.
using SnapshotSink = std::function<void(int step_index, const ArmState&)>;

/// Strang split-operator evolution under the full laboratory-frame arm
/// Hamiltonian. The time-dependent potential is sampled at each interval
/// midpoint; the spatially constant terms are kept so the state's global
/// phase is the physical one. Norm and edge containment are monitored.
class Propagator {
public:
    Propagator(const Grid& grid, const Drive& drive);

    ArmState propagate(ArmState state, double dt, int n_steps, PhaseLedger* ledger = nullptr,
                       const SnapshotSink& sink = nullptr);

    const PivotSampler& pivot_sampler() const { return sampler_; }

private:
    const Grid* grid_;
    Drive drive_;
    PivotSampler sampler_;
    FftWorkspace ws_;
    std::vector<double> v_;
    std::vector<std::complex<double>> kinetic_;
    double kinetic_dt_ = -1.0;
};

/// Unitary map to the trap's comoving frame: momentum kick
/// exp(-+ i m alpha_dot x / hbar) followed by the spectral position shift
/// by +-alpha. Throws on aliasing (state too close to the wrapped edge).
void to_moving_frame(const Grid& grid, FftWorkspace& ws, const PhysicalParams& params,
                     ArmState& state, double alpha, double alpha_dot);
/// Inverse map (shift back, then undo the kick).
void to_lab_frame(const Grid& grid, FftWorkspace& ws, const PhysicalParams& params,
                  ArmState& state, double alpha, double alpha_dot);

/// Circular spectral shift psi(x) -> psi(x + shift); checks that no
/// significant amplitude wraps around the boundary.
void spectral_shift(const Grid& grid, FftWorkspace& ws,
                    std::vector<std::complex<double>>& psi, double shift);

struct AnalyticArm {
    ArmState state; // laboratory frame at time t
    PhaseLedger ledger;
    std::vector<std::complex<double>> coefficients;
    double truncation_residual = 0.0;
};

/// Exact driven solution: expand the initial moving-frame state in the
/// stationary basis, advance each mode by exp(-i lambda_n t / hbar), apply
/// the accumulated F phase and map to the laboratory frame.
AnalyticArm analytic_arm(const Grid& grid, FftWorkspace& ws, const Drive& drive,
                         const ArmState& initial_moving, double t, const EigenSolution& basis);

} // namespace stai

#endif
