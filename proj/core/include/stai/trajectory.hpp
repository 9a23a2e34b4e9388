#ifndef STAI_TRAJECTORY_HPP
#define STAI_TRAJECTORY_HPP

#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include "stai/cubic_spline.hpp"

namespace stai {

enum class TrajectoryBasis { kPolynomial, kSineSeries, kTabulated };

/// Trap path alpha(t) on [0, t_f].
///
/// Every trajectory starts and ends at rest at the origin:
/// alpha = d(alpha)/dt = 0 at t = 0 and t = t_f, and for designed bases also
/// d2(alpha)/dt2 = 0 there so the compensation force vanishes at the
/// boundaries. Construction rejects paths that violate these conditions.
///
/// Polynomial and sine-series coefficients are stored in the reduced
/// variable s = t / t_f, which keeps them O(peak) for any duration.
class Trajectory {
public:
    /// coeffs[j] multiplies s^j.
    static Trajectory polynomial(double t_f, std::vector<double> coeffs);
    /// coeffs[j] multiplies sin((j+1) pi s).
    static Trajectory sine_series(double t_f, std::vector<double> coeffs);
    /// Clamped-spline interpolant of samples (t must start at 0). The
    /// second derivative is approximate at spline accuracy.
    static Trajectory tabulated(std::vector<double> t, std::vector<double> alpha);

    /// alpha (order 0), alpha_dot (1) or alpha_ddot (2) at t in [0, t_f].
    /// Exact basis derivatives, no finite differencing.
    double evaluate(double t, int order) const;

    double t_f() const { return t_f_; }
    TrajectoryBasis basis() const { return basis_; }
    const std::vector<double>& coefficients() const { return coeffs_; }

    /// Closed-form (or spline) value of integral_0^{t_f} alpha dt.
    double integral() const;

    /// Signed displacement of largest magnitude over [0, t_f].
    double peak_displacement() const { return peak_; }

    /// Largest |d^order alpha / dt^order| over [0, t_f] (sampled scan).
    double max_abs(int order) const;

    bool second_derivative_exact() const { return basis_ != TrajectoryBasis::kTabulated; }

private:
    Trajectory() = default;
    void finalize(bool require_rest_acceleration);

    TrajectoryBasis basis_ = TrajectoryBasis::kPolynomial;
    double t_f_ = 0.0;
    std::vector<double> coeffs_;
    std::vector<double> d1_, d2_;           // polynomial derivative coefficients in s
    std::shared_ptr<const CubicSpline> spline_; // tabulated basis
    double peak_ = 0.0;
};

/// f(t) = m * alpha_ddot(t), the homogeneous force that cancels the
/// inertial term of the moving trap.
class CompensationForce {
public:
    CompensationForce(const Trajectory& traj, double mass) : traj_(&traj), mass_(mass) {}
    double operator()(double t) const { return mass_ * traj_->evaluate(t, 2); }
    double mass() const { return mass_; }

private:
    const Trajectory* traj_;
    double mass_;
};

/// The four-term ansatz sum_{j=3}^{6} b_j s^j with
/// (b3, b4, b5, b6) = (64, -192, 192, -64) * M: rest-to-rest, zero boundary
/// acceleration, peak displacement M at t_f/2.
Trajectory design_polynomial(double M, double t_f);

struct TrajectoryConstraint {
    int order = 0;   // derivative order, 0..2
    double t = 0.0;  // absolute time in [0, t_f]
    double value = 0.0;
};

/// Solve for basis coefficients meeting the given point constraints, on an
/// explicit list of polynomial powers of s. If target_S is set, one extra
/// row fixes the sensitivity. Throws NumericsError when the system is
/// singular, inconsistent or underdetermined.
Trajectory design_constrained_powers(double t_f, const std::vector<int>& powers,
                                     const std::vector<TrajectoryConstraint>& constraints,
                                     std::optional<double> target_S = std::nullopt,
                                     double hbar = 1.0);

/// Same, choosing powers s^3, s^4, ... automatically: one power per
/// non-trivial constraint plus extra_terms spares (plus one for target_S).
Trajectory design_constrained(double t_f, const std::vector<TrajectoryConstraint>& constraints,
                              int extra_terms = 0,
                              std::optional<double> target_S = std::nullopt, double hbar = 1.0);

/// Sine-series variant of the constrained design on modes sin(j pi s),
/// j = 1..n_modes.
Trajectory design_constrained_sine(double t_f, int n_modes,
                                   const std::vector<TrajectoryConstraint>& constraints,
                                   std::optional<double> target_S = std::nullopt,
                                   double hbar = 1.0);

/// S = (2/hbar) integral_0^{t_f} alpha dt: twice the space-time area swept
/// between the two arm paths, in units of hbar. For the canonical ansatz
/// this equals 32*M*t_f/(35*hbar).
double sensitivity(const Trajectory& traj, double hbar);

/// Peak displacement that realizes sensitivity S0 with the canonical
/// ansatz: M = 35*S0*hbar/(32*t_f).
double peak_for_sensitivity(double S0, double t_f, double hbar);

/// Linear peak-vs-duration law M = (lambda / 72 us) * (t_f / 2)
/// extrapolated from an elementary lattice displacement of lambda/4 in
/// 18 us. `microsecond` is the value of 1 us in the units of t_f.
double steffen_scaling(double t_f, double lambda, double microsecond = 1e-6);

/// Waveform handoff as CSV with header "t,alpha,alpha_dot,alpha_ddot,f".
void write_waveform_csv(std::ostream& os, const Trajectory& traj, double mass, int n_samples);
/// Reads the first two columns back into a tabulated trajectory.
Trajectory read_waveform_csv(std::istream& is);

} // namespace stai

#endif
