#ifndef STAI_PIVOT_HPP
#define STAI_PIVOT_HPP

#include <cstdint>
#include <memory>
#include <vector>

#include "stai/potential.hpp"
#include "stai/trajectory.hpp"

namespace stai {

/// Pivot point x0(t) about which the two compensating linear potentials
/// rock. The differential phase is independent of its constant value.
struct Pivot {
    enum class Kind { kConstant, kLinearDrift, kNoisy, kSpinLocked };

    Kind kind = Kind::kConstant;
    double x0 = 0.0;      // constant
    double drift_a = 0.0; // x0(t) = a + b t
    double drift_b = 0.0;
    double x0_mean = 0.0; // noisy: OU mean,
    double sigma = 0.0;   //   stationary std,
    double tau = 0.0;     //   correlation time
    std::uint64_t seed = 0;

    static Pivot constant(double x0);
    static Pivot linear_drift(double a, double b);
    static Pivot noisy(double x0_mean, double sigma, double tau, std::uint64_t seed);
    static Pivot spin_locked();
};

/// Realized pivot function for one run. Deterministic given the pivot spec
/// (and seed): a noisy pivot draws its whole Ornstein-Uhlenbeck path on a
/// fixed master grid up front, so any later query — at any step size — sees
/// one and the same realization. Const-callable from multiple threads.
class PivotSampler {
public:
    /// trajectory may be null unless kind == kSpinLocked.
    PivotSampler(const Pivot& pivot, double t_f, const Trajectory* trajectory);

    double operator()(double t, Spin spin) const;

    /// Time average of the realized path over [0, t_f] (diagnostics).
    double time_average() const;

private:
    Pivot pivot_;
    double t_f_;
    const Trajectory* trajectory_;
    std::vector<double> path_; // OU samples on the master grid
    double master_dt_ = 0.0;
};

} // namespace stai

#endif
