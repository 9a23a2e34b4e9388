#ifndef STAI_POTENTIAL_HPP
#define STAI_POTENTIAL_HPP

#include <memory>
#include <span>
#include <vector>

#include "stai/cubic_spline.hpp"
#include "stai/units.hpp"

namespace stai {

enum class Spin { kUp, kDown };

inline constexpr double spin_sign(Spin s) { return s == Spin::kUp ? 1.0 : -1.0; }
inline constexpr Spin other(Spin s) { return s == Spin::kUp ? Spin::kDown : Spin::kUp; }

/// Trap potential U(x). Harmonic U = m w^2 x^2 / 2, optical lattice
/// U = U0 sin^2(2 pi x / lambda) with the displacement carried inside the
/// argument as a length, or a tabulated shape interpolated by a spline.
class Potential {
public:
    enum class Kind { kHarmonic, kLattice, kTabulated };

    static Potential harmonic(double omega, double mass = 1.0);
    static Potential lattice(double depth, double period);
    static Potential tabulated(std::vector<double> x, std::vector<double> u);

    Kind kind() const { return kind_; }
    double omega() const { return omega_; }
    double depth() const { return depth_; }
    double period() const { return period_; }

    /// U at a single point. Throws outside a tabulated domain.
    double value(double x) const;

    /// U(x - sign * alpha) elementwise: the trap displaced along its arm.
    void eval_trap(std::span<const double> x, double alpha, Spin spin,
                   std::span<double> out) const;

    /// Full potential part of the arm Hamiltonian:
    /// U(x - sign*alpha) - sign*(x - x0)*f - c*x.
    void eval_total(std::span<const double> x, const PhysicalParams& params, double x0,
                    double f, double alpha, Spin spin, std::span<double> out) const;

    /// Tilted trap U(x) - c*x, the static potential of the moving frame.
    void eval_tilted(std::span<const double> x, double c, std::span<double> out) const;

    double tilted_value(double x, double c) const { return value(x) - c * x; }

    /// Curvature frequency sqrt(U''(x_min)/m) at the untilted trap bottom.
    double curvature_frequency(double mass) const;

    /// Location of the minimum of U(x) - c*x near the origin.
    double tilted_minimum(double c) const;

    /// Ground-state width of the harmonic approximation at the bottom.
    double bottom_width(double mass, double hbar) const;

    /// Shortest length the grid has to resolve.
    double characteristic_length(double mass, double hbar) const;

private:
    Potential() = default;

    Kind kind_ = Kind::kHarmonic;
    double omega_ = 1.0;
    double mass_ = 1.0;   // harmonic only
    double depth_ = 0.0;  // lattice only
    double period_ = 1.0; // lattice only
    std::shared_ptr<const CubicSpline> table_;
};

} // namespace stai

#endif
