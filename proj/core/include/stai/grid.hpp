#ifndef STAI_GRID_HPP
#define STAI_GRID_HPP

#include <vector>

#include "stai/potential.hpp"
#include "stai/trajectory.hpp"
#include "stai/units.hpp"

namespace stai {

/// Uniform periodic spatial mesh x_i = x_min + i*dx, i = 0..n-1, with the
/// matching FFT momentum mesh. n is a power of two and dx*dk*n = 2*pi.
class Grid {
public:
    Grid(double x_min, double x_max, int n);

    int n() const { return n_; }
    double x_min() const { return x_min_; }
    double x_max() const { return x_max_; }
    double dx() const { return dx_; }
    double dk() const { return dk_; }
    double x(int i) const { return x_min_ + dx_ * i; }
    /// FFT-ordered wavenumber of bin i (positive then negative branch).
    double k(int i) const { return dk_ * (i < n_ / 2 ? i : i - n_); }

    const std::vector<double>& positions() const { return xs_; }
    const std::vector<double>& wavenumbers() const { return ks_; }

private:
    double x_min_, x_max_, dx_, dk_;
    int n_;
    std::vector<double> xs_, ks_;
};

struct GridOverrides {
    int n_points = 0;        // 0 = automatic
    double x_half_extent = 0; // 0 = automatic
    double oversample = 1.0;
    int n_ceiling = 1 << 20;
};

/// Choose a symmetric grid covering the swept region plus eight state
/// widths, with dx resolving a sixteenth of the shortest trap length.
/// Throws NumericsError when that would exceed the point ceiling.
Grid build_grid(const Potential& pot, const Trajectory& traj, double state_width_hint,
                const PhysicalParams& params, const GridOverrides& over = {});

} // namespace stai

#endif
