#include "stai/grid.hpp"

#include <cmath>

#include "stai/errors.hpp"
#include "stai/numerics.hpp"

namespace stai {

Grid::Grid(double x_min, double x_max, int n) : x_min_(x_min), x_max_(x_max), n_(n) {
    if (!(x_max > x_min)) throw ConfigError("grid extent must be positive");
    if (n < 64 || !is_pow2(n)) throw ConfigError("grid size must be a power of two >= 64");
    dx_ = (x_max_ - x_min_) / n_;
    dk_ = 2.0 * M_PI / (n_ * dx_);
    xs_.resize(n_);
    ks_.resize(n_);
    for (int i = 0; i < n_; ++i) {
        xs_[i] = x(i);
        ks_[i] = k(i);
    }
}

Grid build_grid(const Potential& pot, const Trajectory& traj, double state_width_hint,
                const PhysicalParams& params, const GridOverrides& over) {
    if (!(state_width_hint > 0.0)) throw ConfigError("state width hint must be > 0");

    double half = over.x_half_extent;
    if (half <= 0.0) {
        const double swept = traj.max_abs(0);
        const double tilt_offset = std::abs(pot.tilted_minimum(params.c));
        half = swept + tilt_offset + 8.0 * state_width_hint;
    }

    int n = over.n_points;
    if (n <= 0) {
        const double dx_target =
            pot.characteristic_length(params.mass, params.hbar) / 16.0 / over.oversample;
        n = next_pow2(static_cast<int>(std::ceil(2.0 * half / dx_target)));
    }
    n = std::max(n, 64);

    // The momentum window must hold the frame kick m*alpha_dot on top of the
    // state's own spread.
    const double kick = params.mass * traj.max_abs(1) / params.hbar;
    const double spread = 8.0 / state_width_hint;
    while (M_PI * n / (2.0 * half) < 2.0 * (kick + spread) && n <= over.n_ceiling) n *= 2;

    if (n > over.n_ceiling) {
        throw NumericsError("infeasible grid: required points exceed the configured ceiling");
    }
    return Grid(-half, half, n);
}

} // namespace stai
