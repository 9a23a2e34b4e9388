#include "stai/potential.hpp"

#include <cmath>

#include "stai/errors.hpp"
#include "stai/numerics.hpp"

namespace stai {

Potential Potential::harmonic(double omega, double mass) {
    if (!(omega > 0.0) || !(mass > 0.0)) throw ConfigError("harmonic trap needs omega, mass > 0");
    Potential p;
    p.kind_ = Kind::kHarmonic;
    p.omega_ = omega;
    p.mass_ = mass;
    return p;
}

Potential Potential::lattice(double depth, double period) {
    if (!(depth > 0.0) || !(period > 0.0)) throw ConfigError("lattice needs depth, period > 0");
    Potential p;
    p.kind_ = Kind::kLattice;
    p.depth_ = depth;
    p.period_ = period;
    return p;
}

Potential Potential::tabulated(std::vector<double> x, std::vector<double> u) {
    Potential p;
    p.kind_ = Kind::kTabulated;
    p.table_ = std::make_shared<CubicSpline>(std::move(x), std::move(u), CubicSpline::Natural{});
    return p;
}

double Potential::value(double x) const {
    switch (kind_) {
        case Kind::kHarmonic:
            return 0.5 * mass_ * omega_ * omega_ * x * x;
        case Kind::kLattice: {
            const double s = std::sin(2.0 * M_PI * x / period_);
            return depth_ * s * s;
        }
        case Kind::kTabulated:
            return table_->eval(x);
    }
    return 0.0;
}

void Potential::eval_trap(std::span<const double> x, double alpha, Spin spin,
                          std::span<double> out) const {
    const double shift = spin_sign(spin) * alpha;
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = value(x[i] - shift);
}

void Potential::eval_total(std::span<const double> x, const PhysicalParams& params, double x0,
                           double f, double alpha, Spin spin, std::span<double> out) const {
    const double sign = spin_sign(spin);
    const double shift = sign * alpha;
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = value(x[i] - shift) - sign * (x[i] - x0) * f - params.c * x[i];
    }
}

void Potential::eval_tilted(std::span<const double> x, double c, std::span<double> out) const {
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = value(x[i]) - c * x[i];
}

double Potential::curvature_frequency(double mass) const {
    switch (kind_) {
        case Kind::kHarmonic:
            return omega_;
        case Kind::kLattice:
            // U'' at a well bottom = 2 U0 (2 pi / lambda)^2.
            return 2.0 * M_PI / period_ * std::sqrt(2.0 * depth_ / mass);
        case Kind::kTabulated: {
            const double x0 = tilted_minimum(0.0);
            const double curv = table_->eval(x0, 2);
            if (!(curv > 0.0)) throw ConfigError("tabulated potential has no binding minimum");
            return std::sqrt(curv / mass);
        }
    }
    return 0.0;
}

double Potential::tilted_minimum(double c) const {
    switch (kind_) {
        case Kind::kHarmonic:
            return c / (mass_ * omega_ * omega_);
        case Kind::kLattice: {
            // Central well only; the tilt moves the minimum within it.
            const double half = 0.25 * period_;
            auto [xm, fm] = golden_section_min(
                [&](double x) { return tilted_value(x, c); }, -half, half, 1e-13);
            (void)fm;
            return xm;
        }
        case Kind::kTabulated: {
            const int n = 2048;
            const double a = table_->x_min();
            const double b = table_->x_max();
            double best_x = a;
            double best = tilted_value(a, c);
            for (int i = 1; i <= n; ++i) {
                const double x = a + (b - a) * i / n;
                const double v = tilted_value(x, c);
                if (v < best) {
                    best = v;
                    best_x = x;
                }
            }
            const double h = (b - a) / n;
            auto [xm, fm] = golden_section_min([&](double x) { return tilted_value(x, c); },
                                               std::max(a, best_x - h),
                                               std::min(b, best_x + h), 1e-13);
            (void)fm;
            return xm;
        }
    }
    return 0.0;
}

double Potential::bottom_width(double mass, double hbar) const {
    return std::sqrt(hbar / (mass * curvature_frequency(mass)));
}

double Potential::characteristic_length(double mass, double hbar) const {
    const double w = bottom_width(mass, hbar);
    if (kind_ == Kind::kLattice) return std::min(w, period_);
    return w;
}

} // namespace stai
