#include "stai/pivot.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "stai/errors.hpp"
#include "stai/numerics.hpp"

namespace stai {

Pivot Pivot::constant(double x0) {
    Pivot p;
    p.kind = Kind::kConstant;
    p.x0 = x0;
    return p;
}

Pivot Pivot::linear_drift(double a, double b) {
    Pivot p;
    p.kind = Kind::kLinearDrift;
    p.drift_a = a;
    p.drift_b = b;
    return p;
}

Pivot Pivot::noisy(double x0_mean, double sigma, double tau, std::uint64_t seed) {
    if (!(sigma >= 0.0)) throw ConfigError("noisy pivot sigma must be >= 0");
    if (!(tau > 0.0)) throw ConfigError("noisy pivot correlation time must be > 0");
    Pivot p;
    p.kind = Kind::kNoisy;
    p.x0_mean = x0_mean;
    p.sigma = sigma;
    p.tau = tau;
    p.seed = seed;
    return p;
}

Pivot Pivot::spin_locked() {
    Pivot p;
    p.kind = Kind::kSpinLocked;
    return p;
}

PivotSampler::PivotSampler(const Pivot& pivot, double t_f, const Trajectory* trajectory)
    : pivot_(pivot), t_f_(t_f), trajectory_(trajectory) {
    if (pivot_.kind == Pivot::Kind::kSpinLocked && trajectory_ == nullptr) {
        throw ConfigError("spin-locked pivot needs the trajectory");
    }
    if (pivot_.kind != Pivot::Kind::kNoisy) return;

    // Exact OU updates on a master grid fine enough to resolve tau; queries
    // interpolate linearly between nodes.
    const int n = std::clamp(next_pow2(static_cast<int>(std::ceil(64.0 * t_f / pivot_.tau))),
                             1024, 1 << 17);
    path_.resize(n + 1);
    master_dt_ = t_f / n;
    std::mt19937_64 rng(pivot_.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double decay = std::exp(-master_dt_ / pivot_.tau);
    const double kick = pivot_.sigma * std::sqrt(1.0 - decay * decay);
    double x = pivot_.x0_mean + pivot_.sigma * gauss(rng); // stationary start
    path_[0] = x;
    for (int i = 1; i <= n; ++i) {
        x = pivot_.x0_mean + (x - pivot_.x0_mean) * decay + kick * gauss(rng);
        path_[i] = x;
    }
}

double PivotSampler::operator()(double t, Spin spin) const {
    switch (pivot_.kind) {
        case Pivot::Kind::kConstant:
            return pivot_.x0;
        case Pivot::Kind::kLinearDrift:
            return pivot_.drift_a + pivot_.drift_b * t;
        case Pivot::Kind::kSpinLocked:
            return spin_sign(spin) * trajectory_->evaluate(t, 0);
        case Pivot::Kind::kNoisy: {
            const double u = std::clamp(t / master_dt_, 0.0, double(path_.size() - 1));
            const std::size_t i = std::min(static_cast<std::size_t>(u), path_.size() - 2);
            const double w = u - static_cast<double>(i);
            return path_[i] * (1.0 - w) + path_[i + 1] * w;
        }
    }
    return 0.0;
}

double PivotSampler::time_average() const {
    if (pivot_.kind != Pivot::Kind::kNoisy) {
        return integrate_adaptive([&](double t) { return (*this)(t, Spin::kUp); }, 0.0, t_f_,
                                  1e-12) / t_f_;
    }
    double acc = 0.0; // trapezoid on the master grid
    for (std::size_t i = 0; i + 1 < path_.size(); ++i) acc += 0.5 * (path_[i] + path_[i + 1]);
    return acc * master_dt_ / t_f_;
}

} // namespace stai
