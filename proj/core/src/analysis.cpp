#include "stai/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "stai/errors.hpp"
#include "stai/numerics.hpp"
#include "stai/state_ops.hpp"

namespace stai {

RunResult readout(const Grid& grid, const ArmState& up, const ArmState& down) {
    if (up.psi.size() != down.psi.size() ||
        static_cast<int>(up.psi.size()) != grid.n()) {
        throw ConfigError("readout: arm states on different grids");
    }
    if (up.frame != Frame::kLab || down.frame != Frame::kLab) {
        throw ConfigError("readout: arm states must be in the lab frame");
    }
    if (std::abs(up.t - down.t) > 1e-9 * std::max(1.0, std::abs(up.t))) {
        throw ConfigError("readout: arm states at different times");
    }
    RunResult r;
    r.overlap = inner_product(grid.dx(), down.psi, up.psi);
    r.delta_phi = std::arg(r.overlap);
    r.delta_phi_unwrapped = r.delta_phi;
    r.visibility = std::abs(r.overlap);
    r.P_up = 0.5 + 0.5 * std::real(r.overlap);
    r.P_down = 1.0 - r.P_up;
    r.grid_points = grid.n();
    r.final_edge_amplitude = std::max(edge_amplitude(up.psi), edge_amplitude(down.psi));
    return r;
}

double predict_phase(double c, const Trajectory& traj, double hbar, const Pivot& pivot,
                     bool compensation, double mass) {
    const double area_phase = 2.0 * c * traj.integral() / hbar;
    if (!compensation) return area_phase; // f == 0, no pivot term at all
    switch (pivot.kind) {
        case Pivot::Kind::kConstant:
        case Pivot::Kind::kLinearDrift:
            // integral(x0 f) vanishes: f integrates to zero and the linear
            // part integrates to m*b*[t*alpha_dot - alpha] = 0 at both ends.
            return area_phase;
        case Pivot::Kind::kSpinLocked:
            // Equal phase on both arms cancels in the differential.
            return area_phase;
        case Pivot::Kind::kNoisy: {
            PivotSampler sampler(pivot, traj.t_f(), &traj);
            // The realized path is piecewise linear; integrate x0*f per step
            // of a mesh finer than any feature of alpha_ddot.
            const int n = 1 << 14;
            const double dt = traj.t_f() / n;
            double acc = 0.0;
            for (int i = 0; i < n; ++i) {
                acc += gauss_legendre5(
                    [&](double u) {
                        return sampler(u, Spin::kUp) * mass * traj.evaluate(u, 2);
                    },
                    i * dt, (i + 1) * dt);
            }
            return area_phase - 2.0 * acc / hbar;
        }
    }
    return area_phase;
}

EstimationResult estimate_force_arccos(double S, double P_up, int branch) {
    if (P_up < -1e-12 || P_up > 1.0 + 1e-12) throw ConfigError("population outside [0, 1]");
    const double cosv = std::clamp(2.0 * P_up - 1.0, -1.0, 1.0);
    const double base = std::acos(cosv); // in [0, pi]
    // Branch b covers phase = 2*pi*ceil(b/2) +- base with alternating sign.
    const int k = (branch + 1) / 2;
    const double sign = (branch % 2 == 0) ? 1.0 : -1.0;
    const double phase = 2.0 * M_PI * k + sign * base;
    EstimationResult r;
    r.method = EstimationResult::Method::kArccosBranch;
    r.branch = branch;
    r.c_hat = (phase == 0.0) ? 0.0 : phase / S;
    r.residual = 0.0;
    return r;
}

namespace {

double scan_misfit(std::span<const std::pair<double, double>> data, double c) {
    double acc = 0.0;
    for (const auto& [S, P] : data) {
        const double model = 0.5 + 0.5 * std::cos(c * S);
        acc += (P - model) * (P - model);
    }
    return acc;
}

} // namespace

EstimationResult estimate_force_scan(std::span<const std::pair<double, double>> populations,
                                     double c_lo, double c_hi) {
    if (populations.size() < 3) throw ConfigError("periodicity scan needs >= 3 samples");
    if (!(c_hi > c_lo)) throw ConfigError("empty scan range");
    const double S0 = populations.front().first;
    bool distinct = false;
    for (const auto& [S, P] : populations) {
        if (S != S0) distinct = true;
    }
    if (!distinct) throw ConfigError("degenerate data: all sensitivities equal");

    constexpr int kCoarse = 512;
    std::vector<double> misfit(kCoarse + 1);
    for (int i = 0; i <= kCoarse; ++i) {
        misfit[i] = scan_misfit(populations, c_lo + (c_hi - c_lo) * i / kCoarse);
    }

    // Local minima of the coarse landscape, refined by golden section.
    struct Minimum {
        double c, value;
    };
    std::vector<Minimum> minima;
    auto refine = [&](int i) {
        const double a = c_lo + (c_hi - c_lo) * std::max(i - 1, 0) / kCoarse;
        const double b = c_lo + (c_hi - c_lo) * std::min(i + 1, kCoarse) / kCoarse;
        auto [cm, fm] = golden_section_min([&](double c) { return scan_misfit(populations, c); },
                                           a, b, 1e-10);
        minima.push_back({cm, fm});
    };
    for (int i = 1; i < kCoarse; ++i) {
        if (misfit[i] <= misfit[i - 1] && misfit[i] <= misfit[i + 1]) refine(i);
    }
    if (misfit[0] < misfit[1]) refine(0);
    if (misfit[kCoarse] < misfit[kCoarse - 1]) refine(kCoarse);
    std::sort(minima.begin(), minima.end(),
              [](const Minimum& a, const Minimum& b) { return a.value < b.value; });

    EstimationResult r;
    r.method = EstimationResult::Method::kPeriodicityScan;
    r.c_hat = minima.front().c;
    r.residual = minima.front().value;
    if (minima.size() > 1) {
        const double runner_up = minima[1].value;
        const double sep = std::abs(minima[1].c - minima.front().c);
        if (runner_up < 2.0 * std::max(r.residual, 1e-30) &&
            sep > 1e-6 * (c_hi - c_lo)) {
            r.ambiguous = true;
        }
    }
    return r;
}

double add_shot_noise(double p, int n_shots, std::uint64_t seed) {
    if (n_shots < 1) throw ConfigError("N_shots must be >= 1");
    std::mt19937_64 rng(seed);
    std::binomial_distribution<int> binom(n_shots, std::clamp(p, 0.0, 1.0));
    return static_cast<double>(binom(rng)) / n_shots;
}

double bootstrap_sigma(std::span<const std::pair<double, double>> populations, int n_shots,
                       double c_lo, double c_hi, int n_resamples, std::uint64_t seed) {
    if (n_resamples < 2) throw ConfigError("need >= 2 bootstrap resamples");
    std::vector<double> estimates;
    estimates.reserve(n_resamples);
    std::vector<std::pair<double, double>> resampled(populations.begin(), populations.end());
    for (int b = 0; b < n_resamples; ++b) {
        for (std::size_t i = 0; i < resampled.size(); ++i) {
            resampled[i].second = add_shot_noise(populations[i].second, n_shots,
                                                 mix_seed(seed, b * resampled.size() + i));
        }
        estimates.push_back(estimate_force_scan(resampled, c_lo, c_hi).c_hat);
    }
    double mean = 0.0;
    for (double e : estimates) mean += e;
    mean /= estimates.size();
    double var = 0.0;
    for (double e : estimates) var += (e - mean) * (e - mean);
    var /= (estimates.size() - 1);
    return std::sqrt(var);
}

std::vector<double> unwrap_sweep(std::span<const double> S, std::span<const double> phi,
                                 double c_max) {
    if (S.size() != phi.size()) throw ConfigError("unwrap: size mismatch");
    std::vector<double> out(phi.begin(), phi.end());
    for (std::size_t i = 1; i < out.size(); ++i) {
        // The true increment is bounded by c_max * |dS|; anchor each point
        // to the 2*pi image nearest the extrapolated previous value.
        const double slope_anchor = out[i - 1] + c_max * (S[i] - S[i - 1]) * 0.5;
        out[i] = unwrap_near(out[i], slope_anchor);
    }
    return out;
}

} // namespace stai
