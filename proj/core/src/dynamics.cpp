#include "stai/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "stai/errors.hpp"
#include "stai/numerics.hpp"
#include "stai/state_ops.hpp"

namespace stai {

namespace {

constexpr double kEdgeTol = 1e-10;
constexpr double kNormTol = 1e-10;
constexpr int kMonitorStride = 16;

class ShiftAliasError : public NumericsError {
public:
    using NumericsError::NumericsError;
};

void check_state(const Grid& grid, const ArmState& state, double t) {
    if (edge_amplitude(state.psi) > kEdgeTol) {
        throw ContainmentError("wavefunction reached the grid edge at t = " + std::to_string(t));
    }
    if (std::abs(norm(grid.dx(), state.psi) - 1.0) > kNormTol) {
        throw NumericsError("norm drifted beyond 1e-10 at t = " + std::to_string(t));
    }
}

// 5-point Gauss-Legendre nodes on [0, 1], ascending.
constexpr double kGl5X[5] = {0.046910077030668003601187, 0.230765344947158454481843, 0.5,
                             0.769234655052841545518157, 0.953089922969331996398813};
constexpr double kGl5W[5] = {0.118463442528094543757132, 0.239314335249683234020646,
                             0.284444444444444444444444, 0.239314335249683234020646,
                             0.118463442528094543757132};

} // namespace

double default_dt(const Potential& pot, const PhysicalParams& params, double t_f,
                  double dt_scale) {
    const double omega_eff = pot.curvature_frequency(params.mass);
    return dt_scale * std::min(0.02 / omega_eff, t_f / 2000.0);
}

Propagator::Propagator(const Grid& grid, const Drive& drive)
    : grid_(&grid),
      drive_(drive),
      sampler_(drive.pivot, drive.trajectory->t_f(), drive.trajectory),
      ws_(grid.n()),
      v_(grid.n()) {
    drive_.params.validate();
}

ArmState Propagator::propagate(ArmState state, double dt, int n_steps, PhaseLedger* ledger,
                               const SnapshotSink& sink) {
    if (!(dt > 0.0) || n_steps < 1) throw ConfigError("propagation needs dt > 0, n_steps >= 1");
    if (state.frame != Frame::kLab) throw ConfigError("propagate_lab expects a lab-frame state");
    if (static_cast<int>(state.psi.size()) != grid_->n()) {
        throw ConfigError("state does not match the grid");
    }
    const double t_f = drive_.trajectory->t_f();
    if (state.t + dt * n_steps > t_f * (1.0 + 1e-9)) {
        throw ConfigError("propagation window exceeds t_f");
    }
    if (dt != kinetic_dt_) {
        kinetic_ = kinetic_phase(*grid_, drive_.params, dt);
        kinetic_dt_ = dt;
    }

    check_state(*grid_, state, state.t);
    const Spin spin = state.spin;
    const double inv_hbar = 1.0 / drive_.params.hbar;
    const auto& xs = grid_->positions();

    ws_.load(state.psi);
    auto psi = ws_.data();

    for (int step = 0; step < n_steps; ++step) {
        const double t0 = state.t;
        const double t_mid = t0 + 0.5 * dt;
        const double alpha = drive_.trajectory->evaluate(std::min(t_mid, t_f), 0);
        const double f = drive_.compensation
                             ? drive_.params.mass * drive_.trajectory->evaluate(std::min(t_mid, t_f), 2)
                             : 0.0;
        const double x0 = sampler_(std::min(t_mid, t_f), spin);
        drive_.potential->eval_total(xs, drive_.params, x0, f, alpha, spin, v_);

        for (int i = 0; i < grid_->n(); ++i) {
            const double phase = -0.5 * v_[i] * dt * inv_hbar;
            psi[i] *= std::complex<double>(std::cos(phase), std::sin(phase));
        }
        ws_.forward();
        for (int i = 0; i < grid_->n(); ++i) psi[i] *= kinetic_[i];
        ws_.backward();
        for (int i = 0; i < grid_->n(); ++i) {
            const double phase = -0.5 * v_[i] * dt * inv_hbar;
            psi[i] *= std::complex<double>(std::cos(phase), std::sin(phase));
        }

        if (ledger != nullptr) {
            double dF = 0.0, dLambda = 0.0, dx0f = 0.0;
            for (int q = 0; q < 5; ++q) {
                const double tq = std::min(t0 + kGl5X[q] * dt, t_f);
                const double w = kGl5W[q] * dt;
                const double x0q = sampler_(tq, spin);
                const double fq = drive_.force(tq);
                const double s = spin_sign(spin);
                const double lam =
                    s * fq * x0q - s * drive_.params.c * drive_.trajectory->evaluate(tq, 0);
                const double ad = drive_.trajectory->evaluate(tq, 1);
                dF += w * (0.5 * drive_.params.mass * ad * ad + lam);
                dLambda += w * lam;
                dx0f += w * x0q * fq;
            }
            ledger->F(spin) += dF;
            ledger->Lambda(spin) += dLambda;
            ledger->x0f(spin) += dx0f;
        }

        state.t = t0 + dt;
        if ((step + 1) % kMonitorStride == 0) {
            ws_.store(state.psi);
            check_state(*grid_, state, state.t);
        }
        if (sink) {
            ws_.store(state.psi);
            sink(step + 1, state);
        }
    }

    ws_.store(state.psi);
    check_state(*grid_, state, state.t);
    return state;
}

void spectral_shift(const Grid& grid, FftWorkspace& ws, std::vector<std::complex<double>>& psi,
                    double shift) {
    if (shift == 0.0) return;
    // Amplitude in the strip that would wrap across the boundary.
    const int strip = std::min(grid.n(), static_cast<int>(std::ceil(std::abs(shift) / grid.dx())) + 1);
    double mass = 0.0;
    for (int j = 0; j < strip; ++j) {
        const int i = shift > 0.0 ? j : grid.n() - 1 - j;
        mass += std::norm(psi[i]);
    }
    if (std::sqrt(mass * grid.dx()) > kEdgeTol) {
        throw ShiftAliasError("spectral shift would wrap significant amplitude around the grid");
    }
    ws.load(psi);
    ws.forward();
    auto buf = ws.data();
    for (int i = 0; i < grid.n(); ++i) {
        const double phase = grid.k(i) * shift;
        buf[i] *= std::complex<double>(std::cos(phase), std::sin(phase));
    }
    ws.backward();
    ws.store(psi);
}

void to_moving_frame(const Grid& grid, FftWorkspace& ws, const PhysicalParams& params,
                     ArmState& state, double alpha, double alpha_dot) {
    if (state.frame != Frame::kLab) throw ConfigError("state is not in the lab frame");
    const double s = spin_sign(state.spin);
    const double kick = -s * params.mass * alpha_dot / params.hbar;
    for (int i = 0; i < grid.n(); ++i) {
        const double phase = kick * grid.x(i);
        state.psi[i] *= std::complex<double>(std::cos(phase), std::sin(phase));
    }
    spectral_shift(grid, ws, state.psi, s * alpha);
    state.frame = Frame::kMoving;
}

void to_lab_frame(const Grid& grid, FftWorkspace& ws, const PhysicalParams& params,
                  ArmState& state, double alpha, double alpha_dot) {
    if (state.frame != Frame::kMoving) throw ConfigError("state is not in the moving frame");
    const double s = spin_sign(state.spin);
    spectral_shift(grid, ws, state.psi, -s * alpha);
    const double kick = s * params.mass * alpha_dot / params.hbar;
    for (int i = 0; i < grid.n(); ++i) {
        const double phase = kick * grid.x(i);
        state.psi[i] *= std::complex<double>(std::cos(phase), std::sin(phase));
    }
    state.frame = Frame::kLab;
}

AnalyticArm analytic_arm(const Grid& grid, FftWorkspace& ws, const Drive& drive,
                         const ArmState& initial_moving, double t, const EigenSolution& basis) {
    if (initial_moving.frame != Frame::kMoving) {
        throw ConfigError("analytic_arm expects the initial state in the moving frame");
    }
    if (initial_moving.t != 0.0) throw ConfigError("analytic_arm starts from t = 0");
    const int n = grid.n();
    const Spin spin = initial_moving.spin;
    const auto& params = drive.params;

    AnalyticArm result;
    result.coefficients.reserve(basis.eigenfunctions.size());
    double captured = 0.0;
    for (const auto& phi : basis.eigenfunctions) {
        std::complex<double> c{0.0, 0.0};
        for (int i = 0; i < n; ++i) c += phi[i] * initial_moving.psi[i];
        c *= grid.dx();
        captured += std::norm(c);
        result.coefficients.push_back(c);
    }
    result.truncation_residual = std::abs(1.0 - captured);
    if (result.truncation_residual > 1e-8) {
        throw NumericsError("basis truncation residual " +
                            std::to_string(result.truncation_residual) + " exceeds 1e-8");
    }

    // Phi(t) = sum_n c_n exp(-i lambda_n t / hbar) phi_n.
    std::vector<std::complex<double>> phi_t(n, {0.0, 0.0});
    for (std::size_t m = 0; m < basis.eigenfunctions.size(); ++m) {
        const double phase = -basis.eigenvalues[m] * t / params.hbar;
        const std::complex<double> rot =
            result.coefficients[m] * std::complex<double>(std::cos(phase), std::sin(phase));
        const auto& phi = basis.eigenfunctions[m];
        for (int i = 0; i < n; ++i) phi_t[i] += rot * phi[i];
    }

    // Quadrature of the purely time-dependent terms for both spins.
    PivotSampler sampler(drive.pivot, drive.trajectory->t_f(), drive.trajectory);
    for (Spin sp : {Spin::kUp, Spin::kDown}) {
        const double s = spin_sign(sp);
        result.ledger.F(sp) = integrate_adaptive(
            [&](double u) { return drive.F_term(u, sampler(u, sp), sp); }, 0.0, t, 1e-12);
        result.ledger.Lambda(sp) = integrate_adaptive(
            [&](double u) {
                return s * drive.force(u) * sampler(u, sp) -
                       s * params.c * drive.trajectory->evaluate(u, 0);
            },
            0.0, t, 1e-12);
        result.ledger.x0f(sp) = integrate_adaptive(
            [&](double u) { return sampler(u, sp) * drive.force(u); }, 0.0, t, 1e-12);
    }

    const double f_phase = -result.ledger.F(spin) / params.hbar;
    const std::complex<double> global(std::cos(f_phase), std::sin(f_phase));
    for (auto& v : phi_t) v *= global;

    ArmState state;
    state.psi = std::move(phi_t);
    state.t = t;
    state.spin = spin;
    state.frame = Frame::kMoving;
    to_lab_frame(grid, ws, params, state, drive.trajectory->evaluate(t, 0),
                 drive.trajectory->evaluate(t, 1));
    result.state = std::move(state);
    return result;
}

} // namespace stai
