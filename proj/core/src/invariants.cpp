#include "stai/invariants.hpp"

#include <cmath>

#include "stai/errors.hpp"
#include "stai/numerics.hpp"
#include "stai/state_ops.hpp"

namespace stai {

std::vector<std::complex<double>> apply_invariant(const Grid& grid, FftWorkspace& ws,
                                                  const InvariantOperator& op,
                                                  std::span<const std::complex<double>> psi) {
    if (static_cast<int>(psi.size()) != grid.n()) throw ConfigError("grid mismatch");
    const int n = grid.n();
    const double s = spin_sign(op.spin);
    const double m = op.params.mass;
    const double hbar = op.params.hbar;

    ws.load(psi);
    ws.forward();
    auto buf = ws.data();
    for (int i = 0; i < n; ++i) {
        const double shifted = hbar * grid.k(i) - s * m * op.alpha_dot;
        buf[i] *= shifted * shifted / (2.0 * m);
    }
    ws.backward();

    std::vector<std::complex<double>> out(n);
    for (int i = 0; i < n; ++i) {
        const double y = grid.x(i) - s * op.alpha;
        out[i] = buf[i] + op.potential->tilted_value(y, op.params.c) * psi[i];
    }
    return out;
}

double invariant_expectation(const Grid& grid, FftWorkspace& ws, const InvariantOperator& op,
                             std::span<const std::complex<double>> psi) {
    const auto ipsi = apply_invariant(grid, ws, op, psi);
    return std::real(inner_product(grid.dx(), psi, ipsi));
}

DriftReport verify_invariance(const Grid& grid, const Drive& drive,
                              std::span<const ArmState> history) {
    if (history.empty()) throw ConfigError("empty state history");
    FftWorkspace ws(grid.n());
    DriftReport report;
    for (const auto& state : history) {
        InvariantOperator op;
        op.spin = state.spin;
        op.alpha = drive.trajectory->evaluate(state.t, 0);
        op.alpha_dot = drive.trajectory->evaluate(state.t, 1);
        op.potential = drive.potential;
        op.params = drive.params;
        const double e = invariant_expectation(grid, ws, op, state.psi);
        report.times.push_back(state.t);
        report.expectations.push_back(e);
    }
    report.reference = report.expectations.front();
    const double denom = std::max(std::abs(report.reference), 1e-300);
    for (double e : report.expectations) {
        report.max_relative_drift =
            std::max(report.max_relative_drift, std::abs(e - report.reference) / denom);
    }
    return report;
}

std::vector<std::complex<double>> dynamical_mode(const Grid& grid, FftWorkspace& ws, int n,
                                                 Spin spin, double t, const EigenSolution& basis,
                                                 const Trajectory& traj,
                                                 const PhysicalParams& params) {
    if (n < 0 || n >= static_cast<int>(basis.eigenfunctions.size())) {
        throw ConfigError("mode index out of range");
    }
    const double s = spin_sign(spin);
    const double alpha = traj.evaluate(t, 0);
    const double alpha_dot = traj.evaluate(t, 1);

    std::vector<std::complex<double>> psi(grid.n());
    for (int i = 0; i < grid.n(); ++i) psi[i] = basis.eigenfunctions[n][i];
    spectral_shift(grid, ws, psi, -s * alpha); // phi_n(x - s*alpha)
    const double kick = s * params.mass * alpha_dot / params.hbar;
    for (int i = 0; i < grid.n(); ++i) {
        const double phase = kick * grid.x(i);
        psi[i] *= std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return psi;
}

double lr_phase(int n, Spin spin, const Drive& drive, double t, const EigenSolution& basis) {
    if (n < 0 || n >= static_cast<int>(basis.eigenvalues.size())) {
        throw ConfigError("mode index out of range");
    }
    PivotSampler sampler(drive.pivot, drive.trajectory->t_f(), drive.trajectory);
    const double f_integral = integrate_adaptive(
        [&](double u) { return drive.F_term(u, sampler(u, spin), spin); }, 0.0, t, 1e-12);
    return -(basis.eigenvalues[n] * t + f_integral) / drive.params.hbar;
}

double lr_phase_rate(int n, Spin spin, const Drive& drive, double t, const EigenSolution& basis,
                     const Grid& grid, FftWorkspace& ws) {
    const double s = spin_sign(spin);
    const auto& params = drive.params;
    const double alpha = drive.trajectory->evaluate(t, 0);
    const double alpha_dot = drive.trajectory->evaluate(t, 1);
    const double alpha_ddot = drive.trajectory->evaluate(t, 2);
    const int ngrid = grid.n();

    const auto psi_n = dynamical_mode(grid, ws, n, spin, t, basis, *drive.trajectory, params);

    // d(psi_n)/dt analytically: the kick factor brings down
    // i s m alpha_ddot x / hbar, the shifted argument brings -s alpha_dot
    // times the shifted derivative phi_n'.
    std::vector<std::complex<double>> dphi(ngrid);
    for (int i = 0; i < ngrid; ++i) dphi[i] = basis.eigenfunctions[n][i];
    ws.load(dphi);
    ws.forward();
    auto buf = ws.data();
    for (int i = 0; i < ngrid; ++i) buf[i] *= std::complex<double>(0.0, grid.k(i));
    ws.backward();
    ws.store(dphi);
    spectral_shift(grid, ws, dphi, -s * alpha);
    const double kick = s * params.mass * alpha_dot / params.hbar;
    for (int i = 0; i < ngrid; ++i) {
        const double phase = kick * grid.x(i);
        dphi[i] *= std::complex<double>(std::cos(phase), std::sin(phase));
    }

    // i hbar d(psi_n)/dt
    std::vector<std::complex<double>> ihdt(ngrid);
    for (int i = 0; i < ngrid; ++i) {
        ihdt[i] = -s * params.mass * alpha_ddot * grid.x(i) * psi_n[i] -
                  std::complex<double>(0.0, s * params.hbar * alpha_dot) * dphi[i];
    }

    PivotSampler sampler(drive.pivot, drive.trajectory->t_f(), drive.trajectory);
    const double x0 = sampler(t, spin);
    const double f = drive.force(t);
    std::vector<double> v(ngrid);
    drive.potential->eval_total(grid.positions(), params, x0, f, alpha, spin, v);
    std::vector<std::complex<double>> hpsi(ngrid);
    apply_hamiltonian(grid, ws, v, params, psi_n, hpsi);

    std::complex<double> elem{0.0, 0.0};
    for (int i = 0; i < ngrid; ++i) elem += std::conj(psi_n[i]) * (ihdt[i] - hpsi[i]);
    elem *= grid.dx();
    return std::real(elem) / params.hbar;
}

double lr_phase_defining(int n, Spin spin, const Drive& drive, double t,
                         const EigenSolution& basis, const Grid& grid) {
    FftWorkspace ws(grid.n());
    return integrate_adaptive(
        [&](double u) { return lr_phase_rate(n, spin, drive, u, basis, grid, ws); }, 0.0, t,
        1e-9);
}

} // namespace stai
