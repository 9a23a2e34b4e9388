#include "stai/eigensolver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include "json.hpp"
#include "stai/errors.hpp"
#include "stai/state_ops.hpp"

namespace stai {

namespace {

void fix_sign(std::vector<double>& phi) {
    std::size_t imax = 0;
    for (std::size_t i = 1; i < phi.size(); ++i) {
        if (std::abs(phi[i]) > std::abs(phi[imax])) imax = i;
    }
    if (phi[imax] < 0.0) {
        for (auto& v : phi) v = -v;
    }
}

double residual_of(const Grid& grid, FftWorkspace& ws, std::span<const double> pot,
                   const PhysicalParams& params, const std::vector<double>& phi, double lambda,
                   double energy_scale) {
    const int n = grid.n();
    std::vector<std::complex<double>> psi(n), hpsi(n);
    for (int i = 0; i < n; ++i) psi[i] = phi[i];
    apply_hamiltonian(grid, ws, pot, params, psi, hpsi);
    double num = 0.0;
    for (int i = 0; i < n; ++i) num += std::norm(hpsi[i] - lambda * psi[i]);
    num = std::sqrt(num * grid.dx());
    const double den = std::max(std::abs(lambda), 1e-3 * energy_scale);
    return num / den;
}

/// First row of the periodic Fourier-grid kinetic matrix,
/// t_d = (1/n) sum_m (hbar^2 k_m^2 / 2m) cos(2 pi m d / n).
std::vector<double> kinetic_row(const Grid& grid, const PhysicalParams& params) {
    const int n = grid.n();
    FftWorkspace ws(n);
    auto buf = ws.data();
    const double pref = params.hbar * params.hbar / (2.0 * params.mass);
    for (int i = 0; i < n; ++i) buf[i] = pref * grid.k(i) * grid.k(i);
    ws.backward(); // 1/n-normalized inverse transform gives the row
    std::vector<double> row(n);
    for (int i = 0; i < n; ++i) row[i] = buf[i].real();
    return row;
}

EigenSolution solve_dense(const Grid& grid, std::span<const double> pot,
                          const PhysicalParams& params, int n_states) {
    const int n = grid.n();
    const std::vector<double> row = kinetic_row(grid, params);
    Eigen::MatrixXd h(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            int d = i - j;
            if (d < 0) d += n;
            h(i, j) = row[d];
        }
        h(i, i) += pot[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
    if (solver.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed");

    EigenSolution sol;
    const double inv_sqrt_dx = 1.0 / std::sqrt(grid.dx());
    for (int s = 0; s < n_states; ++s) {
        sol.eigenvalues.push_back(solver.eigenvalues()(s));
        std::vector<double> phi(n);
        for (int i = 0; i < n; ++i) phi[i] = solver.eigenvectors()(i, s) * inv_sqrt_dx;
        fix_sign(phi);
        sol.eigenfunctions.push_back(std::move(phi));
    }
    return sol;
}

EigenSolution solve_lanczos(const Grid& grid, std::span<const double> pot,
                            const PhysicalParams& params, int n_states) {
    const int n = grid.n();
    FftWorkspace ws(n);
    using CVec = std::vector<std::complex<double>>;
    auto apply = [&](const CVec& v, CVec& out) {
        apply_hamiltonian(grid, ws, pot, params, v, out);
    };

    const int max_iter = std::min(n, std::max(40 * n_states + 200, 400));
    std::vector<CVec> basis;
    basis.reserve(max_iter + 1);

    std::mt19937_64 rng(0x5f3759df9e3779b9ULL);
    std::normal_distribution<double> gauss(0.0, 1.0);
    CVec v(n);
    for (auto& z : v) z = {gauss(rng), 0.0};
    normalize(grid.dx(), v);
    basis.push_back(v);

    std::vector<double> a, b; // tridiagonal diagonal / subdiagonal
    CVec w(n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz;

    auto lowest_converged = [&](int m) -> bool {
        Eigen::VectorXd diag(m), sub(std::max(m - 1, 0));
        for (int i = 0; i < m; ++i) diag(i) = a[i];
        for (int i = 0; i + 1 < m; ++i) sub(i) = b[i + 1];
        ritz.computeFromTridiagonal(diag, sub);
        if (ritz.info() != Eigen::Success || m < n_states) return false;
        const double beta = (static_cast<int>(b.size()) > m) ? b[m] : 0.0;
        for (int s = 0; s < n_states; ++s) {
            const double est = std::abs(beta * ritz.eigenvectors()(m - 1, s));
            if (est > 1e-9 * std::max(1.0, std::abs(ritz.eigenvalues()(s)))) return false;
        }
        return true;
    };

    int m = 0;
    b.push_back(0.0);
    while (m < max_iter) {
        apply(basis[m], w);
        if (m > 0) {
            for (int i = 0; i < n; ++i) w[i] -= b[m] * basis[m - 1][i];
        }
        const double alpha = std::real(inner_product(grid.dx(), basis[m], w));
        a.push_back(alpha);
        for (int i = 0; i < n; ++i) w[i] -= alpha * basis[m][i];
        // Full reorthogonalization, twice.
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& q : basis) {
                const auto c = inner_product(grid.dx(), q, w);
                for (int i = 0; i < n; ++i) w[i] -= c * q[i];
            }
        }
        const double beta = norm(grid.dx(), w);
        b.push_back(beta);
        ++m;
        if (beta < 1e-13) break;
        if (m % 20 == 0 && lowest_converged(m)) break;
        CVec next(n);
        for (int i = 0; i < n; ++i) next[i] = w[i] / beta;
        basis.push_back(std::move(next));
    }

    if (!lowest_converged(m)) {
        double worst = 0.0;
        const double beta = (static_cast<int>(b.size()) > m) ? b[m] : 0.0;
        if (ritz.info() == Eigen::Success && ritz.eigenvalues().size() >= n_states) {
            for (int s = 0; s < n_states; ++s) {
                worst = std::max(worst, std::abs(beta * ritz.eigenvectors()(m - 1, s)));
            }
        }
        throw ConvergenceError("Lanczos eigensolver did not converge; worst residual estimate " +
                               std::to_string(worst));
    }

    EigenSolution sol;
    for (int s = 0; s < n_states; ++s) {
        sol.eigenvalues.push_back(ritz.eigenvalues()(s));
        std::vector<double> phi(n, 0.0);
        for (int j = 0; j < m; ++j) {
            const double y = ritz.eigenvectors()(j, s);
            for (int i = 0; i < n; ++i) phi[i] += y * basis[j][i].real();
        }
        double nrm = 0.0;
        for (double v2 : phi) nrm += v2 * v2;
        nrm = std::sqrt(nrm * grid.dx());
        for (auto& v2 : phi) v2 /= nrm;
        fix_sign(phi);
        sol.eigenfunctions.push_back(std::move(phi));
    }
    return sol;
}

} // namespace

EigenSolution solve_stationary(const Grid& grid, std::span<const double> tilted_potential,
                               const PhysicalParams& params, int n_states, EigenMethod method) {
    if (n_states < 1 || n_states > grid.n() / 4) {
        throw ConfigError("n_states must satisfy 1 <= n_states << n_points");
    }
    if (static_cast<int>(tilted_potential.size()) != grid.n()) {
        throw ConfigError("potential array does not match the grid");
    }
    if (method == EigenMethod::kAuto) {
        method = grid.n() <= 4096 ? EigenMethod::kDense : EigenMethod::kLanczos;
    }
    EigenSolution sol = (method == EigenMethod::kDense)
                            ? solve_dense(grid, tilted_potential, params, n_states)
                            : solve_lanczos(grid, tilted_potential, params, n_states);

    // Residuals through the spectral operator, an independent route from
    // the dense matrix.
    FftWorkspace ws(grid.n());
    double scale = 0.0;
    for (double l : sol.eigenvalues) scale = std::max(scale, std::abs(l));
    if (scale == 0.0) scale = 1.0;
    for (std::size_t s = 0; s < sol.eigenfunctions.size(); ++s) {
        const double r = residual_of(grid, ws, tilted_potential, params, sol.eigenfunctions[s],
                                     sol.eigenvalues[s], scale);
        sol.residuals.push_back(r);
        if (r > 1e-8) {
            throw ConvergenceError("eigenpair " + std::to_string(s) + " residual " +
                                   std::to_string(r) + " exceeds 1e-8");
        }
    }
    return sol;
}

std::vector<std::complex<double>> kinetic_phase(const Grid& grid, const PhysicalParams& params,
                                                double dt) {
    if (!(dt > 0.0)) throw ConfigError("dt must be positive");
    std::vector<std::complex<double>> factor(grid.n());
    const double pref = params.hbar * dt / (2.0 * params.mass);
    for (int i = 0; i < grid.n(); ++i) {
        const double phase = -pref * grid.k(i) * grid.k(i);
        factor[i] = {std::cos(phase), std::sin(phase)};
    }
    return factor;
}

void apply_hamiltonian(const Grid& grid, FftWorkspace& ws, std::span<const double> potential,
                       const PhysicalParams& params, std::span<const std::complex<double>> psi,
                       std::span<std::complex<double>> out) {
    const int n = grid.n();
    ws.load(psi);
    ws.forward();
    auto buf = ws.data();
    const double pref = params.hbar * params.hbar / (2.0 * params.mass);
    for (int i = 0; i < n; ++i) buf[i] *= pref * grid.k(i) * grid.k(i);
    ws.backward();
    for (int i = 0; i < n; ++i) out[i] = buf[i] + potential[i] * psi[i];
}

void write_eigenfunctions_csv(std::ostream& os, const Grid& grid, const EigenSolution& sol) {
    os << "x";
    for (std::size_t s = 0; s < sol.eigenfunctions.size(); ++s) os << ",phi_" << s;
    os << '\n';
    os.precision(17);
    for (int i = 0; i < grid.n(); ++i) {
        os << grid.x(i);
        for (const auto& phi : sol.eigenfunctions) os << ',' << phi[i];
        os << '\n';
    }
}

void write_eigenvalues_json(std::ostream& os, const EigenSolution& sol) {
    nlohmann::json j;
    j["eigenvalues"] = sol.eigenvalues;
    j["residuals"] = sol.residuals;
    os << j.dump(2) << '\n';
}

} // namespace stai
