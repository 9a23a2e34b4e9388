#ifndef STAI_EIGENSOLVER_HPP
#define STAI_EIGENSOLVER_HPP

#include <complex>
#include <iosfwd>
#include <span>
#include <vector>

#include "stai/fft.hpp"
#include "stai/grid.hpp"
#include "stai/units.hpp"

namespace stai {

/// Lowest eigenpairs of H = p^2/2m + U_tilted(x) on the grid.
/// Eigenfunctions are real, dx-orthonormal, sign-fixed at their largest
/// sample.
struct EigenSolution {
    std::vector<double> eigenvalues;
    std::vector<std::vector<double>> eigenfunctions;
    std::vector<double> residuals;
};

enum class EigenMethod {
    kAuto,    // dense for n <= 4096, else Lanczos
    kDense,   // Fourier-grid kinetic matrix, full diagonalization
    kLanczos, // Krylov on the FFT-applied operator
};

EigenSolution solve_stationary(const Grid& grid, std::span<const double> tilted_potential,
                               const PhysicalParams& params, int n_states,
                               EigenMethod method = EigenMethod::kAuto);

/// Split-operator kinetic factor exp(-i hbar k^2 dt / (2 m)) over the
/// FFT-ordered momentum mesh; every element has unit modulus.
std::vector<std::complex<double>> kinetic_phase(const Grid& grid, const PhysicalParams& params,
                                                double dt);

/// H psi with spectral kinetic energy and a diagonal potential.
void apply_hamiltonian(const Grid& grid, FftWorkspace& ws, std::span<const double> potential,
                       const PhysicalParams& params, std::span<const std::complex<double>> psi,
                       std::span<std::complex<double>> out);

/// Columns x, phi_0 .. phi_{n-1}.
void write_eigenfunctions_csv(std::ostream& os, const Grid& grid, const EigenSolution& sol);
/// JSON sidecar {"eigenvalues": [...], "residuals": [...]}.
void write_eigenvalues_json(std::ostream& os, const EigenSolution& sol);

} // namespace stai

#endif
