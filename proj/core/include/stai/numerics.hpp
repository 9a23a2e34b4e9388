#ifndef STAI_NUMERICS_HPP
#define STAI_NUMERICS_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace stai {

/// Adaptive Gauss-Kronrod quadrature of f over [a, b].
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol = 1e-12);

/// Fixed 5-point Gauss-Legendre rule on [a, b]; exact for degree <= 9.
/// Nodes are visited in ascending order, so f may be a causal sampler.
double gauss_legendre5(const std::function<double(double)>& f, double a, double b);

/// Golden-section minimization of a unimodal f on [a, b] to the given
/// relative interval width. Returns (x_min, f(x_min)).
std::pair<double, double> golden_section_min(const std::function<double(double)>& f, double a,
                                             double b, double rel_tol = 1e-10,
                                             int max_iter = 200);

/// Least-squares straight line y = slope*x + intercept.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

inline int next_pow2(int n) {
    int p = 1;
    while (p < n) p <<= 1;
    return p;
}

inline bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

/// Shift phi by a multiple of 2*pi so it lands nearest to reference.
inline double unwrap_near(double phi, double reference) {
    constexpr double two_pi = 6.283185307179586476925286766559;
    return phi + two_pi * std::round((reference - phi) / two_pi);
}

/// SplitMix64; used to derive independent child seeds from a base seed.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace stai

#endif
