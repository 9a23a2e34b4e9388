#ifndef STAI_STATE_OPS_HPP
#define STAI_STATE_OPS_HPP

#include <cmath>
#include <complex>
#include <span>

#include "stai/grid.hpp"

namespace stai {

/// dx-weighted inner product <a|b> on a uniform grid.
inline std::complex<double> inner_product(double dx, std::span<const std::complex<double>> a,
                                          std::span<const std::complex<double>> b) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
    return acc * dx;
}

inline double norm(double dx, std::span<const std::complex<double>> a) {
    double acc = 0.0;
    for (const auto& v : a) acc += std::norm(v);
    return std::sqrt(acc * dx);
}

inline void normalize(double dx, std::span<std::complex<double>> a) {
    const double n = norm(dx, a);
    if (n == 0.0) return;
    for (auto& v : a) v /= n;
}

inline double edge_amplitude(std::span<const std::complex<double>> a) {
    return std::max(std::abs(a.front()), std::abs(a.back()));
}

inline double centroid(const Grid& grid, std::span<const std::complex<double>> a) {
    double acc = 0.0;
    for (int i = 0; i < grid.n(); ++i) acc += grid.x(i) * std::norm(a[i]);
    return acc * grid.dx();
}

/// <a| diag(v) |a> for a real grid function v.
inline double expectation(double dx, std::span<const double> v,
                          std::span<const std::complex<double>> a) {
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) acc += v[i] * std::norm(a[i]);
    return acc * dx;
}

} // namespace stai

#endif
