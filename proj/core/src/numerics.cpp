#include "stai/numerics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "stai/errors.hpp"

namespace stai {

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol) {
    if (a == b) return 0.0;
    // Relative termination in boost; feed it a tolerance scaled to the
    // interval so the practical behaviour is an absolute target.
    double error = 0.0;
    const double val = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, 15, abs_tol, &error);
    return val;
}

double gauss_legendre5(const std::function<double(double)>& f, double a, double b) {
    // Nodes/weights for [-1, 1], ascending.
    static constexpr double x[5] = {-0.906179845938663992797626878299,
                                    -0.538469310105683091036314420700, 0.0,
                                    0.538469310105683091036314420700,
                                    0.906179845938663992797626878299};
    static constexpr double w[5] = {0.236926885056189087514264040720,
                                    0.478628670499366468041291514836,
                                    0.568888888888888888888888888889,
                                    0.478628670499366468041291514836,
                                    0.236926885056189087514264040720};
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < 5; ++i) acc += w[i] * f(mid + half * x[i]);
    return acc * half;
}

std::pair<double, double> golden_section_min(const std::function<double(double)>& f, double a,
                                             double b, double rel_tol, int max_iter) {
    constexpr double inv_phi = 0.61803398874989484820;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    for (int it = 0; it < max_iter && (b - a) > rel_tol * scale; ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    const double xm = 0.5 * (a + b);
    return {xm, f(xm)};
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw NumericsError("fit_line needs >= 2 matching samples");
    }
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw NumericsError("fit_line: degenerate abscissae");
    LineFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    return fit;
}

} // namespace stai
