#ifndef STAI_CUBIC_SPLINE_HPP
#define STAI_CUBIC_SPLINE_HPP

#include <vector>

namespace stai {

/// Interpolating cubic spline on strictly increasing knots.
class CubicSpline {
public:
    struct Natural {};
    struct Clamped {
        double slope_begin = 0.0;
        double slope_end = 0.0;
    };

    CubicSpline(std::vector<double> x, std::vector<double> y, Natural);
    CubicSpline(std::vector<double> x, std::vector<double> y, Clamped bc);

    /// Value or derivative (order 0, 1, 2). Throws Error outside the knots.
    double eval(double x, int order = 0) const;

    /// Integral over [a, b], both inside the knot range.
    double integral(double a, double b) const;

    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }

private:
    void build(const std::vector<double>& moments);
    int find_interval(double x) const;
    double antiderivative_at(double x) const;

    std::vector<double> x_;
    std::vector<double> y_;
    // Per-interval cubic y_i + b t + c t^2 + d t^3, t = x - x_i.
    std::vector<double> b_, c_, d_;
    std::vector<double> cumint_; // antiderivative at each knot, cumint_[0] = 0
};

} // namespace stai

#endif
