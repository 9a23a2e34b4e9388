#include "stai/cubic_spline.hpp"

#include <algorithm>
#include <cmath>

#include "stai/errors.hpp"

namespace stai {

namespace {

void check_knots(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 3) {
        throw ConfigError("spline needs >= 3 matching samples");
    }
    for (std::size_t i = 1; i < x.size(); ++i) {
        if (!(x[i] > x[i - 1])) throw ConfigError("spline knots must be strictly increasing");
    }
}

/// Solve the tridiagonal moment system in place (Thomas algorithm).
std::vector<double> solve_tridiag(std::vector<double> lower, std::vector<double> diag,
                                  std::vector<double> upper, std::vector<double> rhs) {
    const std::size_t n = diag.size();
    for (std::size_t i = 1; i < n; ++i) {
        const double w = lower[i] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    std::vector<double> x(n);
    x[n - 1] = rhs[n - 1] / diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
        x[i] = (rhs[i] - upper[i] * x[i + 1]) / diag[i];
    }
    return x;
}

} // namespace

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y, Natural)
    : x_(std::move(x)), y_(std::move(y)) {
    check_knots(x_, y_);
    const std::size_t n = x_.size();
    std::vector<double> lower(n, 0.0), diag(n, 0.0), upper(n, 0.0), rhs(n, 0.0);
    diag[0] = 1.0;
    diag[n - 1] = 1.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h0 = x_[i] - x_[i - 1];
        const double h1 = x_[i + 1] - x_[i];
        lower[i] = h0;
        diag[i] = 2.0 * (h0 + h1);
        upper[i] = h1;
        rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
    }
    build(solve_tridiag(lower, diag, upper, rhs));
}

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y, Clamped bc)
    : x_(std::move(x)), y_(std::move(y)) {
    check_knots(x_, y_);
    const std::size_t n = x_.size();
    std::vector<double> lower(n, 0.0), diag(n, 0.0), upper(n, 0.0), rhs(n, 0.0);
    const double h_first = x_[1] - x_[0];
    const double h_last = x_[n - 1] - x_[n - 2];
    diag[0] = 2.0 * h_first;
    upper[0] = h_first;
    rhs[0] = 6.0 * ((y_[1] - y_[0]) / h_first - bc.slope_begin);
    diag[n - 1] = 2.0 * h_last;
    lower[n - 1] = h_last;
    rhs[n - 1] = 6.0 * (bc.slope_end - (y_[n - 1] - y_[n - 2]) / h_last);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h0 = x_[i] - x_[i - 1];
        const double h1 = x_[i + 1] - x_[i];
        lower[i] = h0;
        diag[i] = 2.0 * (h0 + h1);
        upper[i] = h1;
        rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
    }
    build(solve_tridiag(lower, diag, upper, rhs));
}

void CubicSpline::build(const std::vector<double>& m) {
    const std::size_t n = x_.size();
    b_.resize(n - 1);
    c_.resize(n - 1);
    d_.resize(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h = x_[i + 1] - x_[i];
        b_[i] = (y_[i + 1] - y_[i]) / h - h * (2.0 * m[i] + m[i + 1]) / 6.0;
        c_[i] = 0.5 * m[i];
        d_[i] = (m[i + 1] - m[i]) / (6.0 * h);
    }
    cumint_.assign(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h = x_[i + 1] - x_[i];
        cumint_[i + 1] = cumint_[i] + h * (y_[i] + h * (b_[i] / 2.0 + h * (c_[i] / 3.0 + h * d_[i] / 4.0)));
    }
}

int CubicSpline::find_interval(double x) const {
    if (x < x_.front() || x > x_.back()) {
        throw Error("spline query outside tabulated domain");
    }
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    int i = static_cast<int>(it - x_.begin()) - 1;
    return std::clamp(i, 0, static_cast<int>(x_.size()) - 2);
}

double CubicSpline::eval(double x, int order) const {
    const int i = find_interval(x);
    const double t = x - x_[i];
    switch (order) {
        case 0: return y_[i] + t * (b_[i] + t * (c_[i] + t * d_[i]));
        case 1: return b_[i] + t * (2.0 * c_[i] + t * 3.0 * d_[i]);
        case 2: return 2.0 * c_[i] + t * 6.0 * d_[i];
        default: throw Error("spline derivative order must be 0, 1 or 2");
    }
}

double CubicSpline::antiderivative_at(double x) const {
    const int i = find_interval(x);
    const double t = x - x_[i];
    return cumint_[i] + t * (y_[i] + t * (b_[i] / 2.0 + t * (c_[i] / 3.0 + t * d_[i] / 4.0)));
}

double CubicSpline::integral(double a, double b) const {
    return antiderivative_at(b) - antiderivative_at(a);
}

} // namespace stai
