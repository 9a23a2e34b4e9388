#include "stai/trajectory.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "stai/errors.hpp"
#include "stai/numerics.hpp"

namespace stai {

namespace {

constexpr double kBoundaryRelTol = 1e-12;

std::vector<double> differentiate_powers(const std::vector<double>& c) {
    if (c.size() <= 1) return {0.0};
    std::vector<double> d(c.size() - 1);
    for (std::size_t j = 1; j < c.size(); ++j) d[j - 1] = static_cast<double>(j) * c[j];
    return d;
}

double horner(const std::vector<double>& c, double s) {
    double acc = 0.0;
    for (std::size_t j = c.size(); j-- > 0;) acc = acc * s + c[j];
    return acc;
}

/// Basis value for the constrained designs. Polynomial: s^power.
double power_term(int power, int order, double s) {
    if (order > power) return 0.0;
    double factor = 1.0;
    for (int k = 0; k < order; ++k) factor *= static_cast<double>(power - k);
    return factor * std::pow(s, power - order);
}

double sine_term(int mode, int order, double s) {
    const double w = mode * M_PI;
    switch (order) {
        case 0: return std::sin(w * s);
        case 1: return w * std::cos(w * s);
        case 2: return -w * w * std::sin(w * s);
        default: throw Error("constraint order must be 0, 1 or 2");
    }
}

} // namespace

Trajectory Trajectory::polynomial(double t_f, std::vector<double> coeffs) {
    if (!(t_f > 0.0)) throw ConfigError("trajectory duration must be positive");
    Trajectory traj;
    traj.basis_ = TrajectoryBasis::kPolynomial;
    traj.t_f_ = t_f;
    traj.coeffs_ = std::move(coeffs);
    if (traj.coeffs_.empty()) traj.coeffs_ = {0.0};
    traj.d1_ = differentiate_powers(traj.coeffs_);
    traj.d2_ = differentiate_powers(traj.d1_);
    traj.finalize(true);
    return traj;
}

Trajectory Trajectory::sine_series(double t_f, std::vector<double> coeffs) {
    if (!(t_f > 0.0)) throw ConfigError("trajectory duration must be positive");
    Trajectory traj;
    traj.basis_ = TrajectoryBasis::kSineSeries;
    traj.t_f_ = t_f;
    traj.coeffs_ = std::move(coeffs);
    traj.finalize(true);
    return traj;
}

Trajectory Trajectory::tabulated(std::vector<double> t, std::vector<double> alpha) {
    if (t.size() < 4) throw ConfigError("tabulated trajectory needs >= 4 samples");
    if (std::abs(t.front()) > 0.0) throw ConfigError("tabulated trajectory must start at t = 0");
    Trajectory traj;
    traj.basis_ = TrajectoryBasis::kTabulated;
    traj.t_f_ = t.back();
    if (!(traj.t_f_ > 0.0)) throw ConfigError("trajectory duration must be positive");
    traj.spline_ = std::make_shared<CubicSpline>(std::move(t), std::move(alpha),
                                                 CubicSpline::Clamped{0.0, 0.0});
    traj.finalize(false);
    return traj;
}

void Trajectory::finalize(bool require_rest_acceleration) {
    // Peak displacement by scan plus golden refinement.
    const int n_scan = 4096;
    double best = 0.0;
    double best_t = 0.0;
    for (int i = 0; i <= n_scan; ++i) {
        const double t = t_f_ * i / n_scan;
        const double a = evaluate(t, 0);
        if (std::abs(a) > std::abs(best)) {
            best = a;
            best_t = t;
        }
    }
    if (best != 0.0) {
        const double lo = std::max(0.0, best_t - t_f_ / n_scan);
        const double hi = std::min(t_f_, best_t + t_f_ / n_scan);
        auto [tm, neg] = golden_section_min([&](double t) { return -std::abs(evaluate(t, 0)); },
                                            lo, hi, 1e-12);
        best = evaluate(tm, 0);
        (void)neg;
    }
    peak_ = best;

    const double scale0 = std::max(max_abs(0), 1e-300);
    const double scale1 = std::max(max_abs(1), 1e-300);
    for (double tb : {0.0, t_f_}) {
        if (std::abs(evaluate(tb, 0)) > kBoundaryRelTol * scale0 ||
            std::abs(evaluate(tb, 1)) > kBoundaryRelTol * scale1) {
            throw ConfigError("trajectory violates rest-to-rest boundary conditions");
        }
        if (require_rest_acceleration) {
            const double scale2 = std::max(max_abs(2), 1e-300);
            if (std::abs(evaluate(tb, 2)) > kBoundaryRelTol * scale2) {
                throw ConfigError("trajectory violates zero boundary acceleration");
            }
        }
    }
}

double Trajectory::evaluate(double t, int order) const {
    if (order < 0 || order > 2) throw Error("derivative order must be 0, 1 or 2");
    if (t < -1e-12 * t_f_ || t > t_f_ * (1.0 + 1e-12)) {
        throw Error("trajectory evaluated outside [0, t_f]");
    }
    t = std::clamp(t, 0.0, t_f_);
    switch (basis_) {
        case TrajectoryBasis::kPolynomial: {
            const double s = t / t_f_;
            const std::vector<double>* c = order == 0 ? &coeffs_ : (order == 1 ? &d1_ : &d2_);
            return horner(*c, s) / std::pow(t_f_, order);
        }
        case TrajectoryBasis::kSineSeries: {
            const double s = t / t_f_;
            double acc = 0.0;
            for (std::size_t j = 0; j < coeffs_.size(); ++j) {
                acc += coeffs_[j] * sine_term(static_cast<int>(j) + 1, order, s);
            }
            return acc / std::pow(t_f_, order);
        }
        case TrajectoryBasis::kTabulated:
            return spline_->eval(t, order);
    }
    return 0.0;
}

double Trajectory::integral() const {
    switch (basis_) {
        case TrajectoryBasis::kPolynomial: {
            double acc = 0.0;
            for (std::size_t j = 0; j < coeffs_.size(); ++j) {
                acc += coeffs_[j] / static_cast<double>(j + 1);
            }
            return acc * t_f_;
        }
        case TrajectoryBasis::kSineSeries: {
            double acc = 0.0;
            for (std::size_t j = 0; j < coeffs_.size(); ++j) {
                const int mode = static_cast<int>(j) + 1;
                acc += coeffs_[j] * (1.0 - std::cos(mode * M_PI)) / (mode * M_PI);
            }
            return acc * t_f_;
        }
        case TrajectoryBasis::kTabulated:
            return spline_->integral(0.0, t_f_);
    }
    return 0.0;
}

double Trajectory::max_abs(int order) const {
    const int n_scan = 2048;
    double m = 0.0;
    for (int i = 0; i <= n_scan; ++i) {
        m = std::max(m, std::abs(evaluate(t_f_ * i / n_scan, order)));
    }
    return m;
}

Trajectory design_polynomial(double M, double t_f) {
    if (!(t_f > 0.0)) throw ConfigError("trajectory duration must be positive");
    return Trajectory::polynomial(
        t_f, {0.0, 0.0, 0.0, 64.0 * M, -192.0 * M, 192.0 * M, -64.0 * M});
}

namespace {

struct BasisSpec {
    enum class Kind { kPowers, kSines } kind;
    std::vector<int> indices; // powers of s, or sine mode numbers

    double term(std::size_t j, int order, double s) const {
        return kind == Kind::kPowers ? power_term(indices[j], order, s)
                                     : sine_term(indices[j], order, s);
    }
    double integral01(std::size_t j) const {
        if (kind == Kind::kPowers) return 1.0 / (indices[j] + 1.0);
        const int mode = indices[j];
        return (1.0 - std::cos(mode * M_PI)) / (mode * M_PI);
    }
};

Trajectory solve_constrained(double t_f, const BasisSpec& basis,
                             const std::vector<TrajectoryConstraint>& constraints,
                             std::optional<double> target_S, double hbar) {
    if (!(t_f > 0.0)) throw ConfigError("trajectory duration must be positive");
    const std::size_t n_unknowns = basis.indices.size();
    const std::size_t n_rows = constraints.size() + (target_S ? 1 : 0);

    Eigen::MatrixXd A(n_rows, n_unknowns);
    Eigen::VectorXd rhs(n_rows);
    for (std::size_t r = 0; r < constraints.size(); ++r) {
        const auto& con = constraints[r];
        if (con.t < 0.0 || con.t > t_f) throw ConfigError("constraint time outside [0, t_f]");
        if (con.order < 0 || con.order > 2) throw ConfigError("constraint order must be 0..2");
        const double s = con.t / t_f;
        for (std::size_t j = 0; j < n_unknowns; ++j) {
            A(r, j) = basis.term(j, con.order, s) / std::pow(t_f, con.order);
        }
        rhs(r) = con.value;
    }
    if (target_S) {
        const std::size_t r = n_rows - 1;
        for (std::size_t j = 0; j < n_unknowns; ++j) {
            A(r, j) = 2.0 * t_f * basis.integral01(j) / hbar;
        }
        rhs(r) = *target_S;
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double s_max = sv.size() ? sv(0) : 0.0;
    if (s_max == 0.0 || sv(sv.size() - 1) < s_max / 1e12 ||
        svd.rank() < static_cast<Eigen::Index>(n_unknowns)) {
        throw NumericsError("singular constraint system: dependent or insufficient constraints");
    }
    Eigen::VectorXd coeffs = svd.solve(rhs);

    // Consistency: a least-squares solution that leaves residual means the
    // constraint set contradicts itself.
    const Eigen::VectorXd res = A * coeffs - rhs;
    for (Eigen::Index r = 0; r < res.size(); ++r) {
        if (std::abs(res(r)) > 1e-10 * std::max(1.0, std::abs(rhs(r)))) {
            throw NumericsError("inconsistent constraint system: residual above 1e-10");
        }
    }

    if (basis.kind == BasisSpec::Kind::kPowers) {
        const int max_power = *std::max_element(basis.indices.begin(), basis.indices.end());
        std::vector<double> dense(max_power + 1, 0.0);
        for (std::size_t j = 0; j < n_unknowns; ++j) dense[basis.indices[j]] = coeffs(j);
        return Trajectory::polynomial(t_f, std::move(dense));
    }
    const int max_mode = *std::max_element(basis.indices.begin(), basis.indices.end());
    std::vector<double> dense(max_mode, 0.0);
    for (std::size_t j = 0; j < n_unknowns; ++j) dense[basis.indices[j] - 1] = coeffs(j);
    return Trajectory::sine_series(t_f, std::move(dense));
}

} // namespace

Trajectory design_constrained_powers(double t_f, const std::vector<int>& powers,
                                     const std::vector<TrajectoryConstraint>& constraints,
                                     std::optional<double> target_S, double hbar) {
    if (powers.empty()) throw ConfigError("no basis powers given");
    for (int p : powers) {
        if (p < 1) throw ConfigError("basis powers must be >= 1");
    }
    // Rows identically zero over this basis (value 0 at t=0 below the lowest
    // power) carry no information; drop them rather than report singularity.
    const int min_power = *std::min_element(powers.begin(), powers.end());
    std::vector<TrajectoryConstraint> kept;
    for (const auto& con : constraints) {
        if (con.t == 0.0 && con.order < min_power) {
            if (con.value != 0.0) {
                throw NumericsError("inconsistent constraint: nonzero value on a zero row");
            }
            continue;
        }
        kept.push_back(con);
    }
    return solve_constrained(t_f, {BasisSpec::Kind::kPowers, powers}, kept, target_S, hbar);
}

Trajectory design_constrained(double t_f, const std::vector<TrajectoryConstraint>& constraints,
                              int extra_terms, std::optional<double> target_S, double hbar) {
    // Count constraints that are non-trivial for powers starting at s^3.
    int effective = 0;
    for (const auto& con : constraints) {
        if (!(con.t == 0.0 && con.order < 3)) ++effective;
    }
    const int n_unknowns = effective + extra_terms + (target_S ? 1 : 0);
    if (n_unknowns < 1) throw ConfigError("constraint system has no unknowns");
    std::vector<int> powers(n_unknowns);
    for (int j = 0; j < n_unknowns; ++j) powers[j] = 3 + j;
    return design_constrained_powers(t_f, powers, constraints, target_S, hbar);
}

Trajectory design_constrained_sine(double t_f, int n_modes,
                                   const std::vector<TrajectoryConstraint>& constraints,
                                   std::optional<double> target_S, double hbar) {
    if (n_modes < 1) throw ConfigError("need at least one sine mode");
    std::vector<int> modes(n_modes);
    for (int j = 0; j < n_modes; ++j) modes[j] = j + 1;
    return solve_constrained(t_f, {BasisSpec::Kind::kSines, modes}, constraints, target_S, hbar);
}

double sensitivity(const Trajectory& traj, double hbar) {
    return 2.0 * traj.integral() / hbar;
}

double peak_for_sensitivity(double S0, double t_f, double hbar) {
    if (!(t_f > 0.0)) throw ConfigError("trajectory duration must be positive");
    return 35.0 * S0 * hbar / (32.0 * t_f);
}

double steffen_scaling(double t_f, double lambda, double microsecond) {
    if (t_f < 0.0) throw ConfigError("duration must be >= 0");
    return lambda * t_f / (144.0 * microsecond);
}

void write_waveform_csv(std::ostream& os, const Trajectory& traj, double mass, int n_samples) {
    if (n_samples < 2) throw ConfigError("need >= 2 waveform samples");
    os << "t,alpha,alpha_dot,alpha_ddot,f\n";
    os.precision(17);
    const CompensationForce f(traj, mass);
    for (int i = 0; i < n_samples; ++i) {
        const double t = traj.t_f() * i / (n_samples - 1);
        os << t << ',' << traj.evaluate(t, 0) << ',' << traj.evaluate(t, 1) << ','
           << traj.evaluate(t, 2) << ',' << f(t) << '\n';
    }
}

Trajectory read_waveform_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw ConfigError("empty waveform CSV");
    std::vector<double> t, alpha;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        double vals[2];
        for (int k = 0; k < 2; ++k) {
            if (!std::getline(row, cell, ',')) throw ConfigError("waveform CSV row too short");
            vals[k] = std::stod(cell);
        }
        t.push_back(vals[0]);
        alpha.push_back(vals[1]);
    }
    return Trajectory::tabulated(std::move(t), std::move(alpha));
}

} // namespace stai
