#ifndef STAI_UNITS_HPP
#define STAI_UNITS_HPP

#include <string>

namespace stai {

// CODATA 2018 values.
inline constexpr double kHbarSI = 1.054571817e-34;        // J s
inline constexpr double kAtomicMassUnitKg = 1.66053906660e-27;
inline constexpr double kCs133MassU = 132.905451961;
inline constexpr double kCs133MassKg = kCs133MassU * kAtomicMassUnitKg;

/// Dimension exponents over the (mass, length, time) base.
struct Dim {
    int mass = 0;
    int length = 0;
    int time = 0;

    friend constexpr bool operator==(const Dim&, const Dim&) = default;
    constexpr Dim operator+(const Dim& o) const {
        return {mass + o.mass, length + o.length, time + o.time};
    }
    constexpr Dim operator-(const Dim& o) const {
        return {mass - o.mass, length - o.length, time - o.time};
    }
};

inline constexpr Dim kDimensionless{0, 0, 0};
inline constexpr Dim kDimMass{1, 0, 0};
inline constexpr Dim kDimLength{0, 1, 0};
inline constexpr Dim kDimTime{0, 0, 1};
inline constexpr Dim kDimVelocity{0, 1, -1};
inline constexpr Dim kDimAcceleration{0, 1, -2};
inline constexpr Dim kDimEnergy{1, 2, -2};
inline constexpr Dim kDimForce{1, 1, -2};
inline constexpr Dim kDimAction{1, 2, -1};
inline constexpr Dim kDimAngularFrequency{0, 0, -1};
// Sensitivity: phase per unit force, [S] = 2*integral(alpha dt)/hbar.
inline constexpr Dim kDimSensitivity{-1, -1, 2};

/// A value together with its physical dimension, in SI base units.
struct Quantity {
    double value = 0.0;
    Dim dim;
};

/// Natural-unit system hbar = m = 1 anchored to a chosen length scale.
///
/// The four scales are the SI sizes of one natural unit each. They are not
/// independent: time = mass * length^2 / hbar, so that both hbar and the
/// particle mass equal one in natural units.
class UnitSystem {
public:
    /// Identity system: inputs are already natural.
    static UnitSystem natural();

    /// Anchor to SI: one mass unit = mass_kg, one length unit = length_m.
    static UnitSystem si(double mass_kg, double length_m, double hbar_si = kHbarSI);

    double to_natural(const Quantity& q) const;
    Quantity from_natural(double value, const Dim& dim) const;

    double mass_unit() const { return mass_unit_; }
    double length_unit() const { return length_unit_; }
    double time_unit() const { return time_unit_; }
    double hbar_si() const { return hbar_si_; }
    /// Energy of one natural unit in SI, = hbar / time_unit.
    double energy_unit() const { return hbar_si_ / time_unit_; }
    bool is_identity() const { return identity_; }

private:
    UnitSystem(double m, double l, double t, double hb, bool identity)
        : mass_unit_(m), length_unit_(l), time_unit_(t), hbar_si_(hb), identity_(identity) {}
    double mass_unit_;
    double length_unit_;
    double time_unit_;
    double hbar_si_;
    bool identity_;
};

/// Parse a unit symbol ("m", "nm", "us", "kg", "u", "N", "J", "J*s", "1")
/// into its SI value and dimension. Throws UnitError for unknown symbols.
Quantity parse_unit(const std::string& symbol);

/// The constants of one interferometer run in natural units.
struct PhysicalParams {
    double c = 0.0;     // homogeneous force to measure; any sign, may be 0
    double mass = 1.0;  // > 0
    double hbar = 1.0;  // > 0

    void validate() const;
};

} // namespace stai

#endif
