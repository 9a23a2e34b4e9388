#include "stai/units.hpp"

#include <cmath>
#include <cstdlib>

#include "stai/errors.hpp"

namespace stai {

namespace {

double ipow(double base, int exp) {
    if (exp < 0) return 1.0 / ipow(base, -exp);
    double r = 1.0;
    while (exp > 0) {
        if (exp & 1) r *= base;
        base *= base;
        exp >>= 1;
    }
    return r;
}

} // namespace

UnitSystem UnitSystem::natural() {
    return UnitSystem(1.0, 1.0, 1.0, 1.0, true);
}

UnitSystem UnitSystem::si(double mass_kg, double length_m, double hbar_si) {
    if (!(mass_kg > 0.0) || !(length_m > 0.0) || !(hbar_si > 0.0)) {
        throw UnitError("unit system scales must be strictly positive");
    }
    // Time unit fixed by requiring hbar = 1 alongside m = 1.
    const double time_s = mass_kg * length_m * length_m / hbar_si;
    return UnitSystem(mass_kg, length_m, time_s, hbar_si, false);
}

double UnitSystem::to_natural(const Quantity& q) const {
    if (identity_) return q.value;
    const double scale = ipow(mass_unit_, q.dim.mass) * ipow(length_unit_, q.dim.length) *
                         ipow(time_unit_, q.dim.time);
    return q.value / scale;
}

Quantity UnitSystem::from_natural(double value, const Dim& dim) const {
    if (identity_) return {value, dim};
    const double scale =
        ipow(mass_unit_, dim.mass) * ipow(length_unit_, dim.length) * ipow(time_unit_, dim.time);
    return {value * scale, dim};
}

Quantity parse_unit(const std::string& symbol) {
    if (symbol == "1" || symbol == "" || symbol == "rad") return {1.0, kDimensionless};
    if (symbol == "m") return {1.0, kDimLength};
    if (symbol == "mm") return {1e-3, kDimLength};
    if (symbol == "um") return {1e-6, kDimLength};
    if (symbol == "nm") return {1e-9, kDimLength};
    if (symbol == "s") return {1.0, kDimTime};
    if (symbol == "ms") return {1e-3, kDimTime};
    if (symbol == "us") return {1e-6, kDimTime};
    if (symbol == "ns") return {1e-9, kDimTime};
    if (symbol == "kg") return {1.0, kDimMass};
    if (symbol == "u") return {kAtomicMassUnitKg, kDimMass};
    if (symbol == "N") return {1.0, kDimForce};
    if (symbol == "J") return {1.0, kDimEnergy};
    if (symbol == "J*s") return {1.0, kDimAction};
    if (symbol == "m/s") return {1.0, kDimVelocity};
    if (symbol == "m/s^2") return {1.0, kDimAcceleration};
    if (symbol == "rad/s") return {1.0, kDimAngularFrequency};
    throw UnitError("unknown or unrepresentable unit symbol: '" + symbol + "'");
}

void PhysicalParams::validate() const {
    if (!(mass > 0.0)) throw ConfigError("mass must be > 0");
    if (!(hbar > 0.0)) throw ConfigError("hbar must be > 0");
    if (!std::isfinite(c)) throw ConfigError("force c must be finite");
}

} // namespace stai
