#include "stai/scenario.hpp"

#include <cmath>
#include <fstream>

#include "stai/errors.hpp"
#include "stai/units.hpp"

namespace stai {

namespace {

using nlohmann::json;

const json* find(const json& j, const char* key) {
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

template <typename T>
void read(const json& j, const char* key, T& out) {
    if (const json* v = find(j, key)) {
        try {
            out = v->get<T>();
        } catch (const json::exception& e) {
            throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
        }
    }
}

void read_optional(const json& j, const char* key, std::optional<double>& out) {
    if (const json* v = find(j, key)) {
        if (v->is_null()) {
            out.reset();
        } else {
            out = v->get<double>();
        }
    }
}

} // namespace

ScenarioConfig scenario_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("scenario config must be a JSON object");
    ScenarioConfig c;
    read(j, "name", c.name);
    if (const json* u = find(j, "units")) {
        read(*u, "si", c.units.si);
        read(*u, "hbar", c.units.hbar);
    }
    if (const json* p = find(j, "physical")) {
        read(*p, "c", c.physical.c);
        read(*p, "mass", c.physical.mass);
        read(*p, "hbar", c.physical.hbar);
    }
    if (const json* p = find(j, "potential")) {
        read(*p, "kind", c.potential.kind);
        read(*p, "omega", c.potential.omega);
        read(*p, "depth", c.potential.depth);
        read(*p, "period", c.potential.period);
        read(*p, "file", c.potential.file);
    }
    if (const json* t = find(j, "trajectory")) {
        read(*t, "basis", c.trajectory.basis);
        read(*t, "t_f", c.trajectory.t_f);
        read_optional(*t, "M", c.trajectory.M);
        read_optional(*t, "target_S", c.trajectory.target_S);
        read_optional(*t, "mu", c.trajectory.mu);
        read(*t, "scale_coeff", c.trajectory.scale_coeff);
        read(*t, "file", c.trajectory.file);
    }
    if (const json* p = find(j, "pivot")) {
        read(*p, "kind", c.pivot.kind);
        read(*p, "x0", c.pivot.x0);
        read(*p, "a", c.pivot.a);
        read(*p, "b", c.pivot.b);
        read(*p, "x0_mean", c.pivot.x0_mean);
        read(*p, "sigma", c.pivot.sigma);
        read(*p, "tau", c.pivot.tau);
        read(*p, "seed", c.pivot.seed);
    }
    if (const json* s = find(j, "initial_state")) {
        read(*s, "type", c.initial_state.type);
        read(*s, "n", c.initial_state.n);
        read(*s, "modes", c.initial_state.modes);
        read(*s, "seed", c.initial_state.seed);
        read(*s, "width", c.initial_state.width);
        read(*s, "center", c.initial_state.center);
        if (const json* coeffs = find(*s, "coefficients")) {
            for (const auto& pair : *coeffs) {
                if (!pair.is_array() || pair.size() != 2) {
                    throw ConfigError("superposition coefficients must be [re, im] pairs");
                }
                c.initial_state.coefficients.emplace_back(pair[0].get<double>(),
                                                          pair[1].get<double>());
            }
        }
    }
    read(j, "compensation", c.compensation);
    if (const json* g = find(j, "grid")) {
        read(*g, "n_points", c.grid.n_points);
        read(*g, "x_half_extent", c.grid.x_half_extent);
        read(*g, "oversample", c.grid.oversample);
        read(*g, "n_ceiling", c.grid.n_ceiling);
    }
    if (const json* d = find(j, "dt")) {
        read(*d, "scale", c.dt.scale);
    }
    read(j, "seed", c.seed);
    read(j, "track_invariant", c.track_invariant);
    if (const json* o = find(j, "output")) {
        read(*o, "dir", c.output.dir);
        read(*o, "format", c.output.format);
        read(*o, "snapshot_stride", c.output.snapshot_stride);
    }
    return c;
}

json scenario_to_json(const ScenarioConfig& c) {
    json j;
    j["name"] = c.name;
    j["units"] = {{"si", c.units.si}, {"hbar", c.units.hbar}};
    j["physical"] = {{"c", c.physical.c}, {"mass", c.physical.mass}, {"hbar", c.physical.hbar}};
    json pot = {{"kind", c.potential.kind},
                {"omega", c.potential.omega},
                {"depth", c.potential.depth},
                {"period", c.potential.period},
                {"file", c.potential.file}};
    j["potential"] = pot;
    json traj = {{"basis", c.trajectory.basis},
                 {"t_f", c.trajectory.t_f},
                 {"scale_coeff", c.trajectory.scale_coeff},
                 {"file", c.trajectory.file}};
    traj["M"] = c.trajectory.M ? json(*c.trajectory.M) : json(nullptr);
    traj["target_S"] = c.trajectory.target_S ? json(*c.trajectory.target_S) : json(nullptr);
    traj["mu"] = c.trajectory.mu ? json(*c.trajectory.mu) : json(nullptr);
    j["trajectory"] = traj;
    j["pivot"] = {{"kind", c.pivot.kind}, {"x0", c.pivot.x0},       {"a", c.pivot.a},
                  {"b", c.pivot.b},       {"x0_mean", c.pivot.x0_mean}, {"sigma", c.pivot.sigma},
                  {"tau", c.pivot.tau},   {"seed", c.pivot.seed}};
    json init = {{"type", c.initial_state.type},   {"n", c.initial_state.n},
                 {"modes", c.initial_state.modes}, {"seed", c.initial_state.seed},
                 {"width", c.initial_state.width}, {"center", c.initial_state.center}};
    json coeffs = json::array();
    for (const auto& z : c.initial_state.coefficients) {
        coeffs.push_back(json::array({z.real(), z.imag()}));
    }
    init["coefficients"] = coeffs;
    j["initial_state"] = init;
    j["compensation"] = c.compensation;
    j["grid"] = {{"n_points", c.grid.n_points},
                 {"x_half_extent", c.grid.x_half_extent},
                 {"oversample", c.grid.oversample},
                 {"n_ceiling", c.grid.n_ceiling}};
    j["dt"] = {{"scale", c.dt.scale}};
    j["seed"] = c.seed;
    j["track_invariant"] = c.track_invariant;
    j["output"] = {{"dir", c.output.dir},
                   {"format", c.output.format},
                   {"snapshot_stride", c.output.snapshot_stride}};
    return j;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario config: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    return scenario_from_json(j);
}

ScenarioConfig to_natural_units(const ScenarioConfig& config) {
    if (!config.units.si) return config;
    ScenarioConfig c = config;
    const double hbar_si = config.units.hbar > 0.0 ? config.units.hbar : kHbarSI;
    const double mass_kg = config.physical.mass;
    double length_m = 0.0;
    if (config.potential.kind == "lattice") {
        length_m = config.potential.period;
    } else if (config.potential.kind == "harmonic") {
        length_m = std::sqrt(hbar_si / (mass_kg * config.potential.omega));
    } else {
        throw ConfigError("SI input needs a harmonic or lattice potential to fix the scale");
    }
    const UnitSystem sys = UnitSystem::si(mass_kg, length_m, hbar_si);

    c.units.si = false;
    c.units.hbar = 0.0;
    c.physical.c = sys.to_natural({config.physical.c, kDimForce});
    c.physical.mass = 1.0;
    c.physical.hbar = 1.0;
    c.potential.omega = sys.to_natural({config.potential.omega, kDimAngularFrequency});
    c.potential.depth = sys.to_natural({config.potential.depth, kDimEnergy});
    c.potential.period = sys.to_natural({config.potential.period, kDimLength});
    c.trajectory.t_f = sys.to_natural({config.trajectory.t_f, kDimTime});
    if (config.trajectory.M) c.trajectory.M = sys.to_natural({*config.trajectory.M, kDimLength});
    if (config.trajectory.target_S) {
        c.trajectory.target_S = sys.to_natural({*config.trajectory.target_S, kDimSensitivity});
    }
    c.pivot.x0 = sys.to_natural({config.pivot.x0, kDimLength});
    c.pivot.a = sys.to_natural({config.pivot.a, kDimLength});
    c.pivot.b = sys.to_natural({config.pivot.b, kDimVelocity});
    c.pivot.x0_mean = sys.to_natural({config.pivot.x0_mean, kDimLength});
    c.pivot.sigma = sys.to_natural({config.pivot.sigma, kDimLength});
    c.pivot.tau = sys.to_natural({config.pivot.tau, kDimTime});
    c.initial_state.width = sys.to_natural({config.initial_state.width, kDimLength});
    c.initial_state.center = sys.to_natural({config.initial_state.center, kDimLength});
    c.grid.x_half_extent = sys.to_natural({config.grid.x_half_extent, kDimLength});
    return c;
}

SweepConfig sweep_from_json(const json& j) {
    SweepConfig s;
    if (const json* base = find(j, "base")) {
        s.base = scenario_from_json(*base);
    } else {
        s.base = scenario_from_json(j); // sweep keys alongside a scenario
    }
    if (const json* axes = find(j, "sweep")) {
        for (const auto& axis : *axes) {
            SweepAxis a;
            a.path = axis.at("path").get<std::string>();
            a.values = axis.at("values").get<std::vector<double>>();
            if (a.values.empty()) throw ConfigError("sweep axis with no values: " + a.path);
            s.axes.push_back(std::move(a));
        }
    }
    read(j, "workers", s.workers);
    return s;
}

json sweep_to_json(const SweepConfig& s) {
    json j = scenario_to_json(s.base);
    json axes = json::array();
    for (const auto& a : s.axes) axes.push_back({{"path", a.path}, {"values", a.values}});
    j["sweep"] = axes;
    j["workers"] = s.workers;
    return j;
}

SweepConfig load_sweep(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open sweep config: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    return sweep_from_json(j);
}

void apply_axis_value(ScenarioConfig& c, const std::string& path, double value) {
    if (path == "trajectory.M") {
        c.trajectory.M = value;
    } else if (path == "trajectory.t_f") {
        c.trajectory.t_f = value;
    } else if (path == "trajectory.target_S") {
        c.trajectory.target_S = value;
    } else if (path == "physical.c") {
        c.physical.c = value;
    } else if (path == "pivot.x0") {
        c.pivot.x0 = value;
    } else if (path == "pivot.seed") {
        c.pivot.seed = static_cast<std::uint64_t>(value);
    } else if (path == "pivot.sigma") {
        c.pivot.sigma = value;
    } else if (path == "initial_state.n") {
        c.initial_state.n = static_cast<int>(value);
    } else if (path == "initial_state.seed") {
        c.initial_state.seed = static_cast<std::uint64_t>(value);
    } else if (path == "dt.scale") {
        c.dt.scale = value;
    } else if (path == "seed") {
        c.seed = static_cast<std::uint64_t>(value);
    } else {
        throw ConfigError("unknown sweep path: " + path);
    }
}

std::vector<ScenarioConfig> expand_sweep(const SweepConfig& sweep) {
    std::vector<ScenarioConfig> out;
    std::size_t total = 1;
    for (const auto& a : sweep.axes) total *= a.values.size();
    out.reserve(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
        ScenarioConfig c = sweep.base;
        std::size_t rem = idx;
        for (auto it = sweep.axes.rbegin(); it != sweep.axes.rend(); ++it) {
            const std::size_t k = rem % it->values.size();
            rem /= it->values.size();
            apply_axis_value(c, it->path, it->values[k]);
        }
        char suffix[16];
        std::snprintf(suffix, sizeof(suffix), "_%03zu", idx);
        c.name += suffix;
        out.push_back(std::move(c));
    }
    return out;
}

} // namespace stai
