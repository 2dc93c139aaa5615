#include "nbody/scenario.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "nbody/model.hpp"

namespace nbody {

void validate(const ScenarioSpec& spec) {
    validate(spec.params);
    if (spec.initial.pos.size() != spec.params.n() ||
        spec.initial.vel.size() != spec.params.n()) {
        throw std::invalid_argument("scenario: initial state does not match the body count");
    }
    if (!(spec.dt0 > 0.0)) {
        throw std::invalid_argument("scenario: dt0 must be positive");
    }
    if (!(spec.t_end > 0.0)) {
        throw std::invalid_argument("scenario: t_end must be positive");
    }
    try {
        init_extended(spec.initial, spec.params);  // rejects coincident bodies
    } catch (const SingularConfiguration& e) {
        throw std::invalid_argument(std::string("scenario: ") + e.what());
    }
}

double lagrange_angular_speed(double a, double mass, double gamma) {
    return std::sqrt(3.0 * gamma * mass / (a * a * a));
}

ScenarioSpec lagrange_triangle(double a, double mass, double gamma) {
    if (!(a > 0.0) || !(mass > 0.0) || !(gamma > 0.0)) {
        throw std::invalid_argument("triangle scenario needs positive side, mass and constant");
    }
    const double omega = lagrange_angular_speed(a, mass, gamma);
    // One vertex on +y; q is half the circumradius, so the vertex sits at 2q
    // and the base corners at -q. Velocity omega * (-y, x, 0) spins the
    // triangle rigidly counterclockwise about the centroid.
    const double q = a / (2.0 * std::sqrt(3.0));
    ScenarioSpec spec;
    spec.name = "lagrange";
    spec.params = Parameters::equal_masses(3, mass, gamma);
    spec.initial.t = 0.0;
    spec.initial.pos = {Vec3{0.0, 2.0 * q, 0.0}, Vec3{-0.5 * a, -q, 0.0},
                        Vec3{0.5 * a, -q, 0.0}};
    spec.initial.vel = {Vec3{-omega * (2.0 * q), 0.0, 0.0},
                        Vec3{omega * q, -omega * (0.5 * a), 0.0},
                        Vec3{omega * q, omega * (0.5 * a), 0.0}};
    spec.dt0 = 0.1;
    spec.t_end = 1.0;
    std::ostringstream notes;
    notes << "Three equal masses at the corners of an equilateral triangle (side " << a
          << ") in rigid counterclockwise rotation about their centroid; an exact relative "
             "equilibrium, so all pairwise distances stay constant.";
    spec.notes = notes.str();
    return spec;
}

CartesianState lagrange_exact_state(const ScenarioSpec& spec, double omega, double t) {
    const double c = std::cos(omega * t);
    const double s = std::sin(omega * t);
    auto rotate = [&](const Vec3& v) {
        return Vec3{c * v.x - s * v.y, s * v.x + c * v.y, v.z};
    };
    CartesianState out;
    out.t = spec.initial.t + t;
    out.pos.reserve(spec.initial.pos.size());
    out.vel.reserve(spec.initial.vel.size());
    for (const Vec3& r : spec.initial.pos) out.pos.push_back(rotate(r));
    for (const Vec3& v : spec.initial.vel) out.vel.push_back(rotate(v));
    return out;
}

ScenarioSpec figure_eight() {
    ScenarioSpec spec;
    spec.name = "eight";
    spec.params = Parameters::equal_masses(3, 1.0, 1.0);
    const Vec3 x1{0.97000436, -0.24308753, 0.0};
    const Vec3 v3{-0.93240737, -0.86473146, 0.0};
    const Vec3 v1 = -0.5 * v3;  // halving is exact, so total momentum is exactly zero
    spec.initial.t = 0.0;
    spec.initial.pos = {x1, -x1, Vec3{0.0, 0.0, 0.0}};
    spec.initial.vel = {v1, v1, v3};
    spec.dt0 = 0.1;
    spec.t_end = 200.0;
    spec.notes =
        "Three equal masses chasing each other around one planar figure-eight curve "
        "(choreography starting data as numerically determined by C. Simo); total momentum "
        "and angular momentum vanish identically.";
    return spec;
}

double figure_eight_period() { return 6.32591398; }

ScenarioSpec collision_line(double v3_boost) {
    if (v3_boost < 0.0) {
        throw std::invalid_argument("collision scenario: the velocity boost must be >= 0");
    }
    ScenarioSpec spec;
    spec.name = v3_boost == 0.0 ? "collision" : "collision-perturbed";
    spec.params = Parameters::equal_masses(3, 1.0, 1.0);
    spec.initial.t = 0.0;
    spec.initial.pos = {Vec3{0.0, 0.0, 0.0}, Vec3{1.0, 0.0, 0.0}, Vec3{-1.0, 0.0, 0.0}};
    spec.initial.vel = {Vec3{0.0, 0.0, 0.0}, Vec3{0.0, 1.0, 0.0},
                        Vec3{0.0, 1.5 + v3_boost, 0.0}};
    spec.dt0 = 6e-3;
    spec.t_end = 2.0;
    std::ostringstream notes;
    notes << "Three equal masses starting on the x-axis (at 0, +1, -1); the first at rest, "
             "the others moving along +y at 1 and "
          << 1.5 + v3_boost << ". Close encounters force the step size down.";
    spec.notes = notes.str();
    return spec;
}

ScenarioSpec perturb(const ScenarioSpec& spec, std::size_t body, const Vec3& dv) {
    if (body >= spec.initial.vel.size()) {
        throw std::out_of_range("perturb: body index out of range");
    }
    // A pure velocity nudge: name and notes stay, so a zero nudge returns an
    // identical spec.
    ScenarioSpec out = spec;
    out.initial.vel[body] += dv;
    return out;
}

const std::vector<ScenarioSpec>& builtin_scenarios() {
    static const std::vector<ScenarioSpec> all = {lagrange_triangle(), figure_eight(),
                                                  collision_line(0.0), collision_line(0.01)};
    return all;
}

const ScenarioSpec* find_builtin(const std::string& name) {
    for (const ScenarioSpec& s : builtin_scenarios()) {
        if (s.name == name) return &s;
    }
    return nullptr;
}

namespace {

nlohmann::json vec_to_json(const Vec3& v) { return nlohmann::json::array({v.x, v.y, v.z}); }

Vec3 vec_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 3) {
        throw std::invalid_argument("scenario: vectors must be arrays of three numbers");
    }
    return Vec3{j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

nlohmann::json to_json(const ScenarioSpec& spec) {
    nlohmann::json j;
    j["name"] = spec.name;
    j["masses"] = spec.params.masses;
    j["gamma"] = spec.params.gamma;
    j["t0"] = spec.initial.t;
    j["positions"] = nlohmann::json::array();
    for (const Vec3& r : spec.initial.pos) j["positions"].push_back(vec_to_json(r));
    j["velocities"] = nlohmann::json::array();
    for (const Vec3& v : spec.initial.vel) j["velocities"].push_back(vec_to_json(v));
    j["dt0"] = spec.dt0;
    j["t_end"] = spec.t_end;
    j["notes"] = spec.notes;
    return j;
}

ScenarioSpec scenario_from_json(const nlohmann::json& j) {
    try {
        if (!j.is_object()) {
            throw std::invalid_argument("scenario document must be a JSON object");
        }
        ScenarioSpec spec;
        spec.name = j.at("name").get<std::string>();
        spec.params.masses = j.at("masses").get<std::vector<double>>();
        spec.params.gamma = j.at("gamma").get<double>();
        spec.initial.t = j.value("t0", 0.0);
        for (const auto& item : j.at("positions")) spec.initial.pos.push_back(vec_from_json(item));
        for (const auto& item : j.at("velocities")) spec.initial.vel.push_back(vec_from_json(item));
        spec.dt0 = j.at("dt0").get<double>();
        spec.t_end = j.at("t_end").get<double>();
        spec.notes = j.value("notes", std::string{});
        validate(spec);
        return spec;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string{"scenario document: "} + e.what());
    }
}

}  // namespace nbody
