#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "nbody/state.hpp"

namespace nbody {

/// A named initial-value problem: masses, starting phase point, and the
/// default step / end time it is normally run with.
struct ScenarioSpec {
    std::string name;
    Parameters params;
    CartesianState initial;
    double dt0 = 0.1;
    double t_end = 1.0;
    std::string notes;

    friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

/// Throws std::invalid_argument unless the parameters validate, the body
/// counts agree, dt0 > 0, t_end >= 0 and no two bodies coincide.
void validate(const ScenarioSpec& spec);

/// Three equal masses at the vertices of an equilateral triangle of side a
/// (one vertex on the +y axis, centroid at the origin), with tangential
/// velocities for counterclockwise rigid rotation at angular speed
/// omega = sqrt(3 gamma m / a^3). An exact relative equilibrium: pairwise
/// distances stay constant and each acceleration is -omega^2 times the
/// position. Defaults: a = 1, dt0 = 1/10, t_end = 1. Requires a > 0.
ScenarioSpec lagrange_triangle(double a = 1.0, double mass = 1.0, double gamma = 1.0);

/// Angular speed of the rigid rotation above.
double lagrange_angular_speed(double a = 1.0, double mass = 1.0, double gamma = 1.0);

/// Exact state of the rotating-triangle scenario at time t (rigid rotation
/// of the initial configuration).
CartesianState lagrange_exact_state(const ScenarioSpec& spec, double omega, double t);

/// Three equal unit masses on the planar figure-eight choreography: bodies
/// 1 and 2 at +/-(0.97000436, -0.24308753, 0), body 3 at the origin with
/// velocity (-0.93240737, -0.86473146, 0), bodies 1 and 2 each moving at
/// minus half of body 3's velocity. Total momentum and angular momentum are
/// exactly zero by construction. Defaults: dt0 = 1/10, t_end = 200.
ScenarioSpec figure_eight();

/// Period of the figure-eight choreography (literature value, used by the
/// near-periodicity self-check).
double figure_eight_period();

/// Three unit masses on the x-axis: body 1 at the origin at rest, body 2 at
/// x = +1 with velocity (0, 1, 0), body 3 at x = -1 with velocity
/// (0, 1.5 + v3_boost, 0). The unperturbed run passes through close
/// encounters that force step reduction. Defaults: dt0 = 6e-3, t_end = 2.
/// Requires v3_boost >= 0.
ScenarioSpec collision_line(double v3_boost = 0.0);

/// Copy of `spec` with dv added to the velocity of one body (0-based index).
/// Throws std::out_of_range for an invalid index.
ScenarioSpec perturb(const ScenarioSpec& spec, std::size_t body, const Vec3& dv);

/// All built-in scenarios, in listing order: lagrange, eight, collision,
/// collision-perturbed.
const std::vector<ScenarioSpec>& builtin_scenarios();

/// Built-in lookup by name; nullptr when the name is unknown.
const ScenarioSpec* find_builtin(const std::string& name);

/// JSON form used by config files and the machine-readable listing:
/// {name, masses, gamma, t0, positions, velocities, dt0, t_end, notes}.
nlohmann::json to_json(const ScenarioSpec& spec);

/// Parses the JSON form; throws std::invalid_argument on missing/ill-typed
/// fields or a spec that fails validate().
ScenarioSpec scenario_from_json(const nlohmann::json& j);

}  // namespace nbody
