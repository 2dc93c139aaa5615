#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>

#include "nbody/invariants.hpp"
#include "nbody/model.hpp"
#include "nbody/state.hpp"
#include "nbody/tableau.hpp"

namespace nbody {

/// Controls the fixed-point solve of one implicit step and the acceptance
/// policy of an adaptive run.
struct IterationConfig {
    std::size_t max_iters = 50;    // fixed-point iteration cap per step
    double residual_tol = 1e-12;   // stop when stage updates fall below this
    double drift_tol = 1e-8;       // invariant-increment corridor for acceptance
    std::size_t max_halvings = 20; // total step halvings allowed in a run
};

/// Throws std::invalid_argument unless all tolerances and counts are positive.
void validate(const IterationConfig& cfg);

enum class StepStatus {
    converged,  // stage equations solved to residual_tol
    diverged,   // iteration failed to contract within max_iters
    singular,   // a stage evaluation hit a near-collision or overflowed
};

std::string to_string(StepStatus status);

struct StepStats {
    StepStatus status = StepStatus::converged;
    std::size_t iterations = 0;
    double final_residual = 0.0;    // last fixed-point update max-norm
    double drift_after_step = 0.0;  // see the producing operation for meaning
    double dt_used = 0.0;
    std::size_t halvings = 0;       // halvings charged to the run so far
};

struct StepResult {
    ExtendedState state;
    StepStats stats;
};

/// One s-stage Runge-Kutta step solved by simple fixed-point iteration:
/// stage slopes start at K_i = f(s0) and are resubstituted into
/// K_i = f(s0 + dt sum_j A_ij K_j) until the largest stage update falls
/// below residual_tol. The result is s0 + dt sum_i b_i K_i.
///
/// Accepts any dt (dt = 0 returns s0 after one iteration; negative dt steps
/// backwards). Never throws on solver trouble: a near-collision or overflow
/// during iteration yields status `singular`, failure to contract yields
/// `diverged`, and in both cases `state` is s0 unchanged.
/// stats.drift_after_step holds the largest absolute change of any invariant
/// component across the step (meaningful only when converged).
StepResult implicit_rk_step(const ExtendedState& s0, double dt, const ButcherTableau& tab,
                            const Parameters& p, const IterationConfig& cfg = {});

/// implicit_rk_step with the one-stage symmetric tableau (order 2).
StepResult midpoint_step(const ExtendedState& s0, double dt, const Parameters& p,
                         const IterationConfig& cfg = {});

/// Classical explicit fourth-order step on the plain equations of motion.
/// Throws SingularConfiguration when a stage evaluation hits a
/// near-collision.
CartesianState rk4_step(const CartesianState& c0, double dt, const Parameters& p);

/// Receives every accepted step of a run, in order.
using StepSink = std::function<void(const ExtendedState&, const StepStats&)>;

/// Aggregate outcome of a run. max_drift holds the componentwise worst
/// absolute deviation from the run-start invariants over all accepted steps.
struct RunSummary {
    std::size_t steps_accepted = 0;
    std::size_t steps_rejected = 0;  // halved-and-retried attempts
    std::size_t halvings = 0;
    double min_dt_used = 0.0;        // 0 when no step was taken
    DriftRecord max_drift;
    double wall_time_s = 0.0;
    std::optional<std::string> abort_reason;  // set when the run gave up
    ExtendedState final_state;
    InvariantVector reference;       // invariants at the starting state

    bool aborted() const { return abort_reason.has_value(); }
};

/// Integrates s0 to t_end with an implicit scheme, holding every accepted
/// state inside the invariant-drift corridor:
///   - attempt a step of the current dt (shortened to land exactly on t_end);
///   - on solver divergence, a singular stage, or drift beyond cfg.drift_tol
///     relative to the run-start invariants, halve dt and retry (the step
///     size never grows back);
///   - on acceptance, emit (state, stats) to the sink with
///     stats.drift_after_step = current deviation from run-start invariants.
/// Gives up with abort_reason set once cfg.max_halvings is exhausted.
/// t_end == s0.t yields an empty summary with zero steps. Requires a tableau
/// flagged implicit and t_end >= s0.t (throws std::invalid_argument
/// otherwise).
RunSummary adaptive_run(const ExtendedState& s0, double t_end, double dt0,
                        const ButcherTableau& tab, const Parameters& p,
                        const IterationConfig& cfg, const StepSink& sink = {});

/// Integrates the plain equations of motion with fixed-step classical RK4
/// (no acceptance corridor — this is the drift baseline). Each step is
/// lifted to an extended state to monitor the same invariant deviations and
/// feed the same sink; the lift defines the auxiliary pair variables from
/// coordinates, so both constraint columns stay zero by construction.
/// Aborts (abort_reason set) if a step hits a near-collision.
RunSummary rk4_run(const CartesianState& c0, double t_end, double dt,
                   const Parameters& p, const StepSink& sink = {});

}  // namespace nbody
