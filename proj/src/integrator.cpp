#include "nbody/integrator.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>
#include <vector>

namespace nbody {

void validate(const IterationConfig& cfg) {
    if (cfg.max_iters == 0) {
        throw std::invalid_argument("iteration config: max_iters must be positive");
    }
    if (!(cfg.residual_tol > 0.0)) {
        throw std::invalid_argument("iteration config: residual_tol must be positive");
    }
    if (!(cfg.drift_tol > 0.0)) {
        throw std::invalid_argument("iteration config: drift_tol must be positive");
    }
    if (cfg.max_halvings == 0) {
        throw std::invalid_argument("iteration config: max_halvings must be positive");
    }
}

std::string to_string(StepStatus status) {
    switch (status) {
        case StepStatus::converged: return "converged";
        case StepStatus::diverged: return "diverged";
        case StepStatus::singular: return "singular";
    }
    return "unknown";
}

StepResult implicit_rk_step(const ExtendedState& s0, double dt, const ButcherTableau& tab,
                            const Parameters& p, const IterationConfig& cfg) {
    validate(cfg);
    const std::size_t ns = tab.stages;
    if (ns == 0 || tab.a.size() != ns * ns || tab.b.size() != ns) {
        throw std::invalid_argument("malformed tableau");
    }
    StepResult out{s0, {}};
    out.stats.dt_used = dt;
    out.stats.status = StepStatus::diverged;
    try {
        const InvariantVector inv0 = evaluate_invariants(s0, p);
        const ExtendedDerivative f0 = rhs_extended(s0, p);
        std::vector<ExtendedDerivative> slopes(ns, f0);
        std::vector<ExtendedDerivative> next_slopes(ns, f0);
        bool converged = false;
        double residual = std::numeric_limits<double>::infinity();
        std::size_t iters = 0;
        while (iters < cfg.max_iters) {
            ++iters;
            double update = 0.0;
            for (std::size_t i = 0; i < ns; ++i) {
                ExtendedState stage = s0;
                for (std::size_t j = 0; j < ns; ++j) {
                    const double a = tab.A(i, j);
                    if (a != 0.0) add_scaled(stage, dt * a, slopes[j]);
                }
                next_slopes[i] = rhs_extended(stage, p);
                update = std::max(update, max_abs_delta(next_slopes[i], slopes[i]));
            }
            slopes.swap(next_slopes);
            residual = update;
            if (!std::isfinite(update)) break;  // blow-up: report divergence
            // NaN-proof ordering: only this comparison can end the loop early.
            if (update <= cfg.residual_tol) {
                converged = true;
                break;
            }
        }
        out.stats.iterations = iters;
        out.stats.final_residual = residual;
        if (!converged) return out;  // state stays s0, status diverged
        ExtendedState next = s0;
        for (std::size_t i = 0; i < ns; ++i) add_scaled(next, dt * tab.b[i], slopes[i]);
        out.stats.drift_after_step = max_component_change(inv0, evaluate_invariants(next, p));
        out.stats.status = StepStatus::converged;
        out.state = std::move(next);
        return out;
    } catch (const SingularConfiguration&) {
        out.state = s0;
        out.stats.status = StepStatus::singular;
        return out;
    }
}

StepResult midpoint_step(const ExtendedState& s0, double dt, const Parameters& p,
                         const IterationConfig& cfg) {
    return implicit_rk_step(s0, dt, midpoint_tableau(), p, cfg);
}

CartesianState rk4_step(const CartesianState& c0, double dt, const Parameters& p) {
    const CartesianDerivative k1 = rhs_cartesian(c0, p);
    CartesianState s2 = c0;
    add_scaled(s2, 0.5 * dt, k1);
    const CartesianDerivative k2 = rhs_cartesian(s2, p);
    CartesianState s3 = c0;
    add_scaled(s3, 0.5 * dt, k2);
    const CartesianDerivative k3 = rhs_cartesian(s3, p);
    CartesianState s4 = c0;
    add_scaled(s4, dt, k3);
    const CartesianDerivative k4 = rhs_cartesian(s4, p);
    CartesianState next = c0;
    add_scaled(next, dt / 6.0, k1);
    add_scaled(next, dt / 3.0, k2);
    add_scaled(next, dt / 3.0, k3);
    add_scaled(next, dt / 6.0, k4);
    return next;
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

RunSummary adaptive_run(const ExtendedState& s0, double t_end, double dt0,
                        const ButcherTableau& tab, const Parameters& p,
                        const IterationConfig& cfg, const StepSink& sink) {
    validate(cfg);
    if (!tab.implicit) {
        throw std::invalid_argument("adaptive_run requires an implicit scheme");
    }
    if (!(dt0 > 0.0)) {
        throw std::invalid_argument("adaptive_run: dt0 must be positive");
    }
    const auto clock0 = std::chrono::steady_clock::now();
    RunSummary sum;
    sum.reference = evaluate_invariants(s0, p);
    sum.final_state = s0;
    const double eps_time = 1e-12 * std::max(1.0, std::abs(t_end));
    if (t_end < s0.t - eps_time) {
        throw std::invalid_argument("adaptive_run: t_end precedes the starting time");
    }
    ExtendedState cur = s0;
    double dt = dt0;
    while (cur.t < t_end - eps_time) {
        const double remaining = t_end - cur.t;
        // Land exactly on t_end; the slack absorbs rounding of the time sums.
        const bool lands = remaining <= dt * (1.0 + 1e-9);
        const double step_dt = lands ? remaining : dt;
        StepResult r = implicit_rk_step(cur, step_dt, tab, p, cfg);
        bool ok = (r.stats.status == StepStatus::converged);
        DriftRecord d;
        if (ok) {
            if (lands) r.state.t = t_end;  // within rounding of the update already
            try {
                d = drift(sum.reference, evaluate_invariants(r.state, p), r.state.t);
            } catch (const SingularConfiguration&) {
                ok = false;
                r.stats.status = StepStatus::singular;
            }
        }
        if (ok && !(d.max_drift <= cfg.drift_tol)) ok = false;  // NaN drift rejects too
        if (!ok) {
            ++sum.steps_rejected;
            if (sum.halvings >= cfg.max_halvings) {
                std::ostringstream reason;
                reason << "step at t=" << cur.t << " rejected (" << to_string(r.stats.status);
                if (r.stats.status == StepStatus::converged) {
                    reason << ", drift " << d.max_drift << " above corridor " << cfg.drift_tol;
                }
                reason << ") with all " << cfg.max_halvings
                       << " halvings spent; configuration is likely near a collision";
                sum.abort_reason = reason.str();
                break;
            }
            dt *= 0.5;
            ++sum.halvings;
            continue;
        }
        r.stats.drift_after_step = d.max_drift;
        r.stats.halvings = sum.halvings;
        cur = std::move(r.state);
        ++sum.steps_accepted;
        sum.min_dt_used =
            (sum.steps_accepted == 1) ? step_dt : std::min(sum.min_dt_used, step_dt);
        sum.max_drift = merge_max(sum.max_drift, d);
        if (sink) sink(cur, r.stats);
    }
    sum.final_state = std::move(cur);
    sum.wall_time_s = seconds_since(clock0);
    return sum;
}

RunSummary rk4_run(const CartesianState& c0, double t_end, double dt, const Parameters& p,
                   const StepSink& sink) {
    if (!(dt > 0.0)) {
        throw std::invalid_argument("rk4_run: dt must be positive");
    }
    const auto clock0 = std::chrono::steady_clock::now();
    RunSummary sum;
    {
        const ExtendedState e0 = init_extended(c0, p);
        sum.reference = evaluate_invariants(e0, p);
        sum.final_state = e0;
    }
    const double eps_time = 1e-12 * std::max(1.0, std::abs(t_end));
    if (t_end < c0.t - eps_time) {
        throw std::invalid_argument("rk4_run: t_end precedes the starting time");
    }
    CartesianState cur = c0;
    while (cur.t < t_end - eps_time) {
        const double remaining = t_end - cur.t;
        const bool lands = remaining <= dt * (1.0 + 1e-9);
        const double step_dt = lands ? remaining : dt;
        StepStats stats;
        stats.dt_used = step_dt;
        try {
            CartesianState next = rk4_step(cur, step_dt, p);
            const auto finite = [](const Vec3& v) {
                return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
            };
            for (std::size_t i = 0; i < next.pos.size(); ++i) {
                if (!finite(next.pos[i]) || !finite(next.vel[i])) {
                    throw SingularConfiguration("step produced non-finite coordinates");
                }
            }
            if (lands) next.t = t_end;
            ExtendedState lift = init_extended(next, p);
            const DriftRecord d = drift(sum.reference, evaluate_invariants(lift, p), next.t);
            stats.drift_after_step = d.max_drift;
            cur = std::move(next);
            ++sum.steps_accepted;
            sum.min_dt_used =
                (sum.steps_accepted == 1) ? step_dt : std::min(sum.min_dt_used, step_dt);
            sum.max_drift = merge_max(sum.max_drift, d);
            sum.final_state = lift;
            if (sink) sink(lift, stats);
        } catch (const SingularConfiguration&) {
            std::ostringstream reason;
            reason << "near-collision at t=" << cur.t
                   << "; the fixed-step explicit scheme cannot continue";
            sum.abort_reason = reason.str();
            break;
        }
    }
    sum.wall_time_s = seconds_since(clock0);
    return sum;
}

}  // namespace nbody
