#include <doctest.h>

#include <cmath>

#include "nbody/integrator.hpp"
#include "nbody/invariants.hpp"
#include "nbody/model.hpp"
#include "nbody/scenario.hpp"
#include "test_helpers.hpp"

using namespace nbody;

namespace {

ExtendedState lagrange_state() {
    const ScenarioSpec tri = lagrange_triangle(1.0);
    return init_extended(tri.initial, tri.params);
}

/// Two-body helper with an idle spectator at the origin so single-body
/// hand values can be checked under the minimum body count of two.
ExtendedState with_spectator(Vec3 pos, Vec3 vel, double t, const Parameters& p) {
    CartesianState c;
    c.t = t;
    c.pos = {pos, {0, 0, 0}};
    c.vel = {vel, {0, 0, 0}};
    return init_extended(c, p);
}

}  // namespace

TEST_SUITE("invariants") {

TEST_CASE("momentum") {
    const Parameters p2 = Parameters::equal_masses(2);

    // [TRIVIAL] all bodies at rest.
    ExtendedState rest = lagrange_state();
    for (auto& v : rest.vel) v = Vec3{};
    const ScenarioSpec tri = lagrange_triangle(1.0);
    CHECK(momentum(rest, tri.params) == Vec3{});

    // [DERIVED] symmetric rotation: the velocity sum cancels.
    CHECK(norm(momentum(lagrange_state(), tri.params)) <= 1e-15);

    // [TRIVIAL] direct sum of two unit-mass velocities.
    CartesianState c;
    c.pos = {{0, 0, 0}, {1, 0, 0}};
    c.vel = {{1, 0, 0}, {0, 1, 0}};
    const Vec3 P = momentum(init_extended(c, p2), p2);
    CHECK(P.x == 1.0);
    CHECK(P.y == 1.0);
    CHECK(P.z == 0.0);
}

TEST_CASE("angular momentum uses the v cross r orientation") {
    const Parameters p2 = Parameters::equal_masses(2);

    // [TRIVIAL] rest state.
    ExtendedState rest = lagrange_state();
    for (auto& v : rest.vel) v = Vec3{};
    CHECK(angular_momentum(rest, lagrange_triangle(1.0).params) == Vec3{});

    // [DERIVED] unit mass at (1,0,0) with velocity (0,1,0):
    // v x r = (0,1,0) x (1,0,0) = (0,0,-1).
    const ExtendedState s = with_spectator({1, 0, 0}, {0, 1, 0}, 0.0, p2);
    const Vec3 L = angular_momentum(s, p2);
    CHECK(L.x == 0.0);
    CHECK(L.y == 0.0);
    CHECK(L.z == doctest::Approx(-1.0).epsilon(1e-15));

    // [DERIVED] figure-eight start: brute-force sum cancels.
    const ScenarioSpec eight = figure_eight();
    CHECK(norm(angular_momentum(init_extended(eight.initial, eight.params), eight.params)) <=
          1e-10);
}

TEST_CASE("center-of-mass integral") {
    const Parameters p2 = Parameters::equal_masses(2);

    // [TRIVIAL] centered momentum-free configuration at any time.
    ExtendedState tri = lagrange_state();
    tri.t = 3.7;
    CHECK(norm(com_integral(tri, lagrange_triangle(1.0).params)) <= 1e-15);

    // [DERIVED] unit mass at (1,0,0), velocity (1,0,0), t = 2:
    // 1*1 - 2*1 = -1 in the x component.
    const ExtendedState s = with_spectator({1, 0, 0}, {1, 0, 0}, 2.0, p2);
    const Vec3 C = com_integral(s, p2);
    CHECK(C.x == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(C.y == 0.0);

    // [TRIVIAL] at t = 0 the integral is the plain mass-weighted position sum.
    auto rng = testutil::make_rng(31);
    const Parameters p = testutil::random_params(rng, 3);
    ExtendedState r = testutil::random_extended(rng, p);
    r.t = 0.0;
    Vec3 want{};
    for (std::size_t i = 0; i < 3; ++i) want += p.masses[i] * r.pos[i];
    CHECK(norm(com_integral(r, p) - want) <= 1e-15);
}

TEST_CASE("extended-system energy") {
    const ScenarioSpec tri = lagrange_triangle(1.0);

    // [DERIVED] triangle at side 1 with unit speeds: 3*(1/2) - 3*1 = -1.5.
    CHECK(energy_extended(lagrange_state(), tri.params) ==
          doctest::Approx(-1.5).epsilon(1e-13));

    // [TRIVIAL] all at rest with zero reciprocal entries (off-manifold).
    ExtendedState zero = lagrange_state();
    for (auto& v : zero.vel) v = Vec3{};
    for (double& q : zero.recip) q = 0.0;
    CHECK(energy_extended(zero, tri.params) == 0.0);

    // [TRIVIAL] linearity in the reciprocal family: doubling all rho entries
    // adds exactly -gamma * sum m_i m_j rho_ij.
    auto rng = testutil::make_rng(32);
    const Parameters p = testutil::random_params(rng, 3);
    ExtendedState s = testutil::random_extended(rng, p);
    double pot = 0.0;
    for (std::size_t k = 0; k < s.pairs(); ++k) {
        const auto [i, j] = pair_bodies(k, 3);
        pot += p.masses[i] * p.masses[j] * s.recip[k];
    }
    const double before = energy_extended(s, p);
    for (double& q : s.recip) q *= 2.0;
    CHECK(energy_extended(s, p) - before ==
          doctest::Approx(-p.gamma * pot).epsilon(1e-13));
}

TEST_CASE("coordinate energy agrees with the extended form on the manifold") {
    // [DERIVED] rho_ij = 1/|r_i - r_j| makes the two forms coincide.
    CHECK(energy_cartesian(lagrange_state(), lagrange_triangle(1.0).params) ==
          doctest::Approx(-1.5).epsilon(1e-13));

    // [DERIVED] two unit masses at rest at distance 2: -1*1/2.
    const Parameters p2 = Parameters::equal_masses(2);
    CartesianState c;
    c.pos = {{0, 0, 0}, {2, 0, 0}};
    c.vel = {{0, 0, 0}, {0, 0, 0}};
    CHECK(energy_cartesian(c, p2) == doctest::Approx(-0.5).epsilon(1e-15));

    // [TRIVIAL] single pair at unit distance, at rest: -gamma.
    const Parameters hot{{1.0, 1.0}, 1.7};
    c.pos = {{0, 0, 0}, {1, 0, 0}};
    CHECK(energy_cartesian(c, hot) == doctest::Approx(-1.7).epsilon(1e-15));

    // Property form over random states.
    auto rng = testutil::make_rng(33);
    for (int trial = 0; trial < 100; ++trial) {
        const Parameters p = testutil::random_params(rng, 3);
        const CartesianState rc = testutil::random_cartesian(rng, 3);
        const double ec = energy_cartesian(rc, p);
        const double ee = energy_extended(init_extended(rc, p), p);
        CHECK(std::abs(ec - ee) <= 1e-13 * std::max(1.0, std::abs(ec)));
    }
}

TEST_CASE("constraint residuals") {
    // [TRIVIAL] on-manifold states have zero residuals.
    auto rng = testutil::make_rng(34);
    const Parameters p = testutil::random_params(rng, 3);
    const ConstraintResiduals on = constraint_residuals(testutil::random_extended(rng, p));
    CHECK(on.max_dist <= 1e-13);
    CHECK(on.max_recip <= 1e-14);

    // [DERIVED] stored distance 2 against true separation 1: 4 - 1 = 3.
    const Parameters p2 = Parameters::equal_masses(2);
    CartesianState c;
    c.pos = {{0, 0, 0}, {1, 0, 0}};
    c.vel = {{0, 0, 0}, {0, 0, 0}};
    ExtendedState s = init_extended(c, p2);
    s.dist[0] = 2.0;
    ConstraintResiduals res = constraint_residuals(s);
    CHECK(res.dist[0] == doctest::Approx(3.0).epsilon(1e-15));

    // [TRIVIAL] product form: 2 * 0.5 - 1 = 0.
    s.recip[0] = 0.5;
    res = constraint_residuals(s);
    CHECK(res.recip[0] == 0.0);
}

TEST_CASE("evaluate_invariants bundles the individual evaluations") {
    // [DERIVED] composition of the prior hand values.
    const ScenarioSpec tri = lagrange_triangle(1.0);
    const InvariantVector v = evaluate_invariants(lagrange_state(), tri.params);
    CHECK(norm(v.momentum) <= 1e-15);
    CHECK(v.energy_extended == doctest::Approx(-1.5).epsilon(1e-13));
    CHECK(v.max_constraint_dist() <= 1e-14);
    CHECK(v.max_constraint_recip() <= 1e-14);

    // [DERIVED] figure-eight start has vanishing momentum.
    const ScenarioSpec eight = figure_eight();
    const InvariantVector w =
        evaluate_invariants(init_extended(eight.initial, eight.params), eight.params);
    CHECK(norm(w.momentum) <= 1e-10);
}

TEST_CASE("drift records absolute deviations and their maximum") {
    auto rng = testutil::make_rng(35);
    const Parameters p = testutil::random_params(rng, 3);
    const ExtendedState s = testutil::random_extended(rng, p);
    const InvariantVector ref = evaluate_invariants(s, p);

    // [TRIVIAL] identical vectors: the signed deltas vanish exactly; the
    // constraint columns report the current residual maxima (reference
    // value zero by convention), which sit at rounding level here.
    DriftRecord d = drift(ref, ref, s.t);
    CHECK(norm(d.d_momentum) == 0.0);
    CHECK(norm(d.d_angular_momentum) == 0.0);
    CHECK(norm(d.d_com) == 0.0);
    CHECK(d.d_energy == 0.0);
    CHECK(d.max_c_dist == ref.max_constraint_dist());
    CHECK(d.max_c_recip == ref.max_constraint_recip());
    CHECK(d.max_drift <= 1e-14);
    CHECK(d.compute_max() == d.max_drift);
    CHECK(d.t == s.t);

    // [TRIVIAL] a lone energy deviation dominates.
    InvariantVector bumped = ref;
    bumped.energy_extended += 1e-4;
    d = drift(ref, bumped, 1.0);
    CHECK(std::abs(d.d_energy) == doctest::Approx(1e-4).epsilon(1e-12));
    CHECK(d.max_drift == doctest::Approx(1e-4).epsilon(1e-9));

    // [DERIVED] one tightly solved symmetric implicit step conserves every
    // quadratic invariant to solver tolerance.
    IterationConfig cfg;
    cfg.residual_tol = 1e-14;
    cfg.max_iters = 200;
    const StepResult r = midpoint_step(s, 0.05, p, cfg);
    REQUIRE(r.stats.status == StepStatus::converged);
    d = drift(ref, evaluate_invariants(r.state, p), r.state.t);
    CHECK(d.max_drift <= 1e-11);
}

TEST_CASE("merge_max keeps the componentwise worst case") {
    // [TRIVIAL]
    DriftRecord a;
    a.t = 1.0;
    a.d_momentum = {1e-9, 0, 0};
    a.d_energy = -3e-7;
    a.max_c_dist = 1e-12;
    a.max_drift = a.compute_max();
    DriftRecord b;
    b.t = 2.0;
    b.d_momentum = {2e-10, 5e-9, 0};
    b.d_energy = 1e-8;
    b.max_c_recip = 4e-11;
    b.max_drift = b.compute_max();
    const DriftRecord m = merge_max(a, b);
    CHECK(m.t == 2.0);
    CHECK(m.d_momentum.x == doctest::Approx(1e-9));
    CHECK(m.d_momentum.y == doctest::Approx(5e-9));
    CHECK(m.d_energy == doctest::Approx(3e-7));
    CHECK(m.max_c_dist == doctest::Approx(1e-12));
    CHECK(m.max_c_recip == doctest::Approx(4e-11));
    CHECK(m.max_drift == m.compute_max());
}

TEST_CASE("max_component_change covers every field") {
    // [TRIVIAL]
    auto rng = testutil::make_rng(36);
    const Parameters p = testutil::random_params(rng, 3);
    const InvariantVector a = evaluate_invariants(testutil::random_extended(rng, p), p);
    InvariantVector b = a;
    CHECK(max_component_change(a, b) == 0.0);
    b.constraint_recip[1] += 5e-3;
    CHECK(max_component_change(a, b) == doctest::Approx(5e-3).epsilon(1e-12));
    b = a;
    b.energy_cartesian -= 7e-2;
    CHECK(max_component_change(a, b) == doctest::Approx(7e-2).epsilon(1e-12));
}

TEST_CASE("component view: counts, labels and values line up") {
    // [TRIVIAL]
    const std::size_t n = 3;
    CHECK(quadratic_invariant_count(n) == 16);        // 10 + 2 * 3 pairs
    CHECK(invariant_component_count(n) == 17);        // + the diagnostic energy
    const auto names = invariant_component_names(n);
    CHECK(names.size() == 17);
    CHECK(names.front() == "p_x");
    CHECK(names[9] == "E_ext");
    CHECK(names.back() == "E_cart");

    auto rng = testutil::make_rng(37);
    const Parameters p = testutil::random_params(rng, n);
    const ExtendedState s = testutil::random_extended(rng, p);
    const InvariantVector v = evaluate_invariants(s, p);
    const std::vector<double> comp = invariant_components(s, p);
    CHECK(comp.size() == 17);
    CHECK(comp[0] == v.momentum.x);
    CHECK(comp[9] == v.energy_extended);
    CHECK(comp[16] == v.energy_cartesian);
}

TEST_CASE("analytic conservation: every gradient is orthogonal to the flow") {
    // [DERIVED] each quadratic invariant satisfies grad(I) . F = 0 as an
    // algebraic identity of the extended right-hand side, on or off the
    // constraint manifold; the diagnostic coordinate energy is conserved on
    // the manifold only.
    auto rng = testutil::make_rng(38);
    for (int trial = 0; trial < 60; ++trial) {
        const Parameters p = testutil::random_params(rng, 3);
        const bool on_manifold = trial % 2 == 0;
        const ExtendedState s = on_manifold ? testutil::random_extended(rng, p)
                                            : testutil::random_off_manifold(rng, p);
        const std::vector<double> F = to_flat(rhs_extended(s, p));
        const double scale = invariant_scale(s, p);
        const std::size_t upto = on_manifold ? invariant_component_count(3)
                                             : quadratic_invariant_count(3);
        for (std::size_t k = 0; k < upto; ++k) {
            const std::vector<double> g = invariant_gradient(s, p, k);
            double dir = 0.0;
            for (std::size_t m = 0; m < g.size(); ++m) dir += g[m] * F[m];
            CHECK(std::abs(dir) <= 1e-12 * scale);
        }
    }
}

TEST_CASE("analytic gradients match central finite differences") {
    // [DERIVED] central differences are exact for quadratics up to rounding;
    // the diagnostic energy has a genuine third-order term but stays within
    // the stated relative agreement at h = 1e-6.
    auto rng = testutil::make_rng(39);
    const double h = 1e-6;
    for (int trial = 0; trial < 10; ++trial) {
        const Parameters p = testutil::random_params(rng, 3);
        const ExtendedState s = testutil::random_extended(rng, p);
        const std::vector<double> flat = to_flat(s);
        for (std::size_t k = 0; k < invariant_component_count(3); ++k) {
            const std::vector<double> g = invariant_gradient(s, p, k);
            double gmax = 1.0;
            for (double x : g) gmax = std::max(gmax, std::abs(x));
            for (std::size_t m = 0; m < flat.size(); ++m) {
                std::vector<double> up = flat;
                std::vector<double> dn = flat;
                up[m] += h;
                dn[m] -= h;
                const double fd = (invariant_components(from_flat(up, 3), p)[k] -
                                   invariant_components(from_flat(dn, 3), p)[k]) /
                                  (2.0 * h);
                CHECK(std::abs(fd - g[m]) <= 1e-6 * gmax);
            }
        }
    }
}

TEST_CASE("every invariant is a polynomial of degree at most two") {
    // [DERIVED] structural check: for a degree-<=2 function the second
    // difference I(A) + I(B) - 2 I((A+B)/2) depends only on A - B, so it is
    // unchanged when both states are shifted by the same displacement.
    auto rng = testutil::make_rng(40);
    std::uniform_real_distribution<double> small(-0.3, 0.3);
    for (int trial = 0; trial < 20; ++trial) {
        const Parameters p = testutil::random_params(rng, 3);
        const std::vector<double> A = to_flat(testutil::random_off_manifold(rng, p));
        const std::vector<double> B = to_flat(testutil::random_off_manifold(rng, p));
        std::vector<double> C(A.size());
        for (double& x : C) x = small(rng);

        const auto second_difference = [&](const std::vector<double>& a,
                                           const std::vector<double>& b) {
            std::vector<double> mid(a.size());
            for (std::size_t m = 0; m < a.size(); ++m) mid[m] = 0.5 * (a[m] + b[m]);
            const auto ia = invariant_components(from_flat(a, 3), p);
            const auto ib = invariant_components(from_flat(b, 3), p);
            const auto im = invariant_components(from_flat(mid, 3), p);
            std::vector<double> out(ia.size());
            for (std::size_t k = 0; k < ia.size(); ++k) out[k] = ia[k] + ib[k] - 2.0 * im[k];
            return out;
        };

        std::vector<double> As(A.size());
        std::vector<double> Bs(B.size());
        for (std::size_t m = 0; m < A.size(); ++m) {
            As[m] = A[m] + C[m];
            Bs[m] = B[m] + C[m];
        }
        const std::vector<double> base = second_difference(A, B);
        const std::vector<double> moved = second_difference(As, Bs);
        for (std::size_t k = 0; k < quadratic_invariant_count(3); ++k) {
            CHECK(std::abs(base[k] - moved[k]) <= 1e-10);
        }
    }
}

}  // TEST_SUITE
