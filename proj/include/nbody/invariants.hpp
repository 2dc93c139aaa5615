#pragma once

#include <string>
#include <vector>

#include "nbody/state.hpp"

namespace nbody {

/// All conserved quantities of the extended system evaluated at one phase
/// point: the ten classical integrals (momentum, angular momentum,
/// center-of-mass integral, energy), the per-pair constraint residuals that
/// tie the auxiliary variables to the coordinates, and — as a diagnostic —
/// the classical energy recomputed from coordinates alone.
struct InvariantVector {
    Vec3 momentum;               // sum_i m_i v_i
    Vec3 angular_momentum;       // sum_i m_i v_i x r_i
    Vec3 com_integral;           // sum_i m_i r_i - t sum_i m_i v_i
    double energy_extended = 0.0;   // kinetic - gamma sum_{i<j} m_i m_j rho_ij
    double energy_cartesian = 0.0;  // kinetic - gamma sum_{i<j} m_i m_j / |r_i - r_j|
    std::vector<double> constraint_dist;   // r_ij^2 - |r_i - r_j|^2 per pair
    std::vector<double> constraint_recip;  // r_ij rho_ij - 1 per pair

    double max_constraint_dist() const;
    double max_constraint_recip() const;
};

Vec3 momentum(const ExtendedState& s, const Parameters& p);
Vec3 angular_momentum(const ExtendedState& s, const Parameters& p);
Vec3 com_integral(const ExtendedState& s, const Parameters& p);

/// Energy of the extended system: potential built from the reciprocal pair
/// variables, one term per unordered pair.
double energy_extended(const ExtendedState& s, const Parameters& p);

/// Energy evaluated directly from coordinates (potential from |r_i - r_j|).
/// Agrees with energy_extended exactly on the constraint manifold; used to
/// monitor schemes that integrate the plain system. Throws
/// SingularConfiguration for coincident bodies.
double energy_cartesian(const CartesianState& s, const Parameters& p);
double energy_cartesian(const ExtendedState& s, const Parameters& p);

/// Per-pair residuals r_ij^2 - |r_i - r_j|^2 and r_ij rho_ij - 1, in pair
/// slot order.
struct ConstraintResiduals {
    std::vector<double> dist;
    std::vector<double> recip;
    double max_dist = 0.0;   // max |dist residual|
    double max_recip = 0.0;  // max |recip residual|
};

ConstraintResiduals constraint_residuals(const ExtendedState& s);

InvariantVector evaluate_invariants(const ExtendedState& s, const Parameters& p);

/// Largest absolute componentwise change between two invariant evaluations
/// of the same-sized system (all fields, per-pair entries included).
double max_component_change(const InvariantVector& a, const InvariantVector& b);

/// Signed componentwise deviation of the integrals at one state relative to
/// reference values, stamped with the time it was measured at. Constraint
/// residuals enter as absolute per-family maxima (their reference value is
/// identically zero for states built by init_extended).
struct DriftRecord {
    double t = 0.0;
    Vec3 d_momentum;
    Vec3 d_angular_momentum;
    Vec3 d_com;
    double d_energy = 0.0;          // extended-system energy deviation
    double max_c_dist = 0.0;        // max |r_ij^2 - |r_i - r_j|^2|
    double max_c_recip = 0.0;       // max |r_ij rho_ij - 1|
    double max_drift = 0.0;         // max over all columns above (absolute)

    /// Recomputes the max_drift aggregate from the other fields.
    double compute_max() const;
};

DriftRecord drift(const InvariantVector& reference, const InvariantVector& current, double t);

/// Componentwise maximum of absolute drifts — running worst case of a run.
DriftRecord merge_max(const DriftRecord& a, const DriftRecord& b);

// ---------------------------------------------------------------------------
// Indexed component view, used by gradient/conservation checks. Components
// are ordered: p_x, p_y, p_z, L_x, L_y, L_z, C_x, C_y, C_z, E_ext,
// then one distance-constraint residual per pair, one reciprocal-constraint
// residual per pair, and finally E_cart. Every component except the last is
// a polynomial of degree <= 2 in the flat coordinates of the state
// (see to_flat), t included.
// ---------------------------------------------------------------------------

/// Components that are quadratic in the flat coordinates: 10 + 2*pair_count.
std::size_t quadratic_invariant_count(std::size_t n);

/// All scalar components including the trailing diagnostic energy.
std::size_t invariant_component_count(std::size_t n);

/// Human-readable component labels, index-aligned with invariant_components.
std::vector<std::string> invariant_component_names(std::size_t n);

/// Values of all components at `s`, in label order.
std::vector<double> invariant_components(const ExtendedState& s, const Parameters& p);

/// Gradient of component k with respect to the flat coordinates of `s`
/// (same length as to_flat(s)).
std::vector<double> invariant_gradient(const ExtendedState& s, const Parameters& p,
                                       std::size_t k);

/// Scale estimate max(1, max |component|) used to normalize conservation
/// residuals.
double invariant_scale(const ExtendedState& s, const Parameters& p);

}  // namespace nbody
