#pragma once

#include "nbody/state.hpp"

namespace nbody {

/// Smallest pair separation allowed before the model reports a singular
/// configuration instead of producing overflowing accelerations.
inline constexpr double kMinSeparation = 1e-12;

/// Lifts a plain phase point into the quadratized system by computing every
/// pair distance r_ij = |r_i - r_j| and its reciprocal rho_ij = 1 / r_ij.
/// Throws SingularConfiguration when two bodies are closer than
/// kMinSeparation.
ExtendedState init_extended(const CartesianState& s, const Parameters& p);

/// Drops the auxiliary pair variables.
CartesianState project_cartesian(const ExtendedState& s);

/// Classical equations of motion: accelerations from inverse-square forces
/// evaluated directly from coordinates. Throws SingularConfiguration on a
/// near-collision.
CartesianDerivative rhs_cartesian(const CartesianState& s, const Parameters& p);

/// Right-hand side of the quadratized system. All divisions use the stored
/// pair variables only:
///   dr_i/dt   = v_i
///   dv_i/dt   = sum_j gamma m_j rho_ij / r_ij^2 (r_j - r_i)
///   dr_ij/dt  = (r_i - r_j) . (v_i - v_j) / r_ij
///   drho_ij/dt = -rho_ij (r_i - r_j) . (v_i - v_j) / r_ij^2
///   dt/dt     = 1
/// Throws SingularConfiguration when a stored r_ij is below kMinSeparation.
ExtendedDerivative rhs_extended(const ExtendedState& s, const Parameters& p);

/// Intermediate form: accelerations use the stored distances as r_ij^{-3}
/// but the reciprocal variables are carried along with zero derivative.
/// Exists to cross-check rhs_extended on the constraint manifold.
ExtendedDerivative rhs_rationalized(const ExtendedState& s, const Parameters& p);

}  // namespace nbody
