#pragma once

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "nbody/vec3.hpp"

namespace nbody {

/// Raised when a configuration puts two bodies on top of each other (or a
/// stored pair distance at zero), so that a reciprocal-distance term blows up.
struct SingularConfiguration : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Masses m_i and gravitational constant of one problem instance.
struct Parameters {
    std::vector<double> masses;
    double gamma = 1.0;

    std::size_t n() const { return masses.size(); }

    static Parameters equal_masses(std::size_t n, double mass = 1.0, double gamma = 1.0);

    friend bool operator==(const Parameters&, const Parameters&) = default;
};

/// Throws std::invalid_argument unless n >= 2, all masses > 0 and gamma > 0.
void validate(const Parameters& p);

/// Number of unordered body pairs, n(n-1)/2.
constexpr std::size_t pair_count(std::size_t n) { return n * (n - 1) / 2; }

/// Lexicographic rank of the unordered pair {i, j} among all pairs of n
/// bodies: (0,1), (0,2), ..., (n-2,n-1). Symmetric in i and j.
/// Throws std::out_of_range for i == j or indices >= n.
std::size_t pair_index(std::size_t i, std::size_t j, std::size_t n);

/// Inverse of pair_index: the bodies (i, j) with i < j stored at a slot.
/// Throws std::out_of_range for slot >= pair_count(n).
std::pair<std::size_t, std::size_t> pair_bodies(std::size_t slot, std::size_t n);

/// Plain coordinates-and-velocities phase point, plus the time it belongs to.
struct CartesianState {
    double t = 0.0;
    std::vector<Vec3> pos;
    std::vector<Vec3> vel;

    std::size_t n() const { return pos.size(); }

    friend bool operator==(const CartesianState&, const CartesianState&) = default;
};

/// Phase point of the quadratized system: coordinates, velocities, pairwise
/// distances r_ij and reciprocal distances rho_ij. Pair slots are unordered
/// pairs i < j in lexicographic order (see pair_index).
struct ExtendedState {
    double t = 0.0;
    std::vector<Vec3> pos;
    std::vector<Vec3> vel;
    std::vector<double> dist;
    std::vector<double> recip;

    std::size_t n() const { return pos.size(); }
    std::size_t pairs() const { return dist.size(); }

    friend bool operator==(const ExtendedState&, const ExtendedState&) = default;
};

// A time-derivative carries the same layout as the state it differentiates;
// its t component holds the unit derivative of time itself.
using CartesianDerivative = CartesianState;
using ExtendedDerivative = ExtendedState;

bool same_shape(const ExtendedState& a, const ExtendedState& b);

/// y += c * d over every component, t included.
void add_scaled(ExtendedState& y, double c, const ExtendedState& d);
void add_scaled(CartesianState& y, double c, const CartesianState& d);

/// Max-norm distance between two same-shaped states, all components.
double max_abs_delta(const ExtendedState& a, const ExtendedState& b);
double max_abs_delta(const CartesianState& a, const CartesianState& b);

/// Largest absolute component, t included.
double max_abs(const ExtendedState& s);

// Canonical flattening [t, x1,y1,z1,...,zn, u1,...,wn, r_12,...,r_{n-1,n},
// rho_12,...]. This is also the column order of the trajectory CSV and the
// index space of invariant gradients.
std::size_t flat_size(std::size_t n);
std::vector<double> to_flat(const ExtendedState& s);
ExtendedState from_flat(const std::vector<double>& v, std::size_t n);

}  // namespace nbody
