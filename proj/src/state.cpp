#include "nbody/state.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace nbody {

Parameters Parameters::equal_masses(std::size_t n, double mass, double gamma) {
    Parameters p;
    p.masses.assign(n, mass);
    p.gamma = gamma;
    return p;
}

void validate(const Parameters& p) {
    if (p.n() < 2) {
        throw std::invalid_argument("parameters: need at least two bodies");
    }
    if (!(p.gamma > 0.0)) {
        throw std::invalid_argument("parameters: gravitational constant must be positive");
    }
    for (double m : p.masses) {
        if (!(m > 0.0)) {
            throw std::invalid_argument("parameters: every mass must be positive");
        }
    }
}

std::size_t pair_index(std::size_t i, std::size_t j, std::size_t n) {
    if (i == j || i >= n || j >= n) {
        throw std::out_of_range("pair_index: need two distinct body indices below n");
    }
    if (i > j) std::swap(i, j);
    // Rank of (i, j) in the row-major listing (0,1), (0,2), ..., (n-2,n-1):
    // all pairs with first index < i come first, then (i,i+1)..(i,j).
    return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

std::pair<std::size_t, std::size_t> pair_bodies(std::size_t slot, std::size_t n) {
    if (slot >= pair_count(n)) {
        throw std::out_of_range("pair_bodies: slot out of range");
    }
    std::size_t i = 0;
    std::size_t row = n - 1;  // pairs whose first body is i
    while (slot >= row) {
        slot -= row;
        ++i;
        --row;
    }
    return {i, i + 1 + slot};
}

bool same_shape(const ExtendedState& a, const ExtendedState& b) {
    return a.pos.size() == b.pos.size() && a.vel.size() == b.vel.size() &&
           a.dist.size() == b.dist.size() && a.recip.size() == b.recip.size();
}

namespace {

void require_same_shape(const ExtendedState& a, const ExtendedState& b) {
    if (!same_shape(a, b)) {
        throw std::invalid_argument("extended states have mismatched shapes");
    }
}

void require_same_shape(const CartesianState& a, const CartesianState& b) {
    if (a.pos.size() != b.pos.size() || a.vel.size() != b.vel.size()) {
        throw std::invalid_argument("states have mismatched shapes");
    }
}

}  // namespace

void add_scaled(ExtendedState& y, double c, const ExtendedState& d) {
    require_same_shape(y, d);
    y.t += c * d.t;
    for (std::size_t i = 0; i < y.pos.size(); ++i) y.pos[i] += c * d.pos[i];
    for (std::size_t i = 0; i < y.vel.size(); ++i) y.vel[i] += c * d.vel[i];
    for (std::size_t k = 0; k < y.dist.size(); ++k) y.dist[k] += c * d.dist[k];
    for (std::size_t k = 0; k < y.recip.size(); ++k) y.recip[k] += c * d.recip[k];
}

void add_scaled(CartesianState& y, double c, const CartesianState& d) {
    require_same_shape(y, d);
    y.t += c * d.t;
    for (std::size_t i = 0; i < y.pos.size(); ++i) y.pos[i] += c * d.pos[i];
    for (std::size_t i = 0; i < y.vel.size(); ++i) y.vel[i] += c * d.vel[i];
}

namespace {

double vec_gap(const Vec3& a, const Vec3& b) {
    return std::max({std::abs(a.x - b.x), std::abs(a.y - b.y), std::abs(a.z - b.z)});
}

}  // namespace

double max_abs_delta(const ExtendedState& a, const ExtendedState& b) {
    require_same_shape(a, b);
    double m = std::abs(a.t - b.t);
    for (std::size_t i = 0; i < a.pos.size(); ++i) m = std::max(m, vec_gap(a.pos[i], b.pos[i]));
    for (std::size_t i = 0; i < a.vel.size(); ++i) m = std::max(m, vec_gap(a.vel[i], b.vel[i]));
    for (std::size_t k = 0; k < a.dist.size(); ++k)
        m = std::max(m, std::abs(a.dist[k] - b.dist[k]));
    for (std::size_t k = 0; k < a.recip.size(); ++k)
        m = std::max(m, std::abs(a.recip[k] - b.recip[k]));
    return m;
}

double max_abs_delta(const CartesianState& a, const CartesianState& b) {
    require_same_shape(a, b);
    double m = std::abs(a.t - b.t);
    for (std::size_t i = 0; i < a.pos.size(); ++i) m = std::max(m, vec_gap(a.pos[i], b.pos[i]));
    for (std::size_t i = 0; i < a.vel.size(); ++i) m = std::max(m, vec_gap(a.vel[i], b.vel[i]));
    return m;
}

double max_abs(const ExtendedState& s) {
    double m = std::abs(s.t);
    for (const Vec3& v : s.pos) m = std::max({m, std::abs(v.x), std::abs(v.y), std::abs(v.z)});
    for (const Vec3& v : s.vel) m = std::max({m, std::abs(v.x), std::abs(v.y), std::abs(v.z)});
    for (double r : s.dist) m = std::max(m, std::abs(r));
    for (double q : s.recip) m = std::max(m, std::abs(q));
    return m;
}

std::size_t flat_size(std::size_t n) { return 1 + 6 * n + 2 * pair_count(n); }

std::vector<double> to_flat(const ExtendedState& s) {
    std::vector<double> v;
    v.reserve(flat_size(s.n()));
    v.push_back(s.t);
    for (const Vec3& r : s.pos) {
        v.push_back(r.x);
        v.push_back(r.y);
        v.push_back(r.z);
    }
    for (const Vec3& u : s.vel) {
        v.push_back(u.x);
        v.push_back(u.y);
        v.push_back(u.z);
    }
    v.insert(v.end(), s.dist.begin(), s.dist.end());
    v.insert(v.end(), s.recip.begin(), s.recip.end());
    return v;
}

ExtendedState from_flat(const std::vector<double>& v, std::size_t n) {
    if (v.size() != flat_size(n)) {
        throw std::invalid_argument("from_flat: vector length does not match body count");
    }
    ExtendedState s;
    std::size_t k = 0;
    s.t = v[k++];
    s.pos.resize(n);
    for (Vec3& r : s.pos) {
        r.x = v[k++];
        r.y = v[k++];
        r.z = v[k++];
    }
    s.vel.resize(n);
    for (Vec3& u : s.vel) {
        u.x = v[k++];
        u.y = v[k++];
        u.z = v[k++];
    }
    const std::size_t pairs = pair_count(n);
    s.dist.assign(v.begin() + static_cast<std::ptrdiff_t>(k),
                  v.begin() + static_cast<std::ptrdiff_t>(k + pairs));
    k += pairs;
    s.recip.assign(v.begin() + static_cast<std::ptrdiff_t>(k),
                   v.begin() + static_cast<std::ptrdiff_t>(k + pairs));
    return s;
}

}  // namespace nbody
