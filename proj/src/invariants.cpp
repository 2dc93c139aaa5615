#include "nbody/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nbody/model.hpp"

namespace nbody {

namespace {

void require_matching(const ExtendedState& s, const Parameters& p) {
    validate(p);
    const std::size_t n = p.n();
    if (s.pos.size() != n || s.vel.size() != n || s.dist.size() != pair_count(n) ||
        s.recip.size() != pair_count(n)) {
        throw std::invalid_argument("extended state does not match parameter body count");
    }
}

double max_abs_of(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

double InvariantVector::max_constraint_dist() const { return max_abs_of(constraint_dist); }
double InvariantVector::max_constraint_recip() const { return max_abs_of(constraint_recip); }

Vec3 momentum(const ExtendedState& s, const Parameters& p) {
    require_matching(s, p);
    Vec3 sum{};
    for (std::size_t i = 0; i < s.n(); ++i) sum += p.masses[i] * s.vel[i];
    return sum;
}

Vec3 angular_momentum(const ExtendedState& s, const Parameters& p) {
    require_matching(s, p);
    Vec3 sum{};
    for (std::size_t i = 0; i < s.n(); ++i) sum += p.masses[i] * cross(s.vel[i], s.pos[i]);
    return sum;
}

Vec3 com_integral(const ExtendedState& s, const Parameters& p) {
    require_matching(s, p);
    Vec3 weighted{};
    Vec3 mom{};
    for (std::size_t i = 0; i < s.n(); ++i) {
        weighted += p.masses[i] * s.pos[i];
        mom += p.masses[i] * s.vel[i];
    }
    return weighted - s.t * mom;
}

double energy_extended(const ExtendedState& s, const Parameters& p) {
    require_matching(s, p);
    double kinetic = 0.0;
    for (std::size_t i = 0; i < s.n(); ++i) kinetic += 0.5 * p.masses[i] * norm2(s.vel[i]);
    double potential = 0.0;
    for (std::size_t i = 0; i < s.n(); ++i) {
        for (std::size_t j = i + 1; j < s.n(); ++j) {
            potential += p.masses[i] * p.masses[j] * s.recip[pair_index(i, j, s.n())];
        }
    }
    return kinetic - p.gamma * potential;
}

double energy_cartesian(const CartesianState& s, const Parameters& p) {
    validate(p);
    if (s.pos.size() != p.n() || s.vel.size() != p.n()) {
        throw std::invalid_argument("state does not match parameter body count");
    }
    double kinetic = 0.0;
    for (std::size_t i = 0; i < s.n(); ++i) kinetic += 0.5 * p.masses[i] * norm2(s.vel[i]);
    double potential = 0.0;
    for (std::size_t i = 0; i < s.n(); ++i) {
        for (std::size_t j = i + 1; j < s.n(); ++j) {
            const double r = norm(s.pos[i] - s.pos[j]);
            if (r < kMinSeparation) {
                throw SingularConfiguration("coincident bodies: pair separation below minimum");
            }
            potential += p.masses[i] * p.masses[j] / r;
        }
    }
    return kinetic - p.gamma * potential;
}

double energy_cartesian(const ExtendedState& s, const Parameters& p) {
    return energy_cartesian(CartesianState{s.t, s.pos, s.vel}, p);
}

ConstraintResiduals constraint_residuals(const ExtendedState& s) {
    const std::size_t n = s.n();
    if (s.dist.size() != pair_count(n) || s.recip.size() != pair_count(n)) {
        throw std::invalid_argument("extended state has mismatched pair storage");
    }
    ConstraintResiduals out;
    out.dist.resize(s.dist.size());
    out.recip.resize(s.recip.size());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const std::size_t k = pair_index(i, j, n);
            out.dist[k] = s.dist[k] * s.dist[k] - norm2(s.pos[i] - s.pos[j]);
            out.recip[k] = s.dist[k] * s.recip[k] - 1.0;
        }
    }
    out.max_dist = max_abs_of(out.dist);
    out.max_recip = max_abs_of(out.recip);
    return out;
}

InvariantVector evaluate_invariants(const ExtendedState& s, const Parameters& p) {
    InvariantVector v;
    v.momentum = momentum(s, p);
    v.angular_momentum = angular_momentum(s, p);
    v.com_integral = com_integral(s, p);
    v.energy_extended = energy_extended(s, p);
    v.energy_cartesian = energy_cartesian(s, p);
    ConstraintResiduals c = constraint_residuals(s);
    v.constraint_dist = std::move(c.dist);
    v.constraint_recip = std::move(c.recip);
    return v;
}

namespace {

double vec_change(const Vec3& a, const Vec3& b) {
    return std::max({std::abs(a.x - b.x), std::abs(a.y - b.y), std::abs(a.z - b.z)});
}

}  // namespace

double max_component_change(const InvariantVector& a, const InvariantVector& b) {
    if (a.constraint_dist.size() != b.constraint_dist.size() ||
        a.constraint_recip.size() != b.constraint_recip.size()) {
        throw std::invalid_argument("invariant vectors come from different-sized systems");
    }
    double m = vec_change(a.momentum, b.momentum);
    m = std::max(m, vec_change(a.angular_momentum, b.angular_momentum));
    m = std::max(m, vec_change(a.com_integral, b.com_integral));
    m = std::max(m, std::abs(a.energy_extended - b.energy_extended));
    m = std::max(m, std::abs(a.energy_cartesian - b.energy_cartesian));
    for (std::size_t k = 0; k < a.constraint_dist.size(); ++k) {
        m = std::max(m, std::abs(a.constraint_dist[k] - b.constraint_dist[k]));
    }
    for (std::size_t k = 0; k < a.constraint_recip.size(); ++k) {
        m = std::max(m, std::abs(a.constraint_recip[k] - b.constraint_recip[k]));
    }
    return m;
}

double DriftRecord::compute_max() const {
    return std::max({std::abs(d_momentum.x), std::abs(d_momentum.y), std::abs(d_momentum.z),
                     std::abs(d_angular_momentum.x), std::abs(d_angular_momentum.y),
                     std::abs(d_angular_momentum.z), std::abs(d_com.x), std::abs(d_com.y),
                     std::abs(d_com.z), std::abs(d_energy), max_c_dist, max_c_recip});
}

DriftRecord drift(const InvariantVector& reference, const InvariantVector& current, double t) {
    DriftRecord d;
    d.t = t;
    d.d_momentum = current.momentum - reference.momentum;
    d.d_angular_momentum = current.angular_momentum - reference.angular_momentum;
    d.d_com = current.com_integral - reference.com_integral;
    d.d_energy = current.energy_extended - reference.energy_extended;
    d.max_c_dist = current.max_constraint_dist();
    d.max_c_recip = current.max_constraint_recip();
    d.max_drift = d.compute_max();
    return d;
}

namespace {

Vec3 abs_max_vec(const Vec3& a, const Vec3& b) {
    return Vec3{std::max(std::abs(a.x), std::abs(b.x)), std::max(std::abs(a.y), std::abs(b.y)),
                std::max(std::abs(a.z), std::abs(b.z))};
}

}  // namespace

DriftRecord merge_max(const DriftRecord& a, const DriftRecord& b) {
    DriftRecord m;
    m.t = std::max(a.t, b.t);
    m.d_momentum = abs_max_vec(a.d_momentum, b.d_momentum);
    m.d_angular_momentum = abs_max_vec(a.d_angular_momentum, b.d_angular_momentum);
    m.d_com = abs_max_vec(a.d_com, b.d_com);
    m.d_energy = std::max(std::abs(a.d_energy), std::abs(b.d_energy));
    m.max_c_dist = std::max(a.max_c_dist, b.max_c_dist);
    m.max_c_recip = std::max(a.max_c_recip, b.max_c_recip);
    m.max_drift = std::max(a.max_drift, b.max_drift);
    return m;
}

// --- indexed component view ------------------------------------------------

namespace {

// Flat-coordinate index helpers, matching to_flat's layout.
std::size_t idx_pos(std::size_t n, std::size_t i, std::size_t axis) {
    (void)n;
    return 1 + 3 * i + axis;
}
std::size_t idx_vel(std::size_t n, std::size_t i, std::size_t axis) {
    return 1 + 3 * n + 3 * i + axis;
}
std::size_t idx_dist(std::size_t n, std::size_t k) { return 1 + 6 * n + k; }
std::size_t idx_recip(std::size_t n, std::size_t k) { return 1 + 6 * n + pair_count(n) + k; }

constexpr std::size_t kScalarHead = 10;  // p (3) + L (3) + C (3) + energy

Vec3 axis_vec(std::size_t a) {
    switch (a) {
        case 0: return Vec3{1.0, 0.0, 0.0};
        case 1: return Vec3{0.0, 1.0, 0.0};
        default: return Vec3{0.0, 0.0, 1.0};
    }
}

void set_vec(std::vector<double>& g, std::size_t base, const Vec3& v) {
    g[base + 0] = v.x;
    g[base + 1] = v.y;
    g[base + 2] = v.z;
}

}  // namespace

std::size_t quadratic_invariant_count(std::size_t n) { return kScalarHead + 2 * pair_count(n); }

std::size_t invariant_component_count(std::size_t n) { return quadratic_invariant_count(n) + 1; }

std::vector<std::string> invariant_component_names(std::size_t n) {
    std::vector<std::string> names = {"p_x", "p_y", "p_z", "L_x", "L_y",
                                      "L_z", "C_x", "C_y", "C_z", "E_ext"};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            names.push_back("c_dist_" + std::to_string(i) + "_" + std::to_string(j));
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            names.push_back("c_recip_" + std::to_string(i) + "_" + std::to_string(j));
        }
    }
    names.push_back("E_cart");
    return names;
}

std::vector<double> invariant_components(const ExtendedState& s, const Parameters& p) {
    InvariantVector v = evaluate_invariants(s, p);
    std::vector<double> out;
    out.reserve(invariant_component_count(s.n()));
    out.insert(out.end(), {v.momentum.x, v.momentum.y, v.momentum.z, v.angular_momentum.x,
                           v.angular_momentum.y, v.angular_momentum.z, v.com_integral.x,
                           v.com_integral.y, v.com_integral.z, v.energy_extended});
    out.insert(out.end(), v.constraint_dist.begin(), v.constraint_dist.end());
    out.insert(out.end(), v.constraint_recip.begin(), v.constraint_recip.end());
    out.push_back(v.energy_cartesian);
    return out;
}

std::vector<double> invariant_gradient(const ExtendedState& s, const Parameters& p,
                                       std::size_t k) {
    require_matching(s, p);
    const std::size_t n = s.n();
    const std::size_t pairs = pair_count(n);
    if (k >= invariant_component_count(n)) {
        throw std::out_of_range("invariant_gradient: component index out of range");
    }
    std::vector<double> g(flat_size(n), 0.0);

    if (k < 3) {  // momentum component k
        for (std::size_t i = 0; i < n; ++i) g[idx_vel(n, i, k)] = p.masses[i];
        return g;
    }
    if (k < 6) {  // angular momentum component a = k - 3, of sum m_i v_i x r_i
        const std::size_t a = k - 3;
        const Vec3 e = axis_vec(a);
        for (std::size_t i = 0; i < n; ++i) {
            // d(v x r)_a / dv = r x e_a, d(v x r)_a / dr = e_a x v.
            set_vec(g, idx_vel(n, i, 0), p.masses[i] * cross(s.pos[i], e));
            set_vec(g, idx_pos(n, i, 0), p.masses[i] * cross(e, s.vel[i]));
        }
        return g;
    }
    if (k < 9) {  // center-of-mass integral component a = k - 6
        const std::size_t a = k - 6;
        double mom_a = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            g[idx_pos(n, i, a)] = p.masses[i];
            g[idx_vel(n, i, a)] = -s.t * p.masses[i];
            mom_a += p.masses[i] * (a == 0 ? s.vel[i].x : a == 1 ? s.vel[i].y : s.vel[i].z);
        }
        g[0] = -mom_a;
        return g;
    }
    if (k == 9) {  // extended-system energy
        for (std::size_t i = 0; i < n; ++i) set_vec(g, idx_vel(n, i, 0), p.masses[i] * s.vel[i]);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                g[idx_recip(n, pair_index(i, j, n))] = -p.gamma * p.masses[i] * p.masses[j];
            }
        }
        return g;
    }
    if (k < kScalarHead + pairs) {  // distance constraint of pair slot k - 10
        const std::size_t slot = k - kScalarHead;
        const auto [i, j] = pair_bodies(slot, n);
        const Vec3 delta = s.pos[i] - s.pos[j];
        g[idx_dist(n, slot)] = 2.0 * s.dist[slot];
        set_vec(g, idx_pos(n, i, 0), -2.0 * delta);
        set_vec(g, idx_pos(n, j, 0), 2.0 * delta);
        return g;
    }
    if (k < kScalarHead + 2 * pairs) {  // reciprocal constraint of pair slot
        const std::size_t slot = k - kScalarHead - pairs;
        g[idx_dist(n, slot)] = s.recip[slot];
        g[idx_recip(n, slot)] = s.dist[slot];
        return g;
    }
    // Diagnostic coordinate energy (the one non-quadratic component).
    for (std::size_t i = 0; i < n; ++i) set_vec(g, idx_vel(n, i, 0), p.masses[i] * s.vel[i]);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const Vec3 delta = s.pos[i] - s.pos[j];
            const double r = norm(delta);
            if (r < kMinSeparation) {
                throw SingularConfiguration("coincident bodies: pair separation below minimum");
            }
            const Vec3 d_i = (p.gamma * p.masses[i] * p.masses[j] / (r * r * r)) * delta;
            g[idx_pos(n, i, 0)] += d_i.x;
            g[idx_pos(n, i, 1)] += d_i.y;
            g[idx_pos(n, i, 2)] += d_i.z;
            g[idx_pos(n, j, 0)] -= d_i.x;
            g[idx_pos(n, j, 1)] -= d_i.y;
            g[idx_pos(n, j, 2)] -= d_i.z;
        }
    }
    return g;
}

double invariant_scale(const ExtendedState& s, const Parameters& p) {
    double scale = 1.0;
    for (double v : invariant_components(s, p)) scale = std::max(scale, std::abs(v));
    return scale;
}

}  // namespace nbody
