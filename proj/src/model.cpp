#include "nbody/model.hpp"

#include <cmath>

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

void require_matching(const CartesianState& s, const Parameters& p) {
    validate(p);
    if (s.pos.size() != p.n() || s.vel.size() != p.n()) {
        throw std::invalid_argument("state does not match parameter body count");
    }
}

}  // namespace

ExtendedState init_extended(const CartesianState& s, const Parameters& p) {
    require_matching(s, p);
    const std::size_t n = s.n();
    ExtendedState e;
    e.t = s.t;
    e.pos = s.pos;
    e.vel = s.vel;
    e.dist.resize(pair_count(n));
    e.recip.resize(pair_count(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double r = norm(s.pos[i] - s.pos[j]);
            if (r < kMinSeparation) {
                throw SingularConfiguration("coincident bodies: pair separation below minimum");
            }
            const std::size_t k = pair_index(i, j, n);
            e.dist[k] = r;
            e.recip[k] = 1.0 / r;
        }
    }
    return e;
}

CartesianState project_cartesian(const ExtendedState& s) {
    return CartesianState{s.t, s.pos, s.vel};
}

CartesianDerivative rhs_cartesian(const CartesianState& s, const Parameters& p) {
    require_matching(s, p);
    const std::size_t n = s.n();
    CartesianDerivative d;
    d.t = 1.0;
    d.pos = s.vel;
    d.vel.assign(n, Vec3{});
    // Accumulate each unordered pair once; the pull on i and on j are equal
    // and opposite up to the mass factors.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const Vec3 delta = s.pos[j] - s.pos[i];
            const double r = norm(delta);
            if (r < kMinSeparation) {
                throw SingularConfiguration("coincident bodies: pair separation below minimum");
            }
            const Vec3 pull = (p.gamma / (r * r * r)) * delta;  // gamma (r_j - r_i) / r^3
            d.vel[i] += p.masses[j] * pull;
            d.vel[j] += (-p.masses[i]) * pull;
        }
    }
    return d;
}

ExtendedDerivative rhs_extended(const ExtendedState& s, const Parameters& p) {
    require_matching(s, p);
    const std::size_t n = s.n();
    ExtendedDerivative d;
    d.t = 1.0;
    d.pos = s.vel;
    d.vel.assign(n, Vec3{});
    d.dist.resize(s.dist.size());
    d.recip.resize(s.recip.size());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const std::size_t k = pair_index(i, j, n);
            const double r = s.dist[k];
            if (std::abs(r) < kMinSeparation) {
                throw SingularConfiguration("stored pair distance below minimum");
            }
            const double rho = s.recip[k];
            const double inv_r2 = 1.0 / (r * r);
            const Vec3 delta = s.pos[i] - s.pos[j];
            const Vec3 dvel = s.vel[i] - s.vel[j];
            // Acceleration: gamma m rho / r^2 towards the partner.
            const Vec3 pull = (p.gamma * rho * inv_r2) * (-delta);  // direction r_j - r_i
            d.vel[i] += p.masses[j] * pull;
            d.vel[j] += (-p.masses[i]) * pull;
            const double radial = dot(delta, dvel);  // (r_i - r_j) . (v_i - v_j)
            d.dist[k] = radial / r;
            d.recip[k] = -rho * inv_r2 * radial;
        }
    }
    return d;
}

ExtendedDerivative rhs_rationalized(const ExtendedState& s, const Parameters& p) {
    require_matching(s, p);
    const std::size_t n = s.n();
    ExtendedDerivative d;
    d.t = 1.0;
    d.pos = s.vel;
    d.vel.assign(n, Vec3{});
    d.dist.resize(s.dist.size());
    d.recip.assign(s.recip.size(), 0.0);  // reciprocals carried as constants here
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const std::size_t k = pair_index(i, j, n);
            const double r = s.dist[k];
            if (std::abs(r) < kMinSeparation) {
                throw SingularConfiguration("stored pair distance below minimum");
            }
            const Vec3 delta = s.pos[i] - s.pos[j];
            const Vec3 dvel = s.vel[i] - s.vel[j];
            const Vec3 pull = (p.gamma / (r * r * r)) * (-delta);  // gamma (r_j - r_i) / r^3
            d.vel[i] += p.masses[j] * pull;
            d.vel[j] += (-p.masses[i]) * pull;
            d.dist[k] = dot(delta, dvel) / r;
        }
    }
    return d;
}

}  // namespace nbody
