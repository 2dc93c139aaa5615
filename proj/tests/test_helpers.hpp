#pragma once

// Shared fixtures for the unit tests: seeded random states on and off the
// constraint manifold, body permutations, and a scratch directory helper.

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "nbody/model.hpp"
#include "nbody/state.hpp"

namespace testutil {

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64{seed}; }

inline nbody::Parameters random_params(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> mass(0.5, 2.0);
    nbody::Parameters p;
    p.masses.resize(n);
    for (double& m : p.masses) m = mass(rng);
    p.gamma = mass(rng);
    return p;
}

/// Random plain state with every pair at least `min_sep` apart (rejection
/// sampling), positions in [-2,2]^3, velocities in [-1,1]^3, t in [0,2].
inline nbody::CartesianState random_cartesian(std::mt19937_64& rng, std::size_t n,
                                              double min_sep = 0.8) {
    std::uniform_real_distribution<double> box(-2.0, 2.0);
    std::uniform_real_distribution<double> speed(-1.0, 1.0);
    std::uniform_real_distribution<double> time(0.0, 2.0);
    nbody::CartesianState c;
    c.t = time(rng);
    c.vel.resize(n);
    for (auto& v : c.vel) v = {speed(rng), speed(rng), speed(rng)};
    while (true) {
        c.pos.clear();
        for (std::size_t i = 0; i < n; ++i) c.pos.push_back({box(rng), box(rng), box(rng)});
        bool ok = true;
        for (std::size_t i = 0; i + 1 < n && ok; ++i) {
            for (std::size_t j = i + 1; j < n && ok; ++j) {
                ok = nbody::norm(c.pos[i] - c.pos[j]) >= min_sep;
            }
        }
        if (ok) return c;
    }
}

/// Random on-manifold extended state (auxiliary variables from coordinates).
inline nbody::ExtendedState random_extended(std::mt19937_64& rng, const nbody::Parameters& p) {
    return nbody::init_extended(random_cartesian(rng, p.n()), p);
}

/// Random extended state with all constraints deliberately broken: the
/// auxiliary variables are drawn independently of the coordinates.
inline nbody::ExtendedState random_off_manifold(std::mt19937_64& rng,
                                                const nbody::Parameters& p) {
    nbody::ExtendedState s = random_extended(rng, p);
    std::uniform_real_distribution<double> aux(0.5, 3.0);
    for (double& r : s.dist) r = aux(rng);
    for (double& q : s.recip) q = aux(rng);
    return s;
}

inline std::vector<std::size_t> random_permutation(std::mt19937_64& rng, std::size_t n) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    return perm;
}

/// Relabels bodies: entity at index i moves to index perm[i].
inline nbody::Parameters permuted(const nbody::Parameters& p,
                                  const std::vector<std::size_t>& perm) {
    nbody::Parameters out = p;
    for (std::size_t i = 0; i < p.n(); ++i) out.masses[perm[i]] = p.masses[i];
    return out;
}

inline nbody::ExtendedState permuted(const nbody::ExtendedState& s,
                                     const std::vector<std::size_t>& perm) {
    const std::size_t n = s.n();
    nbody::ExtendedState out = s;
    for (std::size_t i = 0; i < n; ++i) {
        out.pos[perm[i]] = s.pos[i];
        out.vel[perm[i]] = s.vel[i];
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const std::size_t from = nbody::pair_index(i, j, n);
            const std::size_t to = nbody::pair_index(perm[i], perm[j], n);
            out.dist[to] = s.dist[from];
            out.recip[to] = s.recip[from];
        }
    }
    return out;
}

/// Fresh scratch directory under the system temp dir; recreated empty.
inline std::filesystem::path scratch_dir(const std::string& leaf) {
    const auto dir = std::filesystem::temp_directory_path() / ("nbody_tests_" + leaf);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace testutil
