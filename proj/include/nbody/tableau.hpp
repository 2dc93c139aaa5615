#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace nbody {

/// Butcher coefficients of an s-stage Runge-Kutta scheme.
struct ButcherTableau {
    std::string name;
    std::size_t stages = 0;
    std::vector<double> a;  // row-major s x s
    std::vector<double> b;  // length s
    std::vector<double> c;  // length s
    int order = 0;
    bool implicit = false;

    double A(std::size_t i, std::size_t j) const { return a[i * stages + j]; }
};

/// Largest |b_i A(i,j) + b_j A(j,i) - b_i b_j| over all stage pairs. Zero (to
/// rounding) exactly for the schemes that preserve quadratic first integrals.
double symplectic_defect(const ButcherTableau& tab);

/// True when symplectic_defect(tab) <= tol.
bool check_symplectic_condition(const ButcherTableau& tab, double tol = 1e-13);

/// One-stage Gauss scheme (implicit midpoint), order 2.
ButcherTableau midpoint_tableau();
/// Two-stage Gauss scheme, order 4.
ButcherTableau gauss2_tableau();
/// Three-stage Gauss scheme, order 6.
ButcherTableau gauss3_tableau();
/// Classical explicit four-stage scheme, order 4. Not symplectic; serves as
/// the drift baseline.
ButcherTableau rk4_tableau();

/// Lookup by scheme name: "midpoint", "gauss2", "gauss3", "rk4".
/// Throws std::invalid_argument for anything else.
ButcherTableau tableau_by_name(const std::string& name);

/// All scheme names accepted by tableau_by_name, in canonical order.
std::vector<std::string> scheme_names();

}  // namespace nbody
