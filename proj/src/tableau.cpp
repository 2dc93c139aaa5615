#include "nbody/tableau.hpp"

#include <cmath>
#include <stdexcept>

namespace nbody {

double symplectic_defect(const ButcherTableau& tab) {
    double worst = 0.0;
    for (std::size_t i = 0; i < tab.stages; ++i) {
        for (std::size_t j = 0; j < tab.stages; ++j) {
            const double defect =
                tab.b[i] * tab.A(i, j) + tab.b[j] * tab.A(j, i) - tab.b[i] * tab.b[j];
            worst = std::max(worst, std::abs(defect));
        }
    }
    return worst;
}

bool check_symplectic_condition(const ButcherTableau& tab, double tol) {
    return symplectic_defect(tab) <= tol;
}

ButcherTableau midpoint_tableau() {
    ButcherTableau t;
    t.name = "midpoint";
    t.stages = 1;
    t.a = {0.5};
    t.b = {1.0};
    t.c = {0.5};
    t.order = 2;
    t.implicit = true;
    return t;
}

ButcherTableau gauss2_tableau() {
    const double s3 = std::sqrt(3.0);
    ButcherTableau t;
    t.name = "gauss2";
    t.stages = 2;
    t.a = {0.25, 0.25 - s3 / 6.0,   //
           0.25 + s3 / 6.0, 0.25};
    t.b = {0.5, 0.5};
    t.c = {0.5 - s3 / 6.0, 0.5 + s3 / 6.0};
    t.order = 4;
    t.implicit = true;
    return t;
}

ButcherTableau gauss3_tableau() {
    const double s15 = std::sqrt(15.0);
    ButcherTableau t;
    t.name = "gauss3";
    t.stages = 3;
    t.a = {5.0 / 36.0, 2.0 / 9.0 - s15 / 15.0, 5.0 / 36.0 - s15 / 30.0,  //
           5.0 / 36.0 + s15 / 24.0, 2.0 / 9.0, 5.0 / 36.0 - s15 / 24.0,  //
           5.0 / 36.0 + s15 / 30.0, 2.0 / 9.0 + s15 / 15.0, 5.0 / 36.0};
    t.b = {5.0 / 18.0, 4.0 / 9.0, 5.0 / 18.0};
    t.c = {0.5 - s15 / 10.0, 0.5, 0.5 + s15 / 10.0};
    t.order = 6;
    t.implicit = true;
    return t;
}

ButcherTableau rk4_tableau() {
    ButcherTableau t;
    t.name = "rk4";
    t.stages = 4;
    t.a = {0.0, 0.0, 0.0, 0.0,  //
           0.5, 0.0, 0.0, 0.0,  //
           0.0, 0.5, 0.0, 0.0,  //
           0.0, 0.0, 1.0, 0.0};
    t.b = {1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0};
    t.c = {0.0, 0.5, 0.5, 1.0};
    t.order = 4;
    t.implicit = false;
    return t;
}

ButcherTableau tableau_by_name(const std::string& name) {
    if (name == "midpoint") return midpoint_tableau();
    if (name == "gauss2") return gauss2_tableau();
    if (name == "gauss3") return gauss3_tableau();
    if (name == "rk4") return rk4_tableau();
    throw std::invalid_argument("unknown scheme name: " + name +
                                " (expected midpoint, gauss2, gauss3 or rk4)");
}

std::vector<std::string> scheme_names() { return {"midpoint", "gauss2", "gauss3", "rk4"}; }

}  // namespace nbody
