#pragma once

#include <array>

#include "hardedge/kernels.hpp"

namespace hardedge {

// eta_0 and derivatives through order 4 at one s, with the auxiliary
// products used by the scalar equations.
struct ResolventJet {
    double s = 0.0;
    std::array<double, 5> d{};  // eta0, eta0', eta0'', eta0''', eta0''''
    double F = 0.0;
    double U = 0.0;  // s x0 y2'
    double V = 0.0;  // s x0' y2
    double W = 0.0;  // s^2 x0 y2''
    double Z = 0.0;  // s^2 x0'' y2
    double G = 0.0;  // x0 / y2
    HardEdgeParams params;
};

// 4e1^2 h'^2 - 12 e2 h'^2 + 12 h h'^2 - 36 s h'^3 + 9 s^2 h''^2 - 12 s h'(h'' + s h''').
inline double f_squared(const ResolventJet& j) {
    const double e1 = j.params.e1(), e2 = j.params.e2(), s = j.s;
    const double h = j.d[0], h1 = j.d[1], h2 = j.d[2], h3 = j.d[3];
    return 4.0 * e1 * e1 * h1 * h1 - 12.0 * e2 * h1 * h1 + 12.0 * h * h1 * h1 - 36.0 * s * h1 * h1 * h1 +
           9.0 * s * s * h2 * h2 - 12.0 * s * h1 * (h2 + s * h3);
}

}  // namespace hardedge
