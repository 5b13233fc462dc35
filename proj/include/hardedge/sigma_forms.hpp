#pragma once

#include <array>
#include <optional>
#include <vector>

#include "hardedge/hamiltonian_flow.hpp"
#include "hardedge/resolvent_jet.hpp"

namespace hardedge {

struct RadicalF {
    double from_formula = 0.0;
    std::optional<double> from_bilinear;  // -3 x0 y1 - 3 x1 y2 - e1 x0 y2
};

// Positive root of f_squared; squares down to -1e-10 (relative) are clipped.
RadicalF radical_F(const ResolventJet& jet, const HamiltonianState* state = nullptr);

// s^2 h''^2 - e1^2 h'^2 + 4 h'^2 (s h' - h + s + e2) - 4 h h', over the largest summand.
double p3_sigma_residual(double s, double h, double h1, double h2, double e1, double e2);

inline constexpr int kQuarticBlocks = 10;

// The fourth-order equation for eta_0 as printed, one entry per block
// (h''''^2, h'''' , h'''^3, h'''^2, h''', h''^4, h''^3, h''^2, h'', rest).
std::array<double, kQuarticBlocks> quartic_blocks(const ResolventJet& jet);

struct QuarticPaths {
    double typeset = 0.0;   // sum of the blocks
    double pipeline = 0.0;  // rebuilt from the eliminated Hamiltonian
    double scale = 0.0;     // sum of |block|
};

// Both evaluations; U, V, W, Z in the pipeline are solved from the jet, not read from it.
QuarticPaths quartic_paths(const ResolventJet& jet);

// |sum of blocks| / sum |block|.
double quartic_ode_residual(const ResolventJet& jet);

struct SpecialResiduals {
    double third_order = 0.0;
    double f_identity = 0.0;  // |eta0' - 6 + 2F| / max(|eta0'|, 6, 2F)
};

// Only for nu = (0, -1/2, 0).
SpecialResiduals special_case_residuals(const ResolventJet& jet);

// Quantities recovered from (eta0 .. eta0'''', F).
struct Recovered {
    double xi0, xi1, eta1, eta2, x0y1, x1y2, x0y2, x0y0, x1y1, x2y2;
};
Recovered recover_from_jet(const ResolventJet& jet);

// Recovery formulas against the state values, and the residual of the first-order
// equation for G = x0 / y2 (entry "GODE"). M = 2 only.
std::vector<Residual> appendix_recover(const HamiltonianState& state, const HardEdgeParams& params);

}  // namespace hardedge
