#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "hardedge/fredholm.hpp"
#include "hardedge/kernels.hpp"
#include "hardedge/resolvent_jet.hpp"

namespace hardedge {

using cplx = std::complex<double>;

struct HamiltonianState {
    int M = 1;
    double s = 0.0;
    std::vector<cplx> x, y, xi, eta;
    // First neglected relative exponent of the series initial data; 0 for
    // states that do not come from the truncated series.
    double series_order = 0.0;

    static HamiltonianState zero(int M, double s);
    // Order [x, y, xi, eta], each of length M + 1.
    Eigen::VectorXcd pack() const;
    static HamiltonianState unpack(int M, double s, const Eigen::VectorXcd& v);
};

struct SchlesingerView {
    Eigen::MatrixXcd E, C, A;
};

SchlesingerView schlesinger_view(const HamiltonianState& st);

// Leading small-s series. Requires s0 <= 1e-3; M = 2 needs the generic condition.
HamiltonianState initial_state(const HardEdgeParams& params, double s0);

struct ResolventStart {
    HamiltonianState state;
    double log_det = 0.0;  // log det(1 - K) on (0, s0)
};

// Exact initial data from a Nystrom solve of the resolvent on (0, s0).
ResolventStart resolvent_initial_state(const HardEdgeParams& params, double s0, int nodes = 40);

// d/ds of every variable.
HamiltonianState rhs(const HamiltonianState& st);
void rhs_packed(int M, double s, const Eigen::VectorXcd& v, Eigen::VectorXcd& dv);

struct Residual {
    std::string name;
    double value = 0.0;  // |sum of terms| / max |term|
};

double max_residual(const std::vector<Residual>& r);
const Residual& worst_residual(const std::vector<Residual>& r);

// Integrals of motion evaluated as written.
std::vector<Residual> first_integral_residuals(const HamiltonianState& st, const HardEdgeParams& params);

// Folding (M = 1), Schlesinger, rank-one minors and the Tracy-Widom map (M = 1).
std::vector<Residual> structural_residuals(const HamiltonianState& st, const HardEdgeParams& params);

// max |Im xi_m|, |Im eta_m| relative to 1 + magnitude.
double imaginary_leakage(const HamiltonianState& st);

struct Trajectory {
    HardEdgeParams params;
    double s0 = 0.0;
    double tol = 0.0;  // tolerance actually used after any tightening
    double head_log_det = 0.0;
    std::vector<HamiltonianState> states;
    std::vector<double> log_e;  // log det(1 - K) at each state
    int tightenings = 0;
};

struct IntegrateOptions {
    int nystrom_nodes = 40;
    bool monitor_integrals = true;
    int max_tightenings = 2;
};

Trajectory integrate(const HardEdgeParams& params, double s0, const std::vector<double>& s_targets, double tol,
                     const IntegrateOptions& options = {});

// Taylor coefficients of every variable to `order` at the state (x, y, xi, eta).
std::vector<Eigen::VectorXcd> taylor_jet(const HamiltonianState& st, int order);

// eta_0 .. eta_0'''' by Taylor recursion with U, V, W, Z, G and, for M = 2, F as
// the positive root. For M = 1, y1 plays the role of y2.
ResolventJet eta_derivatives(const HamiltonianState& st, const HardEdgeParams& params);

GapCurve gap_from_eta0(const Trajectory& traj);

}  // namespace hardedge
