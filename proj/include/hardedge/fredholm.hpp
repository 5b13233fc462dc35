#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "hardedge/kernels.hpp"
#include "hardedge/quadrature.hpp"

namespace hardedge {

struct FredholmResult {
    double det = 1.0;
    double logdet = 0.0;  // log |det|
    int sign = 1;
};

using Kernel = std::function<double(double, double)>;

// det(I - D), D_ij = sqrt(w_i w_j) K(x_i, x_j).
FredholmResult fredholm_det(const Kernel& kernel, const QuadratureRule& rule);
// Same with K(x_i, x_j) already assembled.
FredholmResult fredholm_det(const Eigen::MatrixXd& kernel_on_nodes, const std::vector<double>& weights);

enum class Abscissa { s, r };

struct GapPoint {
    double abscissa = 0.0;
    double E = 1.0;
    double logE = 0.0;
    int nodes = 0;
    double est_error = 0.0;
};

struct GapCurve {
    Abscissa abscissa_kind = Abscissa::s;
    std::vector<GapPoint> points;

    // Throws DomainError when E leaves (0, 1], abscissas do not increase or E increases.
    void validate(double monotone_slack = 1e-12) const;
};

inline constexpr double kMaxMBInterval = 15.0;
inline constexpr int kMinNodes = 16;
inline constexpr int kMaxNodes = 256;

// log det(I - K^{(c,theta)}) on (0, r) with a fixed n-point rule.
GapPoint gap_probability_mb_fixed(const MBParams& mb, double r, int n, RuleKind kind = RuleKind::gauss_legendre);

// Node doubling from 16 until successive log E differ by less than target_tol.
GapPoint gap_probability_mb(const MBParams& mb, double r, double target_tol,
                            RuleKind kind = RuleKind::gauss_legendre);

// E_M(0; (0, s)). M = 1 is discretized directly; M = 2 of Borodin type with
// integer c goes through gap_probability_mb at r = 2 sqrt(s), other M = 2
// through the power substitution.
GapPoint gap_probability_hardedge(const KernelBundle& bundle, double s, double target_tol);

// p in x = s t^p: 2 when every nu_m is a half-integer (the kernel is then
// analytic in t), 6 otherwise.
double substitution_power(const HardEdgeParams& params);

// Direct discretization with a fixed n. For M = 2 the variable is x = s t^p.
GapPoint gap_probability_hardedge_direct(const KernelBundle& bundle, double s, int n);

// M = 2 raw-variable discretization with Gauss-Jacobi weight x^beta,
// beta = min(0, nu_1, nu_2).
GapPoint gap_probability_hardedge_jacobi(const KernelBundle& bundle, double s, int n);

}  // namespace hardedge
