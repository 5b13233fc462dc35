#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "hardedge/special_functions.hpp"

namespace hardedge {

// Parameter set {M, nu_0 .. nu_M} with nu_0 = 0.
struct HardEdgeParams {
    int M = 1;
    std::vector<double> nu;     // nu_0 .. nu_M
    std::vector<double> e;      // e_1 .. e_{M+1} of all nu
    std::vector<double> alpha;  // alpha_0 .. alpha_M, sum alpha_i x^i = prod_{m>=1} (x - nu_m)

    static HardEdgeParams make(const std::vector<double>& nu);
    static HardEdgeParams m1(double nu1) { return make({0.0, nu1}); }
    static HardEdgeParams m2(double nu1, double nu2) { return make({0.0, nu1, nu2}); }

    double e1() const { return e[0]; }
    double e2() const { return e.size() > 1 ? e[1] : 0.0; }
    double e3() const { return e.size() > 2 ? e[2] : 0.0; }

    // M = 2 with nu2 - nu1 at least 1e-6 away from an integer.
    bool generic() const;
    // For M = 2 with |nu2 - nu1| = 1/2 the hard-edge kernel is a Muttalib-Borodin
    // theta = 2 kernel with c = 2 max(nu1, nu2); returns that c.
    std::optional<double> borodin_c() const;
};

// Evaluators phi_j, psi_j for the integrable form of the hard-edge kernel.
class KernelBundle {
public:
    KernelBundle(const HardEdgeParams& params, const SeriesControl& ctl = {});

    const HardEdgeParams& params() const { return params_; }
    const SeriesControl& control() const { return ctl_; }
    int size() const { return params_.M + 1; }

    std::vector<double> phi(double x) const;
    std::vector<double> psi(double y) const;
    double phi(int j, double x) const { return phi(x)[j]; }
    double psi(int j, double y) const { return psi(y)[j]; }

    // sum_j phi_j(x) psi_j(y), no division.
    double numerator(double x, double y) const;

private:
    HardEdgeParams params_;
    SeriesControl ctl_;
    double gamma_a_ = 0.0;  // Gamma(nu2 - nu1)
    double gamma_b_ = 0.0;  // Gamma(nu1 - nu2)
};

inline KernelBundle build_kernel_bundle(const HardEdgeParams& params, const SeriesControl& ctl = {}) {
    return KernelBundle(params, ctl);
}

inline constexpr double kDiagonalOffset = 1e-5;

// |x - y| < delta max(x, y); relative also below 1 so that clustered small
// nodes are not merged into one diagonal value.
bool near_diagonal(double x, double y, double delta = kDiagonalOffset);

// K_M(x, y); near the diagonal a symmetric offset with one Richardson step.
double kernel_value(const KernelBundle& bundle, double x, double y, double delta = kDiagonalOffset);

struct MBParams {
    double c = 0.0;
    double theta = 2.0;
    SeriesControl ctl{};
    int inner_nodes = 64;

    void validate() const;
};

// Borodin's hard-edge Muttalib-Borodin kernel K^{(c,theta)}(x, y).
double borodin_kernel(const MBParams& mb, double x, double y);

// K^{(c,theta)}(x_i, y_j) for all pairs, sharing the Wright Bessel tables.
Eigen::MatrixXd borodin_kernel_matrix(const MBParams& mb, const std::vector<double>& xs,
                                      const std::vector<double>& ys);

// Hard-edge kernel K_{nu1,nu2}(x_i, y_j) evaluated through the theta = 2
// Borodin kernel: K(x, y) = y^{-1/2} K^{(c,2)}(2 sqrt(y), 2 sqrt(x)).
Eigen::MatrixXd hardedge_kernel_matrix_via_borodin(const HardEdgeParams& params, const std::vector<double>& xs,
                                                   const std::vector<double>& ys, int inner_nodes = 64);

// Direct evaluation of K_M on all pairs (diagonal pairs by kernel_value).
Eigen::MatrixXd hardedge_kernel_matrix(const KernelBundle& bundle, const std::vector<double>& xs,
                                       const std::vector<double>& ys);

}  // namespace hardedge
