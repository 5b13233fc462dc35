#include "hardedge/kernels.hpp"

#include <cmath>
#include <string>

#include "hardedge/quadrature.hpp"

namespace hardedge {

HardEdgeParams HardEdgeParams::make(const std::vector<double>& nu) {
    if (nu.size() < 2 || nu.size() > 3) throw DomainError("HardEdgeParams: only M = 1 or M = 2 is supported");
    if (nu[0] != 0.0) throw DomainError("HardEdgeParams: nu_0 must be 0");
    for (double v : nu)
        if (!(v > -1.0) || !std::isfinite(v)) throw DomainError("HardEdgeParams: every nu_m must exceed -1");
    HardEdgeParams p;
    p.M = static_cast<int>(nu.size()) - 1;
    p.nu = nu;
    p.e = elementary_symmetric(nu);
    // Coefficients of prod_{m>=1} (x - nu_m), lowest degree first.
    std::vector<double> poly{1.0};
    for (int m = 1; m <= p.M; ++m) {
        std::vector<double> next(poly.size() + 1, 0.0);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i + 1] += poly[i];
            next[i] -= nu[m] * poly[i];
        }
        poly = next;
    }
    p.alpha = poly;
    return p;
}

bool HardEdgeParams::generic() const {
    if (M != 2) return true;
    const double d = nu[2] - nu[1];
    return std::abs(d - std::round(d)) > 1e-6;
}

std::optional<double> HardEdgeParams::borodin_c() const {
    if (M != 2) return std::nullopt;
    if (std::abs(std::abs(nu[2] - nu[1]) - 0.5) > 1e-14) return std::nullopt;
    const double c = 2.0 * std::max(nu[1], nu[2]);
    if (!(c > -1.0)) return std::nullopt;
    return c;
}

KernelBundle::KernelBundle(const HardEdgeParams& params, const SeriesControl& ctl) : params_(params), ctl_(ctl) {
    ctl_.validate();
    if (params.M != 1 && params.M != 2) throw DomainError("KernelBundle: only M = 1 or M = 2 is supported");
    if (params.M == 2) {
        if (!params.generic()) throw DomainError("KernelBundle: nu2 - nu1 must not be an integer");
        gamma_a_ = gamma_real(params.nu[2] - params.nu[1]);
        gamma_b_ = gamma_real(params.nu[1] - params.nu[2]);
    }
}

namespace {

// x^{-nu/2} J_nu(2 sqrt(x)) as an entire series.
double scaled_bessel(double nu, double x, const SeriesControl& ctl) { return wright_bessel(nu + 1.0, 1.0, x, ctl).value; }

}  // namespace

std::vector<double> KernelBundle::phi(double x) const {
    const auto& nu = params_.nu;
    const double nu0 = nu[0];
    if (params_.M == 1) {
        const double v = nu[1] - nu0;
        const double lead = std::pow(x, -nu0);
        const double p0 = lead * scaled_bessel(v, x, ctl_);
        const double p1 = nu0 * p0 + lead * x * scaled_bessel(v + 1.0, x, ctl_);
        return {p0, p1};
    }
    const double a = nu[1] - nu0, b = nu[2] - nu0;
    const double f1 = hyp0f2_reg(a + 1.0, b + 1.0, -x, ctl_).value;
    const double f2 = hyp0f2_reg(a + 2.0, b + 2.0, -x, ctl_).value;
    const double f3 = hyp0f2_reg(a + 3.0, b + 3.0, -x, ctl_).value;
    const double x0 = std::pow(x, -nu0), x1 = std::pow(x, 1.0 - nu0), x2 = std::pow(x, 2.0 - nu0);
    return {-x0 * f1, -nu0 * x0 * f1 - x1 * f2, -nu0 * nu0 * x0 * f1 + (1.0 - 2.0 * nu0) * x1 * f2 - x2 * f3};
}

std::vector<double> KernelBundle::psi(double y) const {
    const auto& nu = params_.nu;
    const double nu0 = nu[0];
    if (params_.M == 1) {
        const double v = nu[1] - nu0;
        const double p1 = std::pow(y, nu0 + v) * scaled_bessel(v, y, ctl_);
        const double p0 = -nu0 * p1 - std::pow(y, nu0 + v + 1.0) * scaled_bessel(v + 1.0, y, ctl_);
        return {p0, p1};
    }
    const double nu1 = nu[1], nu2 = nu[2];
    // Gamma(p) y^{nu_i} 0F2(;b1,b2;y) / Gamma(b1) written with the regularized series.
    const double pa = std::pow(y, nu1), pb = std::pow(y, nu2);
    const double ga = gamma_a_ * gamma_real(nu1 - nu2 + 1.0), gb = gamma_b_ * gamma_real(nu2 - nu1 + 1.0);
    auto block = [&](double shift) {
        return ga * pa * hyp0f2_reg(nu1 - nu0 + shift, nu1 - nu2 + 1.0, y, ctl_).value +
               gb * pb * hyp0f2_reg(nu2 - nu0 + shift, nu2 - nu1 + 1.0, y, ctl_).value;
    };
    const double m_minus = block(-1.0), m_zero = block(0.0), m_plus = block(1.0);
    return {m_minus + (nu0 - nu1 - nu2 + 1.0) * m_zero + nu1 * nu2 * m_plus, m_zero - (nu1 + nu2) * m_plus, m_plus};
}

double KernelBundle::numerator(double x, double y) const {
    const auto p = phi(x);
    const auto q = psi(y);
    double sum = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) sum += p[j] * q[j];
    return sum;
}

bool near_diagonal(double x, double y, double delta) {
    return std::abs(x - y) < delta * std::max(x, y);
}

double kernel_value(const KernelBundle& bundle, double x, double y, double delta) {
    if (!(x > 0.0) || !(y > 0.0)) throw DomainError("kernel_value: x and y must be positive");
    if (!near_diagonal(x, y, delta)) return bundle.numerator(x, y) / (x - y);
    auto offset_average = [&](double d) {
        const double hi = x * (1.0 + d), lo = x * (1.0 - d);
        return 0.5 * (bundle.numerator(hi, x) / (hi - x) + bundle.numerator(lo, x) / (lo - x));
    };
    // The symmetric average has an O(d^2) error; one Richardson step removes it.
    const double coarse = offset_average(delta);
    const double fine = offset_average(0.5 * delta);
    return (4.0 * fine - coarse) / 3.0;
}

void MBParams::validate() const {
    if (!(c > -1.0)) throw DomainError("MBParams: c must exceed -1");
    if (!(theta > 0.0)) throw DomainError("MBParams: theta must be positive");
    if (inner_nodes < 2) throw DomainError("MBParams: inner_nodes must be >= 2");
    ctl.validate();
}

Eigen::MatrixXd borodin_kernel_matrix(const MBParams& mb, const std::vector<double>& xs,
                                      const std::vector<double>& ys) {
    mb.validate();
    const QuadratureRule inner = make_rule(RuleKind::gauss_legendre, mb.inner_nodes, 0.0, 1.0);
    const WrightBesselSeries left((mb.c + 1.0) / mb.theta, 1.0 / mb.theta, mb.ctl);
    const WrightBesselSeries right(mb.c + 1.0, mb.theta, mb.ctl);
    const int n = static_cast<int>(xs.size()), m = static_cast<int>(ys.size()), q = mb.inner_nodes;
    Eigen::MatrixXd A(n, q), B(m, q);
    Eigen::VectorXd w(q);
    for (int k = 0; k < q; ++k) {
        const double u = inner.nodes[k];
        w(k) = inner.weights[k] * std::pow(u, mb.c);
        for (int i = 0; i < n; ++i) A(i, k) = left(xs[i] * u);
        for (int j = 0; j < m; ++j) B(j, k) = right(std::pow(ys[j] * u, mb.theta));
    }
    Eigen::MatrixXd K = A * w.asDiagonal() * B.transpose();
    for (int i = 0; i < n; ++i) K.row(i) *= mb.theta * std::pow(xs[i], mb.c);
    return K;
}

double borodin_kernel(const MBParams& mb, double x, double y) {
    if (x < 0.0 || y < 0.0) throw DomainError("borodin_kernel: arguments must be non-negative");
    return borodin_kernel_matrix(mb, {x}, {y})(0, 0);
}

Eigen::MatrixXd hardedge_kernel_matrix_via_borodin(const HardEdgeParams& params, const std::vector<double>& xs,
                                                   const std::vector<double>& ys, int inner_nodes) {
    const auto c = params.borodin_c();
    if (!c) throw DomainError("hardedge_kernel_matrix_via_borodin: parameters are not of Muttalib-Borodin type");
    MBParams mb;
    mb.c = *c;
    mb.theta = 2.0;
    mb.inner_nodes = inner_nodes;
    std::vector<double> rx(xs.size()), ry(ys.size());
    for (std::size_t i = 0; i < xs.size(); ++i) rx[i] = 2.0 * std::sqrt(xs[i]);
    for (std::size_t j = 0; j < ys.size(); ++j) ry[j] = 2.0 * std::sqrt(ys[j]);
    Eigen::MatrixXd K = borodin_kernel_matrix(mb, ry, rx).transpose();
    for (std::size_t j = 0; j < ys.size(); ++j) K.col(j) /= std::sqrt(ys[j]);
    return K;
}

Eigen::MatrixXd hardedge_kernel_matrix(const KernelBundle& bundle, const std::vector<double>& xs,
                                       const std::vector<double>& ys) {
    const int n = static_cast<int>(xs.size()), m = static_cast<int>(ys.size()), r = bundle.size();
    Eigen::MatrixXd P(n, r), Q(m, r);
    for (int i = 0; i < n; ++i) {
        const auto p = bundle.phi(xs[i]);
        for (int j = 0; j < r; ++j) P(i, j) = p[j];
    }
    for (int i = 0; i < m; ++i) {
        const auto q = bundle.psi(ys[i]);
        for (int j = 0; j < r; ++j) Q(i, j) = q[j];
    }
    Eigen::MatrixXd K = P * Q.transpose();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) {
            if (near_diagonal(xs[i], ys[j], kDiagonalOffset))
                K(i, j) = kernel_value(bundle, xs[i], ys[j]);
            else
                K(i, j) /= xs[i] - ys[j];
        }
    return K;
}

}  // namespace hardedge
