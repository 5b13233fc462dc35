#include "hardedge/fredholm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hardedge {

FredholmResult fredholm_det(const Eigen::MatrixXd& kernel_on_nodes, const std::vector<double>& weights) {
    const int n = static_cast<int>(weights.size());
    if (kernel_on_nodes.rows() != n || kernel_on_nodes.cols() != n)
        throw DomainError("fredholm_det: kernel matrix does not match the rule");
    if (!kernel_on_nodes.allFinite()) throw DomainError("fredholm_det: kernel not finite on the node grid");
    Eigen::VectorXd sw(n);
    for (int i = 0; i < n; ++i) sw(i) = std::sqrt(weights[i]);
    Eigen::MatrixXd D = Eigen::MatrixXd::Identity(n, n) - sw.asDiagonal() * kernel_on_nodes * sw.asDiagonal();
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(D);
    const Eigen::MatrixXd& U = lu.matrixLU();
    FredholmResult out;
    out.sign = static_cast<int>(lu.permutationP().determinant());
    double logdet = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = U(i, i);
        if (u == 0.0 || !std::isfinite(u)) throw ConvergenceError("fredholm_det: singular factorization");
        if (u < 0.0) out.sign = -out.sign;
        logdet += std::log(std::abs(u));
    }
    out.logdet = logdet;
    out.det = out.sign * std::exp(logdet);
    return out;
}

FredholmResult fredholm_det(const Kernel& kernel, const QuadratureRule& rule) {
    const int n = rule.n;
    Eigen::MatrixXd K(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) K(i, j) = kernel(rule.nodes[i], rule.nodes[j]);
    return fredholm_det(K, rule.weights);
}

void GapCurve::validate(double monotone_slack) const {
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        if (!(p.E > 0.0) || p.E > 1.0 + 1e-14) throw DomainError("GapCurve: E outside (0, 1]");
        if (i > 0) {
            if (!(p.abscissa > points[i - 1].abscissa)) throw DomainError("GapCurve: abscissas not increasing");
            if (p.logE > points[i - 1].logE + monotone_slack) throw DomainError("GapCurve: E increased");
        }
    }
}

namespace {

GapPoint make_point(double abscissa, const FredholmResult& f, int n) {
    if (f.sign <= 0) throw ConvergenceError("gap probability: non-positive determinant");
    GapPoint p;
    p.abscissa = abscissa;
    p.logE = f.logdet;
    p.E = std::exp(f.logdet);
    p.nodes = n;
    return p;
}

template <class Eval>
GapPoint doubling(Eval eval, double target_tol, const char* what) {
    if (!(target_tol > 0.0)) throw DomainError(std::string(what) + ": target_tol must be positive");
    GapPoint prev = eval(kMinNodes);
    for (int n = 2 * kMinNodes; n <= kMaxNodes; n *= 2) {
        GapPoint next = eval(n);
        next.est_error = std::abs(next.logE - prev.logE);
        if (next.est_error < target_tol) return next;
        prev = next;
    }
    throw ConvergenceError(std::string(what) + ": no convergence at n = 256");
}

}  // namespace

double substitution_power(const HardEdgeParams& params) {
    for (std::size_t m = 1; m < params.nu.size(); ++m) {
        const double twice = 2.0 * params.nu[m];
        if (twice != std::round(twice)) return 6.0;
    }
    return 2.0;
}

GapPoint gap_probability_mb_fixed(const MBParams& mb, double r, int n, RuleKind kind) {
    if (!(r > 0.0)) throw DomainError("gap_probability_mb: r must be positive");
    if (r > kMaxMBInterval) throw DomainError("gap_probability_mb: r > 15 is unreliable in double precision");
    const QuadratureRule rule = make_rule(kind, n, 0.0, r);
    const Eigen::MatrixXd K = borodin_kernel_matrix(mb, rule.nodes, rule.nodes);
    return make_point(r, fredholm_det(K, rule.weights), n);
}

GapPoint gap_probability_mb(const MBParams& mb, double r, double target_tol, RuleKind kind) {
    return doubling([&](int n) { return gap_probability_mb_fixed(mb, r, n, kind); }, target_tol,
                    "gap_probability_mb");
}

GapPoint gap_probability_hardedge_direct(const KernelBundle& bundle, double s, int n) {
    if (!(s > 0.0)) throw DomainError("gap_probability_hardedge: s must be positive");
    if (bundle.params().M == 1) {
        const QuadratureRule rule = make_rule(RuleKind::gauss_legendre, n, 0.0, s);
        const Eigen::MatrixXd K = hardedge_kernel_matrix(bundle, rule.nodes, rule.nodes);
        return make_point(s, fredholm_det(K, rule.weights), n);
    }
    // x = s t^p: L(t, tau) = p s tau^{p-1} K(s t^p, s tau^p) on (0, 1).
    const double p = substitution_power(bundle.params());
    const QuadratureRule rule = make_rule(RuleKind::gauss_legendre, n, 0.0, 1.0);
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) xs[i] = s * std::pow(rule.nodes[i], p);
    Eigen::MatrixXd K = hardedge_kernel_matrix(bundle, xs, xs);
    for (int j = 0; j < n; ++j) K.col(j) *= p * s * std::pow(rule.nodes[j], p - 1.0);
    return make_point(s, fredholm_det(K, rule.weights), n);
}

GapPoint gap_probability_hardedge_jacobi(const KernelBundle& bundle, double s, int n) {
    if (!(s > 0.0)) throw DomainError("gap_probability_hardedge: s must be positive");
    const auto& nu = bundle.params().nu;
    double beta = 0.0;
    for (std::size_t m = 1; m < nu.size(); ++m) beta = std::min(beta, nu[m]);
    const QuadratureRule rule = make_jacobi_rule(n, beta, 0.0, 0.0, s);
    Eigen::MatrixXd K = hardedge_kernel_matrix(bundle, rule.nodes, rule.nodes);
    // Weights carry x^beta; remove it from the kernel symmetrically.
    std::vector<double> w(n);
    for (int j = 0; j < n; ++j) w[j] = rule.weights[j] / std::pow(rule.nodes[j], beta);
    return make_point(s, fredholm_det(K, w), n);
}

GapPoint gap_probability_hardedge(const KernelBundle& bundle, double s, double target_tol) {
    if (!(s > 0.0)) throw DomainError("gap_probability_hardedge: s must be positive");
    if (bundle.params().M == 2) {
        const auto c = bundle.params().borodin_c();
        // Non-integer c puts a u^c singularity into the inner rule; use the substitution there.
        if (c && *c == std::round(*c)) {
            MBParams mb;
            mb.c = *c;
            GapPoint p = gap_probability_mb(mb, 2.0 * std::sqrt(s), target_tol);
            p.abscissa = s;
            return p;
        }
    }
    return doubling([&](int n) { return gap_probability_hardedge_direct(bundle, s, n); }, target_tol,
                    "gap_probability_hardedge");
}

}  // namespace hardedge
