#include "hardedge/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "hardedge/special_functions.hpp"

namespace hardedge {

std::string to_string(RuleKind kind) {
    switch (kind) {
        case RuleKind::gauss_legendre: return "gauss_legendre";
        case RuleKind::clenshaw_curtis: return "clenshaw_curtis";
        case RuleKind::gauss_jacobi: return "gauss_jacobi";
    }
    return "unknown";
}

RuleKind rule_kind_from_string(const std::string& name) {
    if (name == "gauss_legendre" || name == "gl") return RuleKind::gauss_legendre;
    if (name == "clenshaw_curtis" || name == "cc") return RuleKind::clenshaw_curtis;
    if (name == "gauss_jacobi") return RuleKind::gauss_jacobi;
    throw DomainError("unknown quadrature rule: " + name);
}

namespace {

void check_interval(int n, double a, double b) {
    if (n < 2) throw DomainError("quadrature: need at least 2 nodes");
    if (!(b > a) || !std::isfinite(a) || !std::isfinite(b))
        throw DomainError("quadrature: invalid interval");
}

// Nodes/weights on [-1, 1], ascending.
void gauss_legendre_ref(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
    if (n % 2 == 1) x[n / 2] = 0.0;
}

void clenshaw_curtis_ref(int n, std::vector<double>& x, std::vector<double>& w) {
    const int N = n - 1;
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int k = 0; k <= N; ++k) {
        const double theta = std::numbers::pi * k / N;
        x[N - k] = std::cos(theta);
        double sum = 0.0;
        for (int j = 1; j <= N / 2; ++j) {
            const double bj = (2 * j == N) ? 1.0 : 2.0;
            sum += bj / (4.0 * j * j - 1.0) * std::cos(2.0 * j * theta);
        }
        const double ck = (k == 0 || k == N) ? 1.0 : 2.0;
        w[N - k] = ck / N * (1.0 - sum);
    }
    if (n % 2 == 1) x[N / 2] = 0.0;
}

}  // namespace

QuadratureRule make_rule(RuleKind kind, int n, double a, double b) {
    check_interval(n, a, b);
    QuadratureRule rule;
    rule.kind = kind;
    rule.n = n;
    rule.a = a;
    rule.b = b;
    std::vector<double> x, w;
    switch (kind) {
        case RuleKind::gauss_legendre: gauss_legendre_ref(n, x, w); break;
        case RuleKind::clenshaw_curtis: clenshaw_curtis_ref(n, x, w); break;
        case RuleKind::gauss_jacobi: return make_jacobi_rule(n, 0.0, 0.0, a, b);
    }
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = mid + half * x[i];
        rule.weights[i] = half * w[i];
    }
    if (kind == RuleKind::clenshaw_curtis) {
        rule.nodes.front() = a;
        rule.nodes.back() = b;
    }
    return rule;
}

QuadratureRule make_jacobi_rule(int n, double alpha, double beta, double a, double b) {
    check_interval(n, a, b);
    if (!(alpha > -1.0) || !(beta > -1.0)) throw DomainError("gauss_jacobi: exponents must exceed -1");
    // Golub-Welsch on [-1, 1] for (1 - t)^beta (1 + t)^alpha.
    const double al = beta, be = alpha;
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        const double s = 2.0 * k + al + be;
        J(k, k) = (s == 0.0) ? (be - al) / (al + be + 2.0) : (be * be - al * al) / (s * (s + 2.0));
        if (k + 1 < n) {
            const double k1 = k + 1.0;
            const double s1 = 2.0 * k1 + al + be;
            // (k1 + al + be) / (s1 - 1) is 0/0 when k1 = 1 and al + be = -1; its limit is 1.
            const double ratio = (k == 0 && std::abs(al + be + 1.0) < 1e-14) ? 1.0 : (k1 + al + be) / (s1 - 1.0);
            const double v = 4.0 * k1 * (k1 + al) * (k1 + be) * ratio / (s1 * s1 * (s1 + 1.0));
            J(k, k + 1) = J(k + 1, k) = std::sqrt(v);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    const double mu0 = std::pow(2.0, al + be + 1.0) * std::exp(std::lgamma(al + 1.0) + std::lgamma(be + 1.0) -
                                                               std::lgamma(al + be + 2.0));
    QuadratureRule rule;
    rule.kind = RuleKind::gauss_jacobi;
    rule.n = n;
    rule.a = a;
    rule.b = b;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    const double scale = std::pow(half, alpha + beta + 1.0);
    for (int i = 0; i < n; ++i) {
        const double v = es.eigenvectors()(0, i);
        rule.nodes[i] = mid + half * es.eigenvalues()(i);
        rule.weights[i] = scale * mu0 * v * v;
    }
    return rule;
}

}  // namespace hardedge
