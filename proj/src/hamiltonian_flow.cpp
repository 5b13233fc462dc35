#include "hardedge/hamiltonian_flow.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <string>

#include "hardedge/ode_solver.hpp"
#include "hardedge/quadrature.hpp"

namespace hardedge {

namespace {

constexpr cplx I(0.0, 1.0);

// Truncated Taylor series in (s' - s).
struct Series {
    std::vector<cplx> c;

    explicit Series(std::size_t n = 0, cplx v = 0.0) : c(n, 0.0) {
        if (n) c[0] = v;
    }
    std::size_t size() const { return c.size(); }
};

Series operator+(Series a, const Series& b) {
    for (std::size_t k = 0; k < a.size(); ++k) a.c[k] += b.c[k];
    return a;
}
Series operator-(Series a, const Series& b) {
    for (std::size_t k = 0; k < a.size(); ++k) a.c[k] -= b.c[k];
    return a;
}
Series operator-(Series a) {
    for (auto& v : a.c) v = -v;
    return a;
}
Series operator*(const Series& a, const Series& b) {
    Series r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; i + j < a.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
    return r;
}
// Numerators of the equations of motion: s x', s y', xi', eta'.
template <class T>
void numerators(int M, const T& s, const std::vector<T>& x, const std::vector<T>& y, const std::vector<T>& xi,
                const std::vector<T>& eta, std::vector<T>& nx, std::vector<T>& ny, std::vector<T>& nxi,
                std::vector<T>& neta) {
    if (M == 1) {
        nx[0] = -(eta[0] * x[0]) - x[1];
        nx[1] = -(eta[1] * x[0]) + s * x[0] + xi[0] * x[0] + xi[1] * x[1];
        ny[1] = -(xi[1] * y[1]) + y[0];
        ny[0] = -(xi[0] * y[1]) - s * y[1] + eta[0] * y[0] + eta[1] * y[1];
        nxi[0] = x[0] * y[0];
        nxi[1] = x[0] * y[1];
        neta[0] = x[0] * y[1];
        neta[1] = x[1] * y[1];
        return;
    }
    nx[0] = -(eta[0] * x[0]) - x[1];
    nx[1] = -(eta[1] * x[0]) - x[2];
    nx[2] = -(eta[2] * x[0]) - s * x[0] + xi[0] * x[0] + xi[1] * x[1] + xi[2] * x[2];
    ny[2] = -(xi[2] * y[2]) + y[1];
    ny[1] = -(xi[1] * y[2]) + y[0];
    ny[0] = -(xi[0] * y[2]) + s * y[2] + eta[0] * y[0] + eta[1] * y[1] + eta[2] * y[2];
    for (int m = 0; m <= 2; ++m) {
        nxi[m] = -(x[0] * y[m]);
        neta[m] = -(x[m] * y[2]);
    }
}

void check_M(int M) {
    if (M != 1 && M != 2) throw DomainError("hamiltonian flow: only M = 1 or M = 2 is supported");
}

double residual_of(std::initializer_list<cplx> terms) {
    cplx sum = 0.0;
    double scale = 0.0;
    for (const cplx& t : terms) {
        sum += t;
        scale = std::max(scale, std::abs(t));
    }
    return scale == 0.0 ? 0.0 : std::abs(sum) / scale;
}

double matrix_residual(const Eigen::MatrixXcd& lhs, const Eigen::MatrixXcd& rhs_m) {
    const double scale = std::max(lhs.cwiseAbs().maxCoeff(), rhs_m.cwiseAbs().maxCoeff());
    return scale == 0.0 ? 0.0 : (lhs - rhs_m).cwiseAbs().maxCoeff() / scale;
}

void check_params(const HardEdgeParams& params) {
    check_M(params.M);
    if (params.M == 2 && !params.generic())
        throw DomainError("hamiltonian flow: M = 2 requires nu2 - nu1 not an integer");
}

}  // namespace

HamiltonianState HamiltonianState::zero(int M, double s) {
    check_M(M);
    HamiltonianState st;
    st.M = M;
    st.s = s;
    st.x.assign(M + 1, 0.0);
    st.y.assign(M + 1, 0.0);
    st.xi.assign(M + 1, 0.0);
    st.eta.assign(M + 1, 0.0);
    return st;
}

Eigen::VectorXcd HamiltonianState::pack() const {
    const int n = M + 1;
    Eigen::VectorXcd v(4 * n);
    for (int m = 0; m < n; ++m) {
        v(m) = x[m];
        v(n + m) = y[m];
        v(2 * n + m) = xi[m];
        v(3 * n + m) = eta[m];
    }
    return v;
}

HamiltonianState HamiltonianState::unpack(int M, double s, const Eigen::VectorXcd& v) {
    HamiltonianState st = zero(M, s);
    const int n = M + 1;
    if (v.size() < 4 * n) throw DomainError("HamiltonianState::unpack: vector too short");
    for (int m = 0; m < n; ++m) {
        st.x[m] = v(m);
        st.y[m] = v(n + m);
        st.xi[m] = v(2 * n + m);
        st.eta[m] = v(3 * n + m);
    }
    return st;
}

SchlesingerView schlesinger_view(const HamiltonianState& st) {
    const int n = st.M + 1;
    SchlesingerView v;
    v.E = Eigen::MatrixXcd::Zero(n, n);
    v.C = Eigen::MatrixXcd::Zero(n, n);
    v.A.resize(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) v.A(i, j) = st.x[i] * st.y[j];
    if (st.M == 1) {
        v.E(1, 0) = 1.0;
        v.C << -st.eta[0], -1.0, st.xi[0] - st.eta[1], st.xi[1];
    } else {
        v.E(2, 0) = -1.0;
        v.C << -st.eta[0], -1.0, 0.0, -st.eta[1], 0.0, -1.0, st.xi[0] - st.eta[2], st.xi[1], st.xi[2];
    }
    return v;
}

HamiltonianState rhs(const HamiltonianState& st) {
    check_M(st.M);
    const int n = st.M + 1;
    std::vector<cplx> nx(n), ny(n), nxi(n), neta(n);
    numerators<cplx>(st.M, cplx(st.s), st.x, st.y, st.xi, st.eta, nx, ny, nxi, neta);
    HamiltonianState d = HamiltonianState::zero(st.M, st.s);
    for (int m = 0; m < n; ++m) {
        d.x[m] = nx[m] / st.s;
        d.y[m] = ny[m] / st.s;
        d.xi[m] = nxi[m];
        d.eta[m] = neta[m];
    }
    return d;
}

void rhs_packed(int M, double s, const Eigen::VectorXcd& v, Eigen::VectorXcd& dv) {
    const HamiltonianState d = rhs(HamiltonianState::unpack(M, s, v));
    const Eigen::VectorXcd p = d.pack();
    dv.resize(v.size());
    dv.head(p.size()) = p;
    if (v.size() > p.size()) dv(p.size()) = v(3 * (M + 1)) / s;  // log tau
}

HamiltonianState initial_state(const HardEdgeParams& params, double s0) {
    check_params(params);
    if (!(s0 > 0.0) || s0 > 1e-3) throw DomainError("initial_state: s0 must lie in (0, 1e-3]");
    HamiltonianState st = HamiltonianState::zero(params.M, s0);
    const double s = s0;
    const double e1 = params.e1(), e2 = params.e2(), e3 = params.e3();
    if (params.M == 1) {
        const double v = params.nu[1];
        const double g1 = gamma_real(v + 1.0), g2 = gamma_real(v + 2.0);
        st.x[0] = I / g1;
        st.x[1] = I * s / g2;
        st.y[0] = -I * std::pow(s, v + 1.0) / g2;
        st.y[1] = I * std::pow(s, v) / g1;
        st.eta[0] = -std::pow(s, v + 1.0) / (g1 * g2);
        st.eta[1] = -std::pow(s, v + 2.0) / ((v + 2.0) * g1 * g2);
        st.xi[0] = e2 + std::pow(s, v + 2.0) / ((v + 2.0) * g1 * g2);
        st.xi[1] = st.eta[0] - e1;
        st.series_order = std::min(1.0, 1.0 + v);
        return st;
    }
    const double n0 = params.nu[0], n1 = params.nu[1], n2 = params.nu[2];
    auto G = [](double a) { return gamma_real(a); };
    auto P = [&](double a) { return std::pow(s, a); };
    const double g11 = G(n1 - n0 + 1), g21 = G(n2 - n0 + 1), g12 = G(n1 - n0 + 2), g22 = G(n2 - n0 + 2);
    const double g13 = G(n1 - n0 + 3), g23 = G(n2 - n0 + 3);
    const double gab = G(n2 - n1), gba = G(n1 - n2), gab1 = G(n2 - n1 - 1), gba1 = G(n1 - n2 - 1);
    st.x[0] = -I * P(-n0) / (g11 * g21);
    st.x[1] = -I * n0 * P(-n0) / (g11 * g21) - I * (1 - n0) * P(1 - n0) / (g12 * g22);
    st.x[2] = -I * n0 * n0 * P(-n0) / (g11 * g21) + I * (1 - n0) * (1 - n0) * P(1 - n0) / (g12 * g22);
    st.y[0] = I * n0 * n2 * gab * P(n1) / g11 - I * (n0 * n2 - n0 + n1 - n2 + 1) * gab1 * P(n1 + 1) / g12 +
              I * n0 * n1 * gba * P(n2) / g21 - I * (n0 * n1 - n0 + n2 - n1 + 1) * gba1 * P(n2 + 1) / g22;
    st.y[1] = -I * (n0 + n2) * gab * P(n1) / g11 - I * (n0 + n1) * gba * P(n2) / g21;
    st.y[2] = I * gab * P(n1) / g11 + I * gba * P(n2) / g21;
    const double a1 = gab * P(n1 - n0 + 1) / (g12 * g11 * g21);
    const double a2 = gba * P(n2 - n0 + 1) / (g11 * g22 * g21);
    const double b1 = gab1 * P(n1 - n0 + 2) / (g13 * g11 * g22);
    const double b2 = gba1 * P(n2 - n0 + 2) / (g12 * g23 * g21);
    st.eta[0] = -a1 - a2;
    st.eta[1] = -n0 * a1 + (-n0 * n0 - n0 * n1 + 2 * n0 * n2 + n1 - n2 + 1) * b1 - n0 * a2 +
                (-n0 * n0 - n0 * n2 + 2 * n0 * n1 + n2 - n1 + 1) * b2;
    st.eta[2] = -n0 * n0 * a1 -
                (n0 * n0 * n0 - 2 * n0 - (2 * n0 * n0 - 2 * n0 + 1) * n2 + (1 - n0) * (1 - n0) * n1 + 1) * b1 -
                n0 * n0 * a2 -
                (n0 * n0 * n0 - 2 * n0 - (2 * n0 * n0 - 2 * n0 + 1) * n1 + (1 - n0) * (1 - n0) * n2 + 1) * b2;
    st.xi[0] = -e3 - n0 * n2 * a1 -
               (n2 * n0 * n0 - n0 * n0 - 2 * n2 * n2 * n0 + n1 * n2 * n0 + n1 * n0 + 2 * n0 + n2 * n2 - n1 * n2 -
                n1 - 1) *
                   b1 -
               n0 * n1 * a2 -
               (n1 * n0 * n0 - n0 * n0 - 2 * n1 * n1 * n0 + n1 * n2 * n0 + n2 * n0 + 2 * n0 + n1 * n1 - n1 * n2 -
                n2 - 1) *
                   b2;
    st.xi[1] = e2 + (n0 + n2) * a1 + (n0 + n1) * a2;
    st.xi[2] = -e1 - a1 - a2;
    st.series_order = std::min(1.0, 1.0 + std::min(n1, n2));
    return st;
}

ResolventStart resolvent_initial_state(const HardEdgeParams& params, double s0, int nodes) {
    check_params(params);
    if (!(s0 > 0.0)) throw DomainError("resolvent_initial_state: s0 must be positive");
    if (nodes < 4) throw DomainError("resolvent_initial_state: need at least 4 nodes");
    const KernelBundle bundle(params);
    const int M = params.M, n = nodes;
    const double p = substitution_power(params);
    const QuadratureRule rule = make_rule(RuleKind::gauss_legendre, n, 0.0, 1.0);
    std::vector<double> pts(n + 1);
    Eigen::VectorXd W(n);
    for (int k = 0; k < n; ++k) {
        const double t = rule.nodes[k];
        pts[k] = s0 * std::pow(t, p);
        W(k) = p * s0 * std::pow(t, p - 1.0) * rule.weights[k];
    }
    pts[n] = s0;
    const Eigen::MatrixXd K = hardedge_kernel_matrix(bundle, pts, pts);
    const Eigen::MatrixXd Kn = K.topLeftCorner(n, n);
    const Eigen::MatrixXd Id = Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd A = Id - Kn * W.asDiagonal();
    const Eigen::MatrixXd At = Id - Kn.transpose() * W.asDiagonal();
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A), lut(At);

    const int nf = M + 1;
    Eigen::MatrixXd Ph(n, nf), Ps(n, nf);
    for (int k = 0; k < n; ++k) {
        const auto f = bundle.phi(pts[k]);
        const auto g = bundle.psi(pts[k]);
        for (int j = 0; j < nf; ++j) {
            Ph(k, j) = f[j];
            Ps(k, j) = g[j];
        }
    }
    const auto phs = bundle.phi(s0);
    const auto pss = bundle.psi(s0);
    const Eigen::MatrixXd U = lu.solve(Ph);
    const Eigen::MatrixXd V = lut.solve(Ps);
    const Eigen::VectorXd Ks = K.row(n).head(n).transpose();  // K(s, x_k)
    const Eigen::VectorXd Kt = K.col(n).head(n);              // K(x_k, s)

    ResolventStart out;
    HamiltonianState& st = out.state;
    st = HamiltonianState::zero(M, s0);
    const double sgn = M % 2 == 0 ? 1.0 : -1.0;
    for (int j = 0; j < nf; ++j) {
        st.x[j] = I * (phs[j] + Ks.dot(W.cwiseProduct(U.col(j))));
        st.y[j] = I * (pss[j] + Kt.dot(W.cwiseProduct(V.col(j))));
    }
    for (int m = 0; m < nf; ++m) {
        const int k = M + 1 - m;  // e_k, k = M + 1 - m
        const double ek = params.e[k - 1];
        st.xi[m] = sgn * W.cwiseProduct(Ph.col(0)).dot(V.col(m)) + ((k % 2 == 0) ? ek : -ek);
        st.eta[m] = sgn * W.cwiseProduct(Ph.col(m)).dot(V.col(M));
    }
    double logdet = 0.0;
    const Eigen::MatrixXd& LU = lu.matrixLU();
    for (int k = 0; k < n; ++k) logdet += std::log(std::abs(LU(k, k)));
    out.log_det = logdet;
    return out;
}

double max_residual(const std::vector<Residual>& r) {
    double m = 0.0;
    for (const auto& e : r) m = std::max(m, e.value);
    return m;
}

const Residual& worst_residual(const std::vector<Residual>& r) {
    if (r.empty()) throw DomainError("worst_residual: empty list");
    return *std::max_element(r.begin(), r.end(), [](const Residual& a, const Residual& b) { return a.value < b.value; });
}

std::vector<Residual> first_integral_residuals(const HamiltonianState& st, const HardEdgeParams& params) {
    check_M(st.M);
    if (params.M != st.M) throw DomainError("first_integral_residuals: M mismatch");
    const double s = st.s, e1 = params.e1(), e2 = params.e2(), e3 = params.e3();
    const auto& x = st.x;
    const auto& y = st.y;
    const auto& xi = st.xi;
    const auto& eta = st.eta;
    std::vector<Residual> out;
    if (st.M == 1) {
        out.push_back({"energy", residual_of({eta[0] * x[0] * y[0], (eta[1] - xi[0] - s) * x[0] * y[1], x[1] * y[0],
                                              -xi[1] * x[1] * y[1], eta[0]})});
        out.push_back({"first", residual_of({xi[1], -eta[0], e1})});
        out.push_back({"second", residual_of({eta[1], xi[0], -e2})});
        out.push_back({"third", residual_of({x[0] * y[0], x[1] * y[1]})});
        out.push_back(
            {"fourth", residual_of({s * x[0] * y[1], eta[0] * xi[1], -eta[0], -xi[0], eta[1], e2})});
        return out;
    }
    const cplx sx0y1 = s * x[0] * y[1], sx0y2 = s * x[0] * y[2], sx1y2 = s * x[1] * y[2];
    out.push_back({"energy", residual_of({eta[0] * x[0] * y[0], eta[1] * x[0] * y[1], (-xi[0] + eta[2] + s) * x[0] * y[2],
                                          x[1] * y[0], x[2] * y[1], -xi[1] * x[1] * y[2], -xi[2] * x[2] * y[2],
                                          eta[0]})});
    out.push_back({"first", residual_of({xi[2], -eta[0], e1})});
    out.push_back({"third", residual_of({x[0] * y[0], x[1] * y[1], x[2] * y[2]})});
    out.push_back({"fourth", residual_of({sx0y2, -eta[0] * xi[2], -eta[1], xi[1], -e2, eta[0]})});
    out.push_back({"fifth", residual_of({-3.0 * e3, e2 * (e1 + eta[0] - 1.0),
                                         -eta[0] * (e1 - eta[0] + 1.0) * (e1 + eta[0] - 2.0), (2.0 * e1 - 1.0) * eta[1],
                                         (1.0 - e1) * xi[1], -sx0y1, sx0y2 * (-2.0 * eta[0] + xi[2] + 2.0), sx1y2,
                                         -3.0 * (eta[2] + xi[0])})});
    out.push_back({"sixth", residual_of({3.0 * e3, e2 * (-2.0 * e1 + eta[0] - 4.0),
                                         eta[0] * (e1 - eta[0] + 1.0) * (2.0 * e1 - eta[0] + 2.0),
                                         (-e1 - 1.0) * eta[1], (2.0 * e1 - 3.0 * eta[0] + 4.0) * xi[1], 2.0 * sx0y1,
                                         sx0y2 * (2.0 * e1 - eta[0] + 2.0), sx1y2, 3.0 * xi[0]})});
    out.push_back({"seventh", residual_of({e2 * (e1 + eta[0] - 1.0),
                                           -eta[0] * (e1 - eta[0] + 1.0) * (e1 + eta[0] - 2.0),
                                           (-e1 + 3.0 * eta[0] - 4.0) * eta[1], (1.0 - e1) * xi[1], -sx0y1,
                                           -sx0y2 * (e1 + eta[0] - 2.0), -2.0 * sx1y2, 3.0 * eta[2]})});
    out.push_back({"eighth", residual_of({e3, xi[0], -eta[2], -eta[0] * xi[1], -xi[2] * eta[1], -x[2] * y[0],
                                          eta[0] * x[2] * y[1], -xi[2] * x[1] * y[0], eta[0] * xi[2] * x[1] * y[1],
                                          -xi[1] * x[0] * y[0], (xi[0] - eta[2] - xi[2] * eta[1]) * x[0] * y[1],
                                          xi[1] * eta[1] * x[0] * y[2], (xi[0] - eta[2] - eta[0] * xi[1]) * x[1] * y[2],
                                          eta[1] * x[2] * y[2]})});
    out.push_back({"Idsx1y2", residual_of({e3, -sx1y2, 2.0 * eta[2], xi[0], -eta[1], eta[1] * xi[2]})});
    out.push_back({"Idsx0y1", residual_of({e2, -2.0 * e3, -sx0y1, -eta[2], -2.0 * xi[0], -xi[1], eta[0] * xi[1]})});
    return out;
}

std::vector<Residual> structural_residuals(const HamiltonianState& st, const HardEdgeParams& params) {
    check_M(st.M);
    if (params.M != st.M) throw DomainError("structural_residuals: M mismatch");
    const double s = st.s;
    std::vector<Residual> out;
    const HamiltonianState d = rhs(st);
    const SchlesingerView v = schlesinger_view(st);
    const SchlesingerView dv = schlesinger_view(d);
    const int n = st.M + 1;
    Eigen::MatrixXcd Ad(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) Ad(i, j) = d.x[i] * st.y[j] + st.x[i] * d.y[j];
    Eigen::MatrixXcd Cd = dv.C;
    // Constant entries of C do not move.
    if (st.M == 1) Cd(0, 1) = 0.0;
    else {
        Cd(0, 1) = 0.0;
        Cd(1, 2) = 0.0;
    }
    const Eigen::MatrixXcd CsE = v.C + s * v.E;
    out.push_back({"schlesinger_A", matrix_residual(s * Ad, CsE * v.A - v.A * CsE)});
    out.push_back({"schlesinger_C", matrix_residual(Cd, v.E * v.A - v.A * v.E)});

    double minors = 0.0;
    for (int i = 0; i < n; ++i)
        for (int k = i + 1; k < n; ++k)
            for (int j = 0; j < n; ++j)
                for (int l = j + 1; l < n; ++l)
                    minors = std::max(minors, residual_of({v.A(i, j) * v.A(k, l), -v.A(i, l) * v.A(k, j)}));
    out.push_back({"rank_one", minors});

    if (st.M == 1) {
        const double e1 = params.e1();
        out.push_back({"fold_x1", residual_of({st.x[1], std::pow(s, -e1) * st.y[0]})});
        out.push_back({"fold_y1", residual_of({st.y[1], -std::pow(s, e1) * st.x[0]})});

        // Tracy-Widom variables at t = 4 s.
        const double nu = params.nu[1], a = nu, t = 4.0 * s;
        const double sp = std::pow(s, nu / 2.0), sm = std::pow(s, -nu / 2.0);
        const cplx q = -I * sp * st.x[0];
        const cplx p = -I * sm * st.y[0] + (a / 2.0) * q;
        const cplx u = -4.0 * st.eta[0];
        const cplx w = -4.0 * st.xi[0] + (a / 2.0) * u;
        // d/dt = (1/4) d/ds
        const cplx dq = 0.25 * (-I * ((nu / 2.0) * sp / s * st.x[0] + sp * d.x[0]));
        const cplx dp = 0.25 * (-I * (-(nu / 2.0) * sm / s * st.y[0] + sm * d.y[0])) + (a / 2.0) * dq;
        const cplx du = -d.eta[0];
        const cplx dw = 0.25 * (-4.0 * d.xi[0]) + (a / 2.0) * du;
        out.push_back({"tw_1", residual_of({t * q * q, -u * u / 4.0, -u, -2.0 * w})});
        out.push_back({"tw_2", residual_of({u, -4.0 * p * p, (a * a - t + 2.0 * w) * q * q, -2.0 * q * p * u})});
        out.push_back({"tw_3", residual_of({du, -q * q})});
        out.push_back({"tw_4", residual_of({dw, -q * p})});
        out.push_back({"tw_5", residual_of({t * dq, -p, -q * u / 4.0})});
        out.push_back({"tw_6", residual_of({t * dp, -(a * a / 4.0 - t / 4.0 + w / 2.0) * q, p * u / 4.0})});
    }
    return out;
}

double imaginary_leakage(const HamiltonianState& st) {
    double m = 0.0;
    for (int k = 0; k <= st.M; ++k) {
        m = std::max(m, std::abs(st.xi[k].imag()) / (1.0 + std::abs(st.xi[k])));
        m = std::max(m, std::abs(st.eta[k].imag()) / (1.0 + std::abs(st.eta[k])));
    }
    return m;
}

Trajectory integrate(const HardEdgeParams& params, double s0, const std::vector<double>& s_targets, double tol,
                     const IntegrateOptions& options) {
    check_params(params);
    if (!(tol >= 1e-12 && tol <= 1e-6)) throw DomainError("integrate: tol must lie in [1e-12, 1e-6]");
    if (!(s0 > 0.0)) throw DomainError("integrate: s0 must be positive");
    for (std::size_t i = 0; i < s_targets.size(); ++i) {
        if (!(s_targets[i] >= s0)) throw DomainError("integrate: targets must not precede s0");
        if (i > 0 && !(s_targets[i] > s_targets[i - 1])) throw DomainError("integrate: targets must increase");
    }
    const int M = params.M;
    const ResolventStart start = resolvent_initial_state(params, s0, options.nystrom_nodes);
    const Eigen::VectorXcd packed = start.state.pack();
    Eigen::VectorXcd y0(packed.size() + 1);
    y0.head(packed.size()) = packed;
    y0(packed.size()) = start.log_det;
    // Components span many decades near s0; the absolute floor sits below the smallest.
    double floor_scale = std::abs(start.log_det);
    for (Eigen::Index i = 0; i < packed.size(); ++i)
        if (packed(i) != 0.0) floor_scale = std::min(floor_scale, std::abs(packed(i)));

    const double limit = 100.0 * tol;
    double run_tol = tol;
    for (int attempt = 0;; ++attempt) {
        Dop853::Options opt;
        // Off-manifold perturbations grow by about 1e3..1e4 up to s = 10.
        opt.rtol = std::max(1e-3 * run_tol, 2.5e-14);
        opt.atol = 1e-3 * opt.rtol * floor_scale;
        Dop853 solver([M](double s, const Dop853::State& v, Dop853::State& dv) { rhs_packed(M, s, v, dv); }, opt);
        Residual worst{"", 0.0};
        Dop853::Observer observer;
        if (options.monitor_integrals) {
            observer = [&](double s, const Dop853::State& v) {
                const auto r = first_integral_residuals(HamiltonianState::unpack(M, s, v), params);
                const Residual& w = worst_residual(r);
                if (w.value > worst.value) worst = w;
                return w.value <= limit;
            };
        }
        const auto sol = solver.solve(s0, y0, s_targets, observer);
        if (!solver.interrupted()) {
            Trajectory traj;
            traj.params = params;
            traj.s0 = s0;
            traj.tol = run_tol;
            traj.head_log_det = start.log_det;
            traj.tightenings = attempt;
            for (std::size_t i = 0; i < sol.size(); ++i) {
                traj.states.push_back(HamiltonianState::unpack(M, s_targets[i], sol[i]));
                traj.log_e.push_back(sol[i](packed.size()).real());
            }
            return traj;
        }
        if (attempt >= options.max_tightenings) {
            std::ostringstream msg;
            msg << std::scientific << std::setprecision(3) << "integrate: integral '" << worst.name << "' drifted to "
                << worst.value << " at s = " << solver.last_time();
            throw ConvergenceError(msg.str());
        }
        run_tol /= 10.0;
    }
}

std::vector<Eigen::VectorXcd> taylor_jet(const HamiltonianState& st, int order) {
    check_M(st.M);
    if (order < 0) throw DomainError("taylor_jet: order must be non-negative");
    const int n = st.M + 1;
    const std::size_t len = static_cast<std::size_t>(order) + 1;
    std::vector<Series> x(n, Series(len)), y(n, Series(len)), xi(n, Series(len)), eta(n, Series(len));
    for (int m = 0; m < n; ++m) {
        x[m].c[0] = st.x[m];
        y[m].c[0] = st.y[m];
        xi[m].c[0] = st.xi[m];
        eta[m].c[0] = st.eta[m];
    }
    Series s(len, st.s);
    if (len > 1) s.c[1] = 1.0;
    std::vector<Series> nx(n), ny(n), nxi(n), neta(n);
    for (int k = 0; k < order; ++k) {
        numerators<Series>(st.M, s, x, y, xi, eta, nx, ny, nxi, neta);
        // (s + h) sum (j+1) z_{j+1} h^j = sum f_j h^j for x, y; z' = g for xi, eta.
        for (int m = 0; m < n; ++m) {
            x[m].c[k + 1] = (nx[m].c[k] - double(k) * x[m].c[k]) / (st.s * (k + 1));
            y[m].c[k + 1] = (ny[m].c[k] - double(k) * y[m].c[k]) / (st.s * (k + 1));
            xi[m].c[k + 1] = nxi[m].c[k] / double(k + 1);
            eta[m].c[k + 1] = neta[m].c[k] / double(k + 1);
        }
    }
    std::vector<Eigen::VectorXcd> out(len, Eigen::VectorXcd(4 * n));
    for (std::size_t k = 0; k < len; ++k)
        for (int m = 0; m < n; ++m) {
            out[k](m) = x[m].c[k];
            out[k](n + m) = y[m].c[k];
            out[k](2 * n + m) = xi[m].c[k];
            out[k](3 * n + m) = eta[m].c[k];
        }
    return out;
}

ResolventJet eta_derivatives(const HamiltonianState& st, const HardEdgeParams& params) {
    if (params.M != st.M) throw DomainError("eta_derivatives: M mismatch");
    const int n = st.M + 1;
    const auto jet = taylor_jet(st, 4);
    ResolventJet out;
    out.s = st.s;
    out.params = params;
    double fact = 1.0;
    for (int k = 0; k <= 4; ++k) {
        if (k > 0) fact *= k;
        out.d[k] = fact * jet[k](3 * n).real();
    }
    const int top = st.M;  // y_M
    const cplx x0 = jet[0](0), yt = jet[0](n + top);
    const cplx x0p = jet[1](0), ytp = jet[1](n + top);
    const double s = st.s;
    out.U = (s * x0 * ytp).real();
    out.V = (s * x0p * yt).real();
    out.W = (s * s * x0 * 2.0 * jet[2](n + top)).real();
    out.Z = (s * s * 2.0 * jet[2](0) * yt).real();
    out.G = (x0 / yt).real();
    if (st.M == 2) out.F = std::sqrt(std::max(0.0, f_squared(out)));
    return out;
}

GapCurve gap_from_eta0(const Trajectory& traj) {
    GapCurve c;
    c.abscissa_kind = Abscissa::s;
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        GapPoint p;
        p.abscissa = traj.states[i].s;
        p.logE = traj.log_e[i];
        p.E = std::exp(p.logE);
        p.est_error = traj.tol * std::max(1.0, std::abs(p.logE));
        c.points.push_back(p);
    }
    return c;
}

}  // namespace hardedge
