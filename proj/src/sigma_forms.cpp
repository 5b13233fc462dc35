#include "hardedge/sigma_forms.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <initializer_list>

namespace hardedge {

namespace {

double normalized(std::initializer_list<double> terms) {
    double sum = 0.0, scale = 0.0;
    for (double t : terms) {
        sum += t;
        scale = std::max(scale, std::abs(t));
    }
    return scale == 0.0 ? 0.0 : std::abs(sum) / scale;
}

void require_m2(const ResolventJet& jet, const char* what) {
    if (jet.params.M != 2) throw DomainError(std::string(what) + ": M = 2 only");
    if (jet.d[1] == 0.0) throw DomainError(std::string(what) + ": eta0' vanishes");
}

}  // namespace

RadicalF radical_F(const ResolventJet& jet, const HamiltonianState* state) {
    const double f2 = f_squared(jet);
    const double h1 = jet.d[1];
    const double scale = std::max(1.0, jet.s * jet.s) * std::max(1.0, h1 * h1) * 1e-10;
    if (f2 < -scale) throw DomainError("radical_F: negative square");
    RadicalF r;
    r.from_formula = std::sqrt(std::max(0.0, f2));
    if (state) {
        if (state->M != 2) throw DomainError("radical_F: bilinear form needs M = 2");
        const auto& x = state->x;
        const auto& y = state->y;
        r.from_bilinear = (-3.0 * x[0] * y[1] - 3.0 * x[1] * y[2] - jet.params.e1() * x[0] * y[2]).real();
    }
    return r;
}

double p3_sigma_residual(double s, double h, double h1, double h2, double e1, double e2) {
    const double q = h1 * h1;
    return normalized({s * s * h2 * h2, -e1 * e1 * q, 4.0 * q * s * h1, -4.0 * q * h, 4.0 * q * s, 4.0 * q * e2,
                       -4.0 * h * h1});
}

std::array<double, kQuarticBlocks> quartic_blocks(const ResolventJet& jet) {
    require_m2(jet, "quartic_blocks");
    const double s = jet.s, h = jet.d[0], h1 = jet.d[1], h2 = jet.d[2], h3 = jet.d[3], h4 = jet.d[4];
    const double F = jet.F;
    const double e1 = jet.params.e1(), e2 = jet.params.e2(), e3 = jet.params.e3();
    const double s2 = s * s, s3 = s2 * s, s4 = s2 * s2, s5 = s4 * s, s6 = s3 * s3;
    const double q = e1 * e1 - 3.0 * e2;  // e1^2 - 3 e2
    const double P = 27.0 * (e3 + s) + 2.0 * e1 * e1 * e1 - 9.0 * e2 * e1;
    const double h1_2 = h1 * h1, h1_3 = h1_2 * h1, h1_4 = h1_2 * h1_2, h1_5 = h1_4 * h1;
    const double h2_2 = h2 * h2, h2_3 = h2_2 * h2, h2_4 = h2_2 * h2_2;
    std::array<double, kQuarticBlocks> b{};
    b[0] = 27.0 * s6 * h4 * h4 * h1_2;
    b[1] = 27.0 * s4 *
           (-F * h2 + 3.0 * s2 * h2_3 + 6.0 * s * h1_3 * h2 + 2.0 * h1_2 * (h2 + 3.0 * s * h3) -
            5.0 * s * h1 * h2 * (h2 + s * h3) + 4.0 * h1_4) *
           h4;
    b[2] = 81.0 * s6 * h3 * h3 * h3 * h1;
    b[3] = (-27.0 * e1 * e1 * s4 * h1_2 + 81.0 * e2 * s4 * h1_2 + 18.0 * F * s4 - 54.0 * s6 * h2_2 -
            162.0 * s5 * h1 * h2 + 567.0 * s5 * h1_3 - 81.0 * s4 * h * h1_2 + 243.0 * s4 * h1_2) *
           h3 * h3;
    b[4] = -3.0 * s2 *
           (F * (15.0 * s * h2 - 2.0 * h1 * (q - 9.0 * s * h1 + 21.0 * h)) +
            9.0 * s2 * h1 * h2_2 * (-2.0 * q + 54.0 * s * h1 - 6.0 * h + 11.0) +
            4.0 * h1 * (9.0 * s * (q + 3.0 * h - 3.0) * h1_3 - P * h1 - 108.0 * s2 * h1_4 + 27.0 * h) -
            18.0 * s * h1_2 * h2 * (-q + 25.0 * s * h1 - 3.0 * h + 3.0) - 45.0 * s3 * h2_3) *
           h3;
    b[5] = 27.0 * s4 * (-q + 27.0 * s * h1 - 3.0 * h + 1.0) * h2_4;
    b[6] = -54.0 * s3 * h1 * (-q + 24.0 * s * h1 - 3.0 * h + 1.0) * h2_3;
    b[7] = -9.0 * s2 *
           (F * (-q + 18.0 * s * h1 + 6.0 * h + 1.0) - 3.0 * s * (4.0 * q + 12.0 * h + 17.0) * h1_3 +
            3.0 * (q + 3.0 * h - 1.0) * h1_2 + P * h1 + 108.0 * s2 * h1_4 - 27.0 * h) *
           h2_2;
    b[8] = 6.0 * s * h1 *
           (F * (q - 18.0 * s * h1 + 21.0 * h) - 18.0 * s * (q + 3.0 * h - 1.0) * h1_3 + 2.0 * P * h1 +
            270.0 * s2 * h1_4 - 54.0 * h) *
           h2;
    b[9] = -4.0 * h1_2 *
           (F * (q - 9.0 * s * h1 + 3.0 * h) * (q - 9.0 * s * h1 + 12.0 * h) + 27.0 * s2 * (q + 3.0 * h - 1.0) * h1_4 -
            9.0 * s * P * h1_2 +
            (3.0 * (27.0 * (e3 + 4.0 * s) + 2.0 * e1 * e1 * e1 - 9.0 * e2 * e1) * h + q * P) * h1 -
            27.0 * h * (q + 3.0 * h) - 243.0 * s3 * h1_5);
    return b;
}

QuarticPaths quartic_paths(const ResolventJet& jet) {
    const auto b = quartic_blocks(jet);
    QuarticPaths out;
    for (double v : b) {
        out.typeset += v;
        out.scale += std::abs(v);
    }
    const double s = jet.s, h = jet.d[0], h1 = jet.d[1], h2 = jet.d[2], h3 = jet.d[3], h4 = jet.d[4];
    const double F = jet.F;
    const double e1 = jet.params.e1(), e2 = jet.params.e2(), e3 = jet.params.e3();
    // U, V from their sum and difference.
    const double U = (-s * h2 - (F + 2.0 * e1 * h1) / 3.0) / 2.0;
    const double V = (-s * h2 + (F + 2.0 * e1 * h1) / 3.0) / 2.0;
    Eigen::Matrix2d A;
    A << 1.0, 1.0, 3.0 * V / h1 + 3.0 - e1, 3.0 * U / h1 + 3.0 + e1;
    Eigen::Vector2d rhs_wz(2.0 * U * V / h1 - s * s * h3,
                           -((1.0 + e2 - h + 6.0 * s * h1) * (U + V) - e1 * (U - V) - 2.0 * s * h1 * h1 - s * s * s * h4));
    const Eigen::Vector2d wz = A.fullPivLu().solve(rhs_wz);
    const double W = wz(0), Z = wz(1);

    // Bilinears in terms of (xi1, eta1) and U, V, W, Z.
    const double xi2 = h - e1;
    const double x0y2 = -h1;
    auto integrals = [&](const Eigen::Vector3d& u, double eta1) {
        const double xi1 = u(0), xi0 = u(1), eta2 = u(2);
        const double x0y1 = -(h - e1) * h1 + U;
        const double x1y2 = h * h1 - V;
        const double x0y0 = -s * h1 * h1 - h1 * xi1 + (1.0 + h - e1) * U + W;
        const double x2y2 = h1 * eta1 - s * h1 * h1 + (1.0 + h) * V + Z;
        const double x1y0 = x1y2 * x0y0 / x0y2, x2y1 = x2y2 * x0y1 / x0y2;
        const double x1y1 = x1y2 * x0y1 / x0y2, x2y0 = x2y2 * x0y0 / x0y2;
        const double I6 = 3.0 * e3 + e2 * (-2.0 * e1 + h - 4.0) + h * (e1 - h + 1.0) * (2.0 * e1 - h + 2.0) +
                          (-e1 - 1.0) * eta1 + (2.0 * e1 - 3.0 * h + 4.0) * xi1 + 2.0 * s * x0y1 +
                          s * x0y2 * (2.0 * e1 - h + 2.0) + s * x1y2 + 3.0 * xi0;
        const double I7 = e2 * (e1 + h - 1.0) - h * (e1 - h + 1.0) * (e1 + h - 2.0) + (-e1 + 3.0 * h - 4.0) * eta1 +
                          (1.0 - e1) * xi1 - s * x0y1 - s * x0y2 * (e1 + h - 2.0) - 2.0 * s * x1y2 + 3.0 * eta2;
        const double I8 = e3 + xi0 - eta2 - h * xi1 - xi2 * eta1 - x2y0 + h * x2y1 - xi2 * x1y0 + h * xi2 * x1y1 -
                          xi1 * x0y0 + (xi0 - eta2 - xi2 * eta1) * x0y1 + xi1 * eta1 * x0y2 +
                          (xi0 - eta2 - h * xi1) * x1y2 + eta1 * x2y2;
        return Eigen::Vector3d(I6, I7, I8);
    };
    // The fourth integral fixes eta1 - xi1; with it the remaining three are affine in (xi1, xi0, eta2).
    const double shift = -s * h1 - h * xi2 - e2 + h;  // eta1 = xi1 + shift
    auto system = [&](const Eigen::Vector3d& u) { return integrals(u, u(0) + shift); };
    const Eigen::Vector3d r0 = system(Eigen::Vector3d::Zero());
    Eigen::Matrix3d J;
    for (int k = 0; k < 3; ++k) J.col(k) = system(Eigen::Vector3d::Unit(k)) - r0;
    const Eigen::Vector3d u = J.fullPivLu().solve(-r0);
    const double xi1 = u(0), xi0 = u(1), eta2 = u(2), eta1 = xi1 + shift;
    const double ham = U * Z - V * W + e1 * U * V - h1 * (h + s * (U - V) * h1) +
                       h1 * h1 * (-e1 * eta1 + h * (eta1 + xi1) + eta2 - xi0 + s);
    out.pipeline = -27.0 * F * F * (1.0 + e1 * h1 + U - V) / h1 * ham;
    return out;
}

double quartic_ode_residual(const ResolventJet& jet) {
    const auto b = quartic_blocks(jet);
    double sum = 0.0, scale = 0.0;
    for (double v : b) {
        sum += v;
        scale += std::abs(v);
    }
    return scale == 0.0 ? 0.0 : std::abs(sum) / scale;
}

SpecialResiduals special_case_residuals(const ResolventJet& jet) {
    const auto& nu = jet.params.nu;
    if (jet.params.M != 2 || nu[1] != -0.5 || nu[2] != 0.0)
        throw DomainError("special_case_residuals: only nu = (0, -1/2, 0)");
    const double s = jet.s, h = jet.d[0], h1 = jet.d[1], h2 = jet.d[2], h3 = jet.d[3];
    SpecialResiduals r;
    r.third_order = normalized({-12.0 * s * s * h1 * h3, 9.0 * s * s * h2 * h2, -12.0 * s * h1 * h2,
                                0.75 * h1 * h1 * (-48.0 * s * h1), 0.75 * h1 * h1 * 16.0 * h, 0.75 * h1 * h1,
                                3.0 * h1, -9.0});
    r.f_identity = std::abs(h1 - 6.0 + 2.0 * jet.F) / std::max({std::abs(h1), 6.0, 2.0 * jet.F});
    return r;
}

Recovered recover_from_jet(const ResolventJet& jet) {
    require_m2(jet, "recover_from_jet");
    const double s = jet.s, h = jet.d[0], h1 = jet.d[1], h2 = jet.d[2], h3 = jet.d[3], h4 = jet.d[4];
    const double F = jet.F;
    if (F == 0.0) throw DomainError("recover_from_jet: F vanishes");
    const double e1 = jet.params.e1(), e2 = jet.params.e2(), e3 = jet.params.e3();
    const double s2 = s * s, s3 = s2 * s, s4 = s2 * s2;
    const double h1_2 = h1 * h1, h1_3 = h1_2 * h1;
    const double h2_2 = h2 * h2, h2_3 = h2_2 * h2, h2_4 = h2_2 * h2_2;
    const double e1_2 = e1 * e1, e1_3 = e1_2 * e1, e1_4 = e1_2 * e1_2;
    const double K = 3.0 + e1 - 3.0 * h;
    Recovered r{};
    r.xi0 = -K * (e1_2 * (-F) + 3.0 * e2 * F + 3.0 * (9.0 - F) * h) / (162.0 * h1) +
            (9.0 * e1 * (3.0 * e2 * (h - 1.0) + 3.0 * e3 + (3.0 - F) * s - 3.0 * (h - 1.0) * h) +
             27.0 * (h * (4.0 * e2 - (3.0 - F) * s + (h - 2.0) * h + 1.0) - 3.0 * e3 * (h + 1.0) + 3.0 * s) -
             6.0 * e1_3 * (h - 1.0) - 9.0 * e1_2 * (e2 + 2.0 * h) + 2.0 * e1_4) /
                162.0 -
            s * (e1 - 3.0 * h + 1.0) * h1 / 6.0 +
            (K * s / (108.0 * h1_2) * (36.0 * s * h1_3 / F + F) + s2 / 6.0) * h2 +
            K * (-s2 * (e1_2 - 3.0 * e2 + 3.0 * h - 3.0) / (18.0 * F * h1) + s3 / F - F * s2 / (72.0 * h1_3)) * h2_2 -
            K * s3 * h2_3 / (4.0 * F * h1_2) + K * s4 * h2_4 / (8.0 * F * h1_3) +
            K * (-s4 * h2_2 / (4.0 * F * h1_2) + s3 * h2 / (2.0 * F * h1) + F * s2 / (108.0 * h1_2)) * h3 +
            K * s4 * h2 * h4 / (6.0 * F * h1);
    r.xi1 = (e1_2 * (-F) + 3.0 * e2 * F + 3.0 * (9.0 - F) * h) / (54.0 * h1) +
            (-9.0 * (-6.0 * e2 + 3.0 * e3 + (3.0 - F) * s - 3.0 * (h - 1.0) * h) + 9.0 * e1 * (e2 - 4.0 * h) -
             2.0 * e1_3) /
                54.0 +
            s * h1 / 2.0 - (s2 * h1 / F + F * s / (36.0 * h1_2)) * h2 +
            (s2 * (e1_2 - 3.0 * e2 + 3.0 * h - 3.0) / (6.0 * F * h1) - 3.0 * s3 / F + F * s2 / (24.0 * h1_3)) * h2_2 +
            3.0 * s3 * h2_3 / (4.0 * F * h1_2) - 3.0 * s4 * h2_4 / (8.0 * F * h1_3) -
            (-3.0 * s4 * h2_2 / (4.0 * F * h1_2) + 3.0 * s3 * h2 / (2.0 * F * h1) + F * s2 / (36.0 * h1_2)) * h3 -
            s4 * h2 / (2.0 * F * h1) * h4;
    r.eta1 = (9.0 - F) * h / (18.0 * h1) +
             (-9.0 * (3.0 * e3 + (3.0 - F) * s + 3.0 * (h - 1.0) * h) + 9.0 * e1 * (e2 + 2.0 * h) - 2.0 * e1_3) / 54.0 -
             s * h1 / 2.0 - (e1_2 - 3.0 * e2) * (e1_2 - 3.0 * e2 + 3.0 * h) * 2.0 / (27.0 * F) * h1 +
             (e1_2 - 3.0 * e2) * 2.0 * s / (3.0 * F) * h1_2 + (e1_2 - 3.0 * (e2 + h)) * s * h2 / (9.0 * F) +
             (s2 * (e1_2 - 3.0 * e2 + 6.0 * h - 1.0) / (6.0 * F * h1) - 9.0 * s3 / (2.0 * F)) * h2_2 +
             (s2 * (e1_2 - 3.0 * (e2 + h)) / (9.0 * F) - 5.0 * s3 * h2 / (6.0 * F * h1) + s3 * h1 / F) * h3 +
             s4 * h3 * h3 / (3.0 * F * h1) - s4 * h4 * h2 / (2.0 * F * h1);
    const double L = 2.0 * e1 - 3.0 * h + 3.0;
    r.eta2 =
        h * (9.0 * L - F * (2.0 * e1 - 3.0 * h)) / (54.0 * h1) +
        (-4.0 * e1_4 + 6.0 * (h - 1.0) * e1_3 + 18.0 * (e2 + 2.0 * h) * e1_2 -
         9.0 * (2.0 * (3.0 - F) * s + 6.0 * e3 + 3.0 * e2 * (h - 1.0) + 6.0 * (h - 1.0) * h) * e1 +
         27.0 * (-3.0 * s + 3.0 * e3 * (h - 1.0) + h * (3.0 * s - 2.0 * e2 + (h - 2.0) * h + 1.0))) /
            162.0 -
        (8.0 * e1_4 * e1 - 12.0 * (h - 1.0) * e1_4 + 24.0 * (h - 2.0 * e2) * e1_3 +
         36.0 * (2.0 * e2 * (h - 1.0) - (h - 2.0) * h) * e1_2 - 18.0 * (4.0 * e2 * (h - e2) - 3.0 * F * s) * e1 +
         27.0 * (-4.0 * (e2 - h) * (e2 * (h - 1.0) + h) - F * s * (3.0 * h - 1.0))) /
            (162.0 * F) * h1 -
        2.0 * (9.0 * h * h + 3.0 * (2.0 * e1_2 - 6.0 * e2 - 3.0) * h - (2.0 * e1 + 3.0) * (e1_2 - 3.0 * e2)) * h1_2 * s /
            (9.0 * F) +
        6.0 * h * h1_3 * s2 / F +
        (2.0 * s2 * h * h1 / F -
         s * (-9.0 * F * s - 12.0 * (2.0 * e1 + 3.0) + L * (6.0 * (e2 + h + 2.0) - 2.0 * e1_2)) / (54.0 * F)) *
            h2 +
        (-3.0 * (2.0 * e1 - 2.0 * h + 3.0) * s3 / (2.0 * F) -
         (6.0 * e1 + L * (-e1_2 + 3.0 * e2 - 6.0 * h - 2.0) + 9.0) * s2 / (18.0 * F * h1)) *
            h2_2 +
        ((2.0 * e1 + 3.0 * h + 3.0) * h1 * s3 / (3.0 * F) - 5.0 * L * h2 * s3 / (18.0 * F * h1) -
         ((3.0 * (e2 + h + 2.0) - e1_2) * L - 6.0 * (2.0 * e1 + 3.0)) * s2 / (27.0 * F)) *
            h3 +
        L * h3 * h3 * s4 / (9.0 * F * h1) - L * h2 * h4 * s4 / (6.0 * F * h1);
    r.x0y1 = (-F + 4.0 * e1 * h1 - 6.0 * h * h1 - 3.0 * s * h2) / 6.0;
    r.x1y2 = (-F - 2.0 * e1 * h1 + 6.0 * h * h1 + 3.0 * s * h2) / 6.0;
    r.x0y2 = -h1;
    r.x0y0 = ((e1 * (e1 + 3.0) - 3.0 * e2) * F - 3.0 * (2.0 * F + 9.0) * h) / 54.0 +
             h1 *
                 (9.0 * (2.0 * e1 + 1.0) * h + 9.0 * (3.0 * (e3 + s) - 4.0 * e2) +
                  e1 * (2.0 * e1 * (e1 + 3.0) - 9.0 * e2) - 9.0 * F * s - 27.0 * h * h) /
                 54.0 -
             s * h1_2 / 2.0 + 2.0 * s * h1_3 / F +
             h2 * (-s * (e1_2 - 3.0 * e2 + 3.0 * h - 3.0) * h1 / (3.0 * F) + s * (e1 - 3.0 * h - 1.0) / 6.0 +
                   7.0 * s2 * h1_2 / F - F * s / (18.0 * h1)) +
             h2_2 * (-s2 * (e1_2 - 3.0 * e2 + 3.0 * h + 6.0) / (6.0 * F) + 3.0 * s3 * h1 / F - F * s2 / (24.0 * h1_2)) +
             3.0 * s4 * h2_4 / (8.0 * F * h1_2) +
             h3 * (-3.0 * s4 * h2_2 / (4.0 * F * h1) + 3.0 * s2 * h1 / F + F * s2 / (36.0 * h1) - s2 / 6.0) +
             h4 * (s4 * h2 / (2.0 * F) + s3 * h1 / F);
    r.x1y1 = e1 * F / 18.0 + (-3.0 * (3.0 * e1 + 1.0) * h + e1_2 + 3.0 * e2 + 9.0 * h * h) * h1 / 9.0 + s * h1_2 +
             s * (2.0 - 3.0 * e1 + 6.0 * h) * h2 / 6.0 + s2 * h3 / 3.0;
    r.x2y2 = (-e1 * (e1 + 6.0) * F + 3.0 * e2 * F + 3.0 * (2.0 * F + 9.0) * h) / 54.0 +
             h1 *
                 (9.0 * (2.0 * e2 - 3.0 * e3 + (F - 3.0) * s - 3.0 * h * h + h) + 9.0 * e1 * (e2 + 4.0 * h) -
                  2.0 * e1_3 - 12.0 * e1_2) /
                 54.0 -
             s * h1_2 / 2.0 - 2.0 * s * h1_3 / F +
             h2 * (s * (e1_2 - 3.0 * e2 + 3.0 * h - 3.0) * h1 / (3.0 * F) + s * (2.0 * e1 - 3.0 * h - 1.0) / 6.0 -
                   7.0 * s2 * h1_2 / F + F * s / (18.0 * h1)) +
             h2_2 * (s2 * (e1_2 - 3.0 * e2 + 3.0 * h + 6.0) / (6.0 * F) - 3.0 * s3 * h1 / F + F * s2 / (24.0 * h1_2)) -
             3.0 * s4 * h2_4 / (8.0 * F * h1_2) +
             h3 * (3.0 * s4 * h2_2 / (4.0 * F * h1) - 3.0 * s2 * h1 / F - F * s2 / (36.0 * h1) - s2 / 6.0) +
             h4 * (-s4 * h2 / (2.0 * F) - s3 * h1 / F);
    return r;
}

std::vector<Residual> appendix_recover(const HamiltonianState& state, const HardEdgeParams& params) {
    if (state.M != 2 || params.M != 2) throw DomainError("appendix_recover: M = 2 only");
    const ResolventJet jet = eta_derivatives(state, params);
    const Recovered r = recover_from_jet(jet);
    const auto& x = state.x;
    const auto& y = state.y;
    auto rel = [](double rec, cplx val) {
        const double v = val.real();
        const double scale = std::max({std::abs(rec), std::abs(v), 1e-300});
        return std::abs(rec - v) / scale;
    };
    std::vector<Residual> out{
        {"Rep:xi0", rel(r.xi0, state.xi[0])},      {"Rep:xi1", rel(r.xi1, state.xi[1])},
        {"Rep:eta1", rel(r.eta1, state.eta[1])},   {"Rep:eta2", rel(r.eta2, state.eta[2])},
        {"Rep:x0y1", rel(r.x0y1, x[0] * y[1])},    {"Rep:x1y2", rel(r.x1y2, x[1] * y[2])},
        {"Rep:x0y2", rel(r.x0y2, x[0] * y[2])},    {"Rep:x0y0", rel(r.x0y0, x[0] * y[0])},
        {"Rep:x1y1", rel(r.x1y1, x[1] * y[1])},    {"Rep:x2y2", rel(r.x2y2, x[2] * y[2])},
    };
    // (3 s G'/G + 2 e1)^2 - 4 e1^2 = 12 (h - e2 - 3 s h' - s h''/h') - 12 s^2 (h'''/h' - (3/4)(h''/h')^2)
    const double s = jet.s, h = jet.d[0], h1 = jet.d[1], h2 = jet.d[2], h3 = jet.d[3];
    const double e1 = params.e1(), e2 = params.e2();
    const double g = ((jet.V - jet.U) / (s * x[0] * y[2])).real();
    const double lhs = (3.0 * s * g + 2.0 * e1) * (3.0 * s * g + 2.0 * e1);
    const double terms[] = {-4.0 * e1 * e1, -12.0 * h, 12.0 * e2, 36.0 * s * h1, 12.0 * s * h2 / h1,
                            12.0 * s * s * h3 / h1, -9.0 * s * s * (h2 / h1) * (h2 / h1)};
    double sum = lhs, scale = std::abs(lhs);
    for (double t : terms) {
        sum += t;
        scale = std::max(scale, std::abs(t));
    }
    out.push_back({"GODE", scale == 0.0 ? 0.0 : std::abs(sum) / scale});
    return out;
}

}  // namespace hardedge
