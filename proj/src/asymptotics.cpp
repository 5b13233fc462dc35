#include "hardedge/asymptotics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace hardedge {

namespace {

using cd = std::complex<double>;

const double kPi = std::acos(-1.0);

Eigen::RowVector3d tail_basis(double r) { return {std::pow(r, 4.0 / 3.0), std::pow(r, 2.0 / 3.0), 1.0}; }

void sort_and_check(std::vector<TailPoint>& pts) {
    std::sort(pts.begin(), pts.end(), [](const TailPoint& a, const TailPoint& b) { return a.r < b.r; });
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (!(pts[i].r > 0.0) || !std::isfinite(pts[i].logE)) throw DomainError("fit_tail: bad point");
        if (i > 0 && pts[i].r == pts[i - 1].r) throw DomainError("fit_tail: repeated r");
    }
}

TailFit solve_window(const std::vector<TailPoint>& pts, std::size_t first, std::size_t count) {
    Eigen::MatrixXd A(count, 3);
    Eigen::VectorXd b(count);
    TailFit fit;
    for (std::size_t i = 0; i < count; ++i) {
        A.row(i) = tail_basis(pts[first + i].r);
        b(i) = pts[first + i].logE;
        fit.window.push_back(pts[first + i].r);
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv(2) <= 1e-13 * sv(0)) throw DomainError("fit_tail: degenerate design");
    const Eigen::Vector3d c = svd.solve(b);
    fit.a1 = c(0);
    fit.b1 = c(1);
    fit.c1 = c(2);
    fit.residual = (A * c - b).cwiseAbs().maxCoeff();
    return fit;
}

// Index of the first point in the window attributed to pts[k].
std::optional<std::size_t> window_start(std::size_t k, std::size_t n, TripleWindow w) {
    if (w == TripleWindow::centered) {
        if (k == 0 || k + 1 >= n) return std::nullopt;
        return k - 1;
    }
    if (k + 2 >= n) return std::nullopt;
    return k;
}

}  // namespace

IndicialReport indicial_exponents(const HardEdgeParams& params) {
    if (params.M != 2) throw DomainError("indicial_exponents: M = 2 only");
    IndicialReport rep;
    rep.params = params;
    const double n0 = params.nu[0], n1 = params.nu[1], n2 = params.nu[2];
    const double d01 = n0 - n1, d02 = n0 - n2, d12 = n1 - n2;
    rep.fixed = {d01 + 1.0, -d01 + 1.0, d02 + 1.0, -d02 + 1.0, d12 + 1.0, -d12 + 1.0};
    rep.Q = n0 * n0 + n1 * n1 + n2 * n2 - n0 * n1 - n0 * n2 - n1 * n2;
    const double rq = 2.0 * std::sqrt(rep.Q) / std::sqrt(3.0);
    rep.pair_q = {1.0 + rq, 1.0 - rq};
    const cd root = std::sqrt(3.0) * std::sqrt(cd(4.0 * rep.Q - 1.0));
    rep.pair_disc = {(3.0 + root) / 6.0, (3.0 - root) / 6.0};
    for (double v : rep.fixed) rep.lambda_candidates.emplace_back(v);
    rep.lambda_candidates.emplace_back(0.0);
    for (double v : rep.pair_q) rep.lambda_candidates.emplace_back(v);
    for (const cd& v : rep.pair_disc) rep.lambda_candidates.push_back(v);

    rep.x_disc = (n0 + n1 - 2.0 * n2) * (2.0 * n0 - n1 - n2) * (n0 - 2.0 * n1 + n2);
    rep.y_disc = (9.0 * d01 * d01 - 4.0) * (9.0 * d02 * d02 - 4.0) * (9.0 * d12 * d12 - 4.0) / 27.0;
    // C^3 = -x +- sqrt(x^2 + y)
    const double x = rep.x_disc, y = rep.y_disc;
    const cd disc = std::sqrt(cd(x * x + y));
    const cd omega = std::polar(1.0, 2.0 * kPi / 3.0);
    for (const cd& t : {-x + disc, -x - disc}) {
        if (t == 0.0) {
            for (int k = 0; k < 3; ++k) rep.fractional_C1.emplace_back(0.0);
            continue;
        }
        cd c = std::pow(t, 1.0 / 3.0);
        for (int k = 0; k < 3; ++k) {
            // one Newton step on C^3 = t
            c -= (c * c * c - t) / (3.0 * c * c);
            rep.fractional_C1.push_back(c);
            c *= omega;
        }
    }
    return rep;
}

double fractional_residual(const IndicialReport& report, std::complex<double> C) {
    const cd c3 = C * C * C;
    const cd a = 27.0 * c3 * c3, b = 54.0 * report.x_disc * c3, c = -27.0 * report.y_disc;
    const double scale = std::abs(a) + std::abs(b) + std::abs(c);
    return scale == 0.0 ? 0.0 : std::abs(a + b + c) / scale;
}

double tail_model(double x, TailModel which, Abscissa kind) {
    if (!(x > 0.0)) throw DomainError("tail_model: abscissa must be positive");
    const double s = kind == Abscissa::r ? 0.25 * x * x : x;
    switch (which) {
        case TailModel::eta0_leading:
            return -3.0 * std::pow(2.0, -4.0 / 3.0) * std::pow(s, 2.0 / 3.0);
        case TailModel::logE_leading:
            return -9.0 * std::pow(2.0, -7.0 / 3.0) * std::pow(s, 2.0 / 3.0);
        case TailModel::logE_refined:
            return -9.0 * std::pow(2.0, -7.0 / 3.0) * std::pow(s, 2.0 / 3.0) -
                   3.0 * std::pow(2.0, -5.0 / 3.0) * std::cbrt(s);
    }
    return 0.0;
}

double leading_a1() { return -9.0 * std::pow(2.0, -11.0 / 3.0); }

std::array<double, 7> special_small_s_coefficients() {
    const double p = kPi, p2 = p * p, p3 = p2 * p;
    return {0.0,
            -2.0 / std::sqrt(p),
            -2.0 * (4.0 - p) / p,
            -(32.0 / 3.0) * (3.0 - p) / std::pow(p, 1.5),
            -(16.0 / 9.0) * (72.0 - 32.0 * p + 3.0 * p2) / p2,
            -(64.0 / 45.0) * (360.0 - 200.0 * p + 27.0 * p2) / std::pow(p, 2.5),
            -(512.0 / 675.0) * (2700.0 - 1800.0 * p + 347.0 * p2 - 15.0 * p3) / p3};
}

std::array<double, 5> special_small_s_eta0(double s, int terms) {
    if (!(s > 0.0)) throw DomainError("special_small_s_eta0: s must be positive");
    if (terms < 1 || terms > 6) throw DomainError("special_small_s_eta0: 1 to 6 terms");
    const auto c = special_small_s_coefficients();
    std::array<double, 5> out{};
    for (int k = 1; k <= terms; ++k) {
        const double a = 0.5 * k;
        double coef = c[k];
        for (int n = 0; n < 5; ++n) {
            out[n] += coef * std::pow(s, a - n);
            coef *= a - n;
        }
    }
    return out;
}

std::vector<LocalA1> local_a1_sequence(std::vector<TailPoint> points, TripleWindow window) {
    sort_and_check(points);
    std::vector<LocalA1> out;
    for (std::size_t k = 0; k < points.size(); ++k) {
        const auto first = window_start(k, points.size(), window);
        if (!first) continue;
        out.push_back({points[k].r, solve_window(points, *first, 3).a1});
    }
    return out;
}

double extrapolate_a1(const std::vector<LocalA1>& seq, int count) {
    if (count < 2 || static_cast<int>(seq.size()) < count) throw DomainError("extrapolate_a1: too few estimates");
    Eigen::MatrixXd A(count, 2);
    Eigen::VectorXd b(count);
    const std::size_t first = seq.size() - count;
    for (int i = 0; i < count; ++i) {
        A(i, 0) = 1.0;
        A(i, 1) = std::pow(seq[first + i].r, -2.0 / 3.0);
        b(i) = seq[first + i].a1;
    }
    return A.colPivHouseholderQr().solve(b)(0);
}

TailFit fit_tail(std::vector<TailPoint> points, const FitOptions& options) {
    if (points.size() < 3) throw DomainError("fit_tail: at least three points");
    sort_and_check(points);
    const std::size_t n = points.size();
    TailFit fit;
    if (options.mode == FitMode::global_lsq) {
        fit = solve_window(points, 0, n);
    } else {
        std::size_t k;
        if (options.at) {
            auto it = std::find_if(points.begin(), points.end(),
                                   [&](const TailPoint& p) { return std::abs(p.r - *options.at) <= 1e-12 * p.r; });
            if (it == points.end()) throw DomainError("fit_tail: r not among the points");
            k = static_cast<std::size_t>(it - points.begin());
        } else {
            k = options.window == TripleWindow::centered ? n / 2 : n - 3;
            if (options.window == TripleWindow::centered && n % 2 == 0) k = n / 2 - 1;
        }
        const auto first = window_start(k, n, options.window);
        if (!first) throw DomainError("fit_tail: window leaves the data");
        fit = solve_window(points, *first, 3);
    }
    if (options.extrapolate)
        fit.a1_extrapolated = extrapolate_a1(local_a1_sequence(points, options.window), options.extrapolation_points);
    return fit;
}

}  // namespace hardedge
