#pragma once

#include <array>
#include <complex>
#include <optional>
#include <vector>

#include "hardedge/fredholm.hpp"
#include "hardedge/kernels.hpp"

namespace hardedge {

struct IndicialReport {
    HardEdgeParams params;
    std::array<double, 6> fixed{};                   // +-(nu_i - nu_j) + 1
    std::array<double, 2> pair_q{};                  // 1 +- 2 sqrt(Q) / sqrt(3)
    std::array<std::complex<double>, 2> pair_disc{};  // (3 +- sqrt(3) sqrt(4Q - 1)) / 6
    std::vector<std::complex<double>> lambda_candidates;  // fixed, 0, pair_q, pair_disc
    std::vector<std::complex<double>> fractional_C1;      // roots of 27 C^6 + 54 x C^3 - 27 y
    double Q = 0.0;
    double x_disc = 0.0;
    double y_disc = 0.0;
    double delta1 = -2.0 / 3.0;
    double mu1 = -1.0;
};

IndicialReport indicial_exponents(const HardEdgeParams& params);

// |27 C^6 + 54 x C^3 - 27 y| over the sum of the moduli of its terms.
double fractional_residual(const IndicialReport& report, std::complex<double> C);

enum class TailModel { eta0_leading, logE_leading, logE_refined };

// Large-s closed forms; with Abscissa::r the argument is r = 2 sqrt(s).
double tail_model(double x, TailModel which, Abscissa kind = Abscissa::s);

// -9 2^{-11/3}: leading coefficient of log E in r^{4/3}.
double leading_a1();

// Coefficients of s^{k/2}, k = 1 .. 6, of the small-s expansion of eta_0 for
// nu = (0, -1/2, 0); entry 0 is unused.
std::array<double, 7> special_small_s_coefficients();

// Partial sum through s^{terms/2} of the expansion and its first four derivatives.
std::array<double, 5> special_small_s_eta0(double s, int terms = 6);

struct TailPoint {
    double r = 0.0;
    double logE = 0.0;
};

enum class FitMode { local_triple, global_lsq };

// Placement of the three-point window relative to the r it is attributed to.
enum class TripleWindow { centered, leading };  // (r-1, r, r+1) or (r, r+1, r+2)

struct TailFit {
    double a1 = 0.0, b1 = 0.0, c1 = 0.0;
    std::vector<double> window;
    double residual = 0.0;  // max |model - data| over the window
    std::optional<double> a1_extrapolated;
};

struct FitOptions {
    FitMode mode = FitMode::local_triple;
    bool extrapolate = false;
    TripleWindow window = TripleWindow::centered;
    // r the local fit is attributed to; default is the middle point (centered)
    // or the third from last (leading).
    std::optional<double> at;
    int extrapolation_points = 5;
};

// a_1 r^{4/3} + b_1 r^{2/3} + c_1 fitted to the points.
TailFit fit_tail(std::vector<TailPoint> points, const FitOptions& options = {});

struct LocalA1 {
    double r = 0.0;
    double a1 = 0.0;
};

// Local-triple a_1 for every r with a complete window.
std::vector<LocalA1> local_a1_sequence(std::vector<TailPoint> points, TripleWindow window = TripleWindow::centered);

// a_inf from a_1(r) = a_inf + k r^{-2/3} over the last `count` entries.
double extrapolate_a1(const std::vector<LocalA1>& seq, int count = 5);

}  // namespace hardedge
