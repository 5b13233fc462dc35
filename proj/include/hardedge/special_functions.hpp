#pragma once

#include <stdexcept>
#include <vector>

namespace hardedge {

struct SeriesControl {
    int max_terms = 100;
    double tail_tol = 1e-18;

    void validate() const;
};

// Outcome of a truncated series. `tail_estimate` is the magnitude of the
// last summed term; `cancellation` is set when the largest intermediate term
// exceeds the final sum by more than ten orders of magnitude.
struct SeriesResult {
    double value = 0.0;
    bool converged = false;
    bool cancellation = false;
    int terms = 0;
    double tail_estimate = 0.0;
};

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

double gamma_real(double x);
double reciprocal_gamma(double x);

// Sum x^j / (j! Gamma(b1+j) Gamma(b2+j)).
SeriesResult hyp0f2_reg(double b1, double b2, double x, const SeriesControl& ctl = {});
// Unregularized 0F2(;b1,b2;x); b1, b2 must not be poles of Gamma.
double hyp0f2(double b1, double b2, double x, const SeriesControl& ctl = {});

// Wright Bessel J_{a,b}(x) = sum (-x)^j / (j! Gamma(a + j b)), b > 0.
SeriesResult wright_bessel(double a, double b, double x, const SeriesControl& ctl = {});

// Classical Bessel J_nu(x), x >= 0, by its power series.
SeriesResult bessel_j(double nu, double x, const SeriesControl& ctl = {});

// Wright Bessel with the coefficient table 1/(j! Gamma(a+jb)) built once.
class WrightBesselSeries {
public:
    WrightBesselSeries(double a, double b, const SeriesControl& ctl = {});
    double operator()(double x) const;
    double a() const { return a_; }
    double b() const { return b_; }

private:
    double a_;
    double b_;
    SeriesControl ctl_;
    std::vector<double> coef_;
};

// (e_1, ..., e_n) of the inputs.
std::vector<double> elementary_symmetric(const std::vector<double>& values);

}  // namespace hardedge
