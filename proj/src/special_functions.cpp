#include "hardedge/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hardedge {

namespace {

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

// sin(pi x) with the argument reduced first so large |x| keeps full accuracy.
double sin_pi(double x) {
    double r = std::fmod(x, 2.0);
    if (r < 0.0) r += 2.0;
    if (r == 0.0 || r == 1.0) return 0.0;
    if (r > 1.0) return -std::sin(std::numbers::pi * (r - 1.0));
    return std::sin(std::numbers::pi * r);
}

// Running sum of a series whose j-th term comes from `term(j)`.
template <class Term>
SeriesResult sum_series(Term term, const SeriesControl& ctl) {
    ctl.validate();
    SeriesResult out;
    double sum = 0.0;
    double biggest = 0.0;
    int small_run = 0;
    for (int j = 0; j < ctl.max_terms; ++j) {
        const double t = term(j);
        sum += t;
        biggest = std::max(biggest, std::abs(t));
        out.terms = j + 1;
        out.tail_estimate = std::abs(t);
        // Leading zero terms (Gamma poles) do not count towards the stop.
        if (sum != 0.0 && std::abs(t) <= ctl.tail_tol * std::abs(sum)) {
            if (++small_run == 2) {
                out.converged = true;
                break;
            }
        } else {
            small_run = 0;
        }
    }
    if (sum == 0.0 && biggest == 0.0) out.converged = true;
    out.value = sum;
    out.cancellation = biggest > 1e10 * std::abs(sum);
    return out;
}

}  // namespace

void SeriesControl::validate() const {
    if (max_terms < 1) throw DomainError("SeriesControl: max_terms must be >= 1");
    if (!(tail_tol > 0.0)) throw DomainError("SeriesControl: tail_tol must be > 0");
}

double gamma_real(double x) {
    if (std::isnan(x)) throw DomainError("gamma_real: NaN argument");
    if (is_nonpositive_integer(x)) throw DomainError("gamma_real: pole at non-positive integer");
    if (x >= 0.5) return std::tgamma(x);
    // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x).
    return std::numbers::pi / (sin_pi(x) * std::tgamma(1.0 - x));
}

double reciprocal_gamma(double x) {
    if (is_nonpositive_integer(x)) return 0.0;
    if (x > 171.0) return std::exp(-std::lgamma(x));
    if (x >= 0.5) return 1.0 / std::tgamma(x);
    return sin_pi(x) * std::tgamma(1.0 - x) / std::numbers::pi;
}

SeriesResult hyp0f2_reg(double b1, double b2, double x, const SeriesControl& ctl) {
    double power = 1.0;  // x^j / j!
    return sum_series(
        [&](int j) {
            if (j > 0) power *= x / j;
            return power * (reciprocal_gamma(b1 + j) * reciprocal_gamma(b2 + j));
        },
        ctl);
}

double hyp0f2(double b1, double b2, double x, const SeriesControl& ctl) {
    return gamma_real(b1) * gamma_real(b2) * hyp0f2_reg(b1, b2, x, ctl).value;
}

SeriesResult wright_bessel(double a, double b, double x, const SeriesControl& ctl) {
    if (!(b > 0.0)) throw DomainError("wright_bessel: b must be positive");
    double power = 1.0;  // (-x)^j / j!
    return sum_series(
        [&](int j) {
            if (j > 0) power *= -x / j;
            return power * reciprocal_gamma(a + j * b);
        },
        ctl);
}

SeriesResult bessel_j(double nu, double x, const SeriesControl& ctl) {
    if (x < 0.0) throw DomainError("bessel_j: x must be non-negative");
    const double q = 0.25 * x * x;
    double power = 1.0;  // (-q)^k / k!
    SeriesResult r = sum_series(
        [&](int k) {
            if (k > 0) power *= -q / k;
            return power * reciprocal_gamma(nu + k + 1.0);
        },
        ctl);
    const double scale = std::pow(0.5 * x, nu);
    r.value *= scale;
    r.tail_estimate *= std::abs(scale);
    return r;
}

WrightBesselSeries::WrightBesselSeries(double a, double b, const SeriesControl& ctl)
    : a_(a), b_(b), ctl_(ctl) {
    if (!(b > 0.0)) throw DomainError("WrightBesselSeries: b must be positive");
    ctl.validate();
    coef_.resize(ctl.max_terms);
    double inv_fact = 1.0;
    for (int j = 0; j < ctl.max_terms; ++j) {
        if (j > 0) inv_fact /= j;
        coef_[j] = inv_fact * reciprocal_gamma(a + j * b);
    }
}

double WrightBesselSeries::operator()(double x) const {
    double sum = 0.0;
    double power = 1.0;
    int small_run = 0;
    for (std::size_t j = 0; j < coef_.size(); ++j) {
        const double t = power * coef_[j];
        sum += t;
        if (sum != 0.0 && std::abs(t) <= ctl_.tail_tol * std::abs(sum)) {
            if (++small_run == 2) break;
        } else {
            small_run = 0;
        }
        power *= -x;
    }
    return sum;
}

std::vector<double> elementary_symmetric(const std::vector<double>& values) {
    if (values.empty()) throw DomainError("elementary_symmetric: empty input");
    // e[k] of the values seen so far, e[0] = 1.
    std::vector<double> e(values.size() + 1, 0.0);
    e[0] = 1.0;
    for (std::size_t i = 0; i < values.size(); ++i)
        for (std::size_t k = i + 1; k >= 1; --k) e[k] += values[i] * e[k - 1];
    return {e.begin() + 1, e.end()};
}

}  // namespace hardedge
