#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "hardedge/quadrature.hpp"
#include "hardedge/special_functions.hpp"

using namespace hardedge;

namespace {
double integrate(const QuadratureRule& r, double (*f)(double)) {
    double s = 0.0;
    for (int i = 0; i < r.n; ++i) s += r.weights[i] * f(r.nodes[i]);
    return s;
}
}  // namespace

TEST_CASE("two-point Gauss-Legendre") {
    const auto r = make_rule(RuleKind::gauss_legendre, 2, -1.0, 1.0);
    CHECK(r.nodes[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(r.nodes[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(r.weights[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r.weights[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("Gauss-Legendre polynomial exactness") {
    for (int n : {2, 3, 8, 48, 256}) {
        const auto r = make_rule(RuleKind::gauss_legendre, n, 0.0, 1.0);
        CHECK(integrate(r, [](double x) { return x * x * x; }) == doctest::Approx(0.25).epsilon(1e-14));
    }
}

TEST_CASE("rule invariants") {
    for (auto kind : {RuleKind::gauss_legendre, RuleKind::clenshaw_curtis}) {
        for (int n : {2, 5, 9, 16, 64, 257}) {
            const auto r = make_rule(kind, n, 0.0, 4.0);
            const double sum = std::accumulate(r.weights.begin(), r.weights.end(), 0.0);
            CHECK(std::abs(sum - 4.0) <= 1e-12 * 4.0);
            for (int i = 1; i < n; ++i) CHECK(r.nodes[i] > r.nodes[i - 1]);
            for (double w : r.weights) CHECK(w > 0.0);
            for (double x : r.nodes) {
                CHECK(x >= 0.0);
                CHECK(x <= 4.0);
            }
        }
    }
}

TEST_CASE("Clenshaw-Curtis with 9 nodes on (0, 4)") {
    const auto r = make_rule(RuleKind::clenshaw_curtis, 9, 0.0, 4.0);
    CHECK(std::accumulate(r.weights.begin(), r.weights.end(), 0.0) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(integrate(r, [](double x) { return std::pow(x, 8); }) == doctest::Approx(std::pow(4.0, 9) / 9.0).epsilon(1e-12));
}

TEST_CASE("Gauss-Jacobi integrates the weight exactly") {
    // int_0^2 x^{-1/2} (a + b x^3) dx
    const auto r = make_jacobi_rule(6, -0.5, 0.0, 0.0, 2.0);
    double s = 0.0;
    for (int i = 0; i < r.n; ++i) s += r.weights[i] * (1.0 + r.nodes[i] * r.nodes[i] * r.nodes[i]);
    const double expect = 2.0 * std::sqrt(2.0) + std::pow(2.0, 3.5) / 3.5;
    CHECK(s == doctest::Approx(expect).epsilon(1e-13));
    const auto q = make_jacobi_rule(5, 1.5, 0.5, -1.0, 1.0);
    double m = 0.0;
    for (double w : q.weights) m += w;
    // int (1+x)^{3/2}(1-x)^{1/2} = 2^3 B(5/2, 3/2)
    const double beta = std::exp(std::lgamma(2.5) + std::lgamma(1.5) - std::lgamma(4.0));
    CHECK(m == doctest::Approx(8.0 * beta).epsilon(1e-13));
}

TEST_CASE("invalid rules") {
    CHECK_THROWS_AS(make_rule(RuleKind::gauss_legendre, 1, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(make_rule(RuleKind::gauss_legendre, 4, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(make_jacobi_rule(4, -1.0, 0.0, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(rule_kind_from_string("simpson"), DomainError);
    CHECK(rule_kind_from_string("cc") == RuleKind::clenshaw_curtis);
}
