#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hardedge/sigma_forms.hpp"

using namespace hardedge;

namespace {

const double kPi = std::acos(-1.0);

HardEdgeParams special_set() { return HardEdgeParams::m2(-0.5, 0.0); }

// Six-term small-s expansion of eta_0 for the special set, coefficients of s^{k/2}.
std::array<double, 7> special_series() {
    const double p = kPi;
    return {0.0,
            -2.0 / std::sqrt(p),
            -2.0 * (4.0 - p) / p,
            -(32.0 / 3.0) * (3.0 - p) / std::pow(p, 1.5),
            -(16.0 / 9.0) * (72.0 - 32.0 * p + 3.0 * p * p) / (p * p),
            -(64.0 / 45.0) * (360.0 - 200.0 * p + 27.0 * p * p) / std::pow(p, 2.5),
            -(512.0 / 675.0) * (2700.0 - 1800.0 * p + 347.0 * p * p - 15.0 * p * p * p) / (p * p * p)};
}

ResolventJet series_jet(double s) {
    const auto c = special_series();
    ResolventJet j;
    j.s = s;
    j.params = special_set();
    for (int k = 1; k <= 6; ++k) {
        double a = 0.5 * k, coef = c[k];
        for (int n = 0; n <= 4; ++n) {
            j.d[n] += coef * std::pow(s, a - n);
            coef *= a - n;
        }
    }
    j.F = radical_F(j).from_formula;
    return j;
}

Trajectory trajectory(const HardEdgeParams& p, const std::vector<double>& targets) {
    return integrate(p, 1e-6, targets, 1e-10);
}

std::vector<double> grid() {
    std::vector<double> g;
    for (double s = 0.1; s < 10.0 + 1e-12; s *= 1.4) g.push_back(s);
    g.push_back(10.0);
    return g;
}

ResolventJet random_jet(std::mt19937& gen) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ResolventJet j;
    j.params = HardEdgeParams::m2(0.4 * u(gen), 0.6 * u(gen));
    j.s = 1.0 + 0.8 * u(gen);
    for (double& v : j.d) v = u(gen);
    j.d[1] = -1.5 + 0.5 * u(gen);
    j.F = f_squared(j) > 0.0 ? std::sqrt(f_squared(j)) : 0.5 + 0.5 * std::abs(u(gen));
    return j;
}

}  // namespace

TEST_CASE("radical F vanishes on a zero jet") {
    ResolventJet j;
    j.s = 0.7;
    j.params = special_set();
    CHECK(radical_F(j).from_formula == 0.0);
    CHECK_FALSE(radical_F(j).from_bilinear.has_value());
}

TEST_CASE("radical F leading order for the special set") {
    for (double s : {1e-6, 1e-8}) {
        const auto j = series_jet(s);
        const double lead = 1.0 / (2.0 * std::sqrt(kPi * s));
        CHECK(j.F / lead == doctest::Approx(1.0).epsilon(20.0 * std::sqrt(s)));
        // -2F and eta0' share -1/sqrt(pi s)
        CHECK(-2.0 * j.F * std::sqrt(kPi * s) == doctest::Approx(-1.0).epsilon(20.0 * std::sqrt(s)));
        CHECK(j.d[1] * std::sqrt(kPi * s) == doctest::Approx(-1.0).epsilon(20.0 * std::sqrt(s)));
    }
}

TEST_CASE("radical F rejects a negative square") {
    ResolventJet j;
    j.s = 1.0;
    j.params = special_set();
    j.d = {0.0, 1.0, 0.0, 0.0, 0.0};  // -36 s h'^3 dominates
    CHECK_THROWS_AS(radical_F(j), DomainError);
}

TEST_CASE("radical F: formula and bilinear agree on trajectories") {
    for (const auto& p : {special_set(), HardEdgeParams::m2(0.3, -0.2), HardEdgeParams::m2(0.25, 0.5)}) {
        const auto tr = trajectory(p, grid());
        for (const auto& st : tr.states) {
            const auto j = eta_derivatives(st, p);
            const auto f = radical_F(j, &st);
            REQUIRE(f.from_bilinear.has_value());
            CHECK(f.from_formula > 0.0);
            CHECK(*f.from_bilinear > 0.0);
            CHECK(std::abs(f.from_formula - *f.from_bilinear) <= 1e-8 * f.from_formula);
        }
    }
}

TEST_CASE("quartic residual on the special trajectory") {
    const auto p = special_set();
    const auto tr = trajectory(p, {0.5, 1.0, 2.0});
    for (const auto& st : tr.states) {
        const auto j = eta_derivatives(st, p);
        CHECK(quartic_ode_residual(j) <= 1e-6);
        // The polynomial has a double root in eta0'''' on solutions, so a relative
        // change delta moves it by b0 delta^2.
        const auto b = quartic_blocks(j);
        double scale = 0.0;
        for (double v : b) scale += std::abs(v);
        CHECK(std::abs(2.0 * b[0] + b[1]) <= 1e-6 * scale);
        for (double delta : {0.01, 0.1}) {
            auto k = j;
            k.d[4] *= 1.0 + delta;
            const double r = quartic_ode_residual(k);
            const double expected = b[0] * delta * delta / scale;
            CHECK(r == doctest::Approx(expected).epsilon(0.05));
            CHECK(r >= 1e-6);
        }
    }
}

TEST_CASE("quartic residual: typeset and pipeline paths agree") {
    std::mt19937 gen(20240611);
    for (int k = 0; k < 20; ++k) {
        const auto j = random_jet(gen);
        const auto q = quartic_paths(j);
        CHECK(q.scale > 0.0);
        CHECK(std::abs(q.typeset - q.pipeline) <= 1e-9 * q.scale);
    }
}

TEST_CASE("quartic residual preconditions") {
    ResolventJet j;
    j.s = 1.0;
    j.params = special_set();
    CHECK_THROWS_AS(quartic_ode_residual(j), DomainError);
    j.d[1] = -1.0;
    j.params = HardEdgeParams::m1(0.0);
    CHECK_THROWS_AS(quartic_ode_residual(j), DomainError);
}

TEST_CASE("quartic, appendix and special residuals uniformly on [0.1, 10]") {
    for (const auto& p : {special_set(), HardEdgeParams::m2(0.3, -0.2), HardEdgeParams::m2(0.25, 0.5)}) {
        const auto tr = trajectory(p, grid());
        const bool special = p.nu[1] == -0.5 && p.nu[2] == 0.0;
        for (const auto& st : tr.states) {
            CAPTURE(st.s);
            const auto j = eta_derivatives(st, p);
            CHECK(quartic_ode_residual(j) <= 1e-6);
            const auto rep = appendix_recover(st, p);
            CHECK(rep.size() == 11);
            const auto& w = worst_residual(rep);
            CAPTURE(w.name);
            CHECK(w.value <= 1e-6);
            if (special) {
                const auto r = special_case_residuals(j);
                CHECK(r.third_order <= 1e-6);
                CHECK(r.f_identity <= 1e-6);
            }
        }
    }
}

TEST_CASE("p3 sigma residual") {
    CHECK(p3_sigma_residual(0.8, 0.0, 0.0, 0.0, 0.3, 0.1) == 0.0);

    const auto p = HardEdgeParams::m1(0.0);
    const auto tr = trajectory(p, {0.5, 1.0, 5.0});
    for (const auto& st : tr.states) {
        const auto j = eta_derivatives(st, p);
        CHECK(p3_sigma_residual(j.s, j.d[0], j.d[1], j.d[2], p.e1(), p.e2()) <= 1e-8);
    }
}

TEST_CASE("p3 sigma residual: small-s boundary behaviour is a leading-order solution") {
    for (double nu : {0.5, 1.3, 2.0}) {
        const double c = -1.0 / (std::tgamma(nu + 2.0) * std::tgamma(nu + 1.0));
        double prev = 0.0;
        for (double s : {1e-2, 1e-3, 1e-4}) {
            const double h = c * std::pow(s, nu + 1.0);
            const double h1 = c * (nu + 1.0) * std::pow(s, nu);
            const double h2 = c * (nu + 1.0) * nu * std::pow(s, nu - 1.0);
            const double r = p3_sigma_residual(s, h, h1, h2, nu, 0.0);
            CHECK(r <= 10.0 * s);
            if (prev > 0.0) CHECK(r / prev == doctest::Approx(0.1).epsilon(0.2));
            prev = r;
        }
    }
}

TEST_CASE("p3 sigma residual: quadratic scaling with e1 = e2 = 0") {
    const double s = 0.9, h = -0.4, h1 = -0.7, h2 = 0.3;
    auto raw = [&](double eps) {
        const double a = eps * h, b = eps * h1, c = eps * h2;
        return s * s * c * c + 4.0 * b * b * (s * b - a + s) - 4.0 * a * b;
    };
    double prev = 0.0;
    for (double eps : {1e-2, 1e-3, 1e-4, 1e-5}) {
        CHECK(std::abs(raw(eps)) / (eps * eps) <= 10.0);
        const double r = p3_sigma_residual(s, eps * h, eps * h1, eps * h2, 0.0, 0.0);
        if (prev > 0.0) CHECK(std::abs(r - prev) <= 10.0 * eps);
        prev = r;
    }
}

TEST_CASE("special relations") {
    const auto p = special_set();
    const auto tr = trajectory(p, {1.0});
    const auto j = eta_derivatives(tr.states[0], p);
    const auto r = special_case_residuals(j);
    CHECK(r.third_order <= 1e-6);
    CHECK(r.f_identity <= 1e-6);

    auto other = j;
    other.params = HardEdgeParams::m2(0.3, -0.2);
    CHECK_THROWS_AS(special_case_residuals(other), DomainError);
}

TEST_CASE("special third-order equation on the truncated small-s series") {
    // Truncation at s^{7/2} leaves a residual that shrinks like a power of s.
    const double r3 = special_case_residuals(series_jet(1e-3)).third_order;
    const double r4 = special_case_residuals(series_jet(1e-4)).third_order;
    CHECK(r3 <= 1e-3);
    CHECK(r4 < r3);
    const double rate = std::log10(r3 / r4);
    CHECK(rate >= 2.5);
}

TEST_CASE("appendix recovery details") {
    const auto p = special_set();
    const auto tr = trajectory(p, {1.0});
    const auto& st = tr.states[0];
    const auto rep = appendix_recover(st, p);
    for (const auto& r : rep) {
        if (r.name == "Rep:x0y2") CHECK(r.value == 0.0);
        if (r.name == "Rep:xi1") CHECK(r.value <= 1e-6);
        if (r.name == "GODE") CHECK(r.value <= 1e-6);
    }
    CHECK_THROWS_AS(appendix_recover(HamiltonianState::zero(1, 1.0), HardEdgeParams::m1(0.0)), DomainError);
}

TEST_CASE("decoupling factor boundary behaviour") {
    for (const auto& p : {special_set(), HardEdgeParams::m2(0.3, -0.2), HardEdgeParams::m2(0.25, 0.5)}) {
        const double s0 = 1e-6;
        const auto st = resolvent_initial_state(p, s0).state;
        const auto j = eta_derivatives(st, p);
        const double n0 = p.nu[0], n1 = p.nu[1], n2 = p.nu[2];
        const double inv = -std::tgamma(n2 - n1) * std::tgamma(n2 - n0 + 1.0) * std::pow(s0, n1 + n0) -
                           std::tgamma(n1 - n2) * std::tgamma(n1 - n0 + 1.0) * std::pow(s0, n2 + n0);
        CHECK(std::abs(1.0 / j.G - inv) <= 1e-3 * std::abs(inv));
    }
}
