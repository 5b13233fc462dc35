#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hardedge/validation.hpp"

using namespace hardedge;

TEST_CASE("case names") {
    CHECK(parse_verify_case("m1") == VerifyCase::m1);
    CHECK(parse_verify_case("m2-special") == VerifyCase::m2_special);
    CHECK(!parse_verify_case("m2"));
    CHECK(verify_case_name(VerifyCase::m2_special) == "m2-special");
    CHECK(verify_case_params(VerifyCase::m2_special).nu == std::vector<double>{0.0, -0.5, 0.0});
}

TEST_CASE("Fredholm reference") {
    for (double s : {0.3, 1.0, 3.0}) CHECK(fredholm_log_gap(HardEdgeParams::m1(0.0), s) == doctest::Approx(-s).epsilon(1e-10));
    // r = 2 sqrt(s) = 4
    CHECK(std::abs(fredholm_log_gap(HardEdgeParams::m2(-0.5, 0.0), 4.0) - (-5.96549338586)) <= 1e-8);
}

TEST_CASE("verify report on a short range") {
    const auto rep = run_verify(VerifyCase::m1, 1.0);
    CHECK(rep.pass());
    CHECK(rep.first_failure() == nullptr);
    CHECK(rep.grid.size() == kVerifyGridPoints);
    CHECK(rep.grid.front() == kVerifySMin);
    CHECK(rep.grid.back() == 1.0);
    CHECK(rep.gap_grid == std::vector<double>{0.25, 0.5, 1.0});
    CHECK(rep.category("gap_vs_fredholm").evaluations == 3);
    CHECK(rep.category("sigma_m1").evaluations == kVerifyGridPoints);
    CHECK_THROWS_AS(rep.category("quartic"), DomainError);
    CHECK_THROWS_AS(run_verify(VerifyCase::m1, 1e-5), DomainError);
    CHECK_THROWS_AS(run_verify(VerifyCase::m1, 1.0, 0.0), DomainError);
}

TEST_CASE("category tolerances are strict") {
    CategoryCheck c;
    c.tolerance = 1e-8;
    c.max_residual = 1e-8;
    CHECK(c.pass());
    c.max_residual = 1.1e-8;
    CHECK(!c.pass());
    VerifyReport rep;
    CategoryCheck ok;
    ok.tolerance = 1.0;
    rep.categories = {ok, c};
    CHECK(rep.first_failure() == &rep.categories[1]);
}

TEST_CASE("table run cells and guards") {
    const auto run = compute_table1(16, 10, 14);
    CHECK(run.cells.size() == 10);
    for (const auto& c : run.cells) {
        CHECK(c.converged);
        CHECK(c.error.empty());
        CHECK(c.est_error <= c.tolerance);
        REQUIRE(c.diff.has_value());
        CHECK(*c.diff <= c.tolerance);
        CHECK(c.tolerance == 1e-6);
    }
    CHECK(compute_table1(48, 4, 5).cell(1, 5).tolerance == 1e-7);
    CHECK_THROWS_AS(run.cell(0, 9), DomainError);
    CHECK_THROWS_AS(compute_table1(97), DomainError);
    CHECK_THROWS_AS(compute_table1(48, 5, 4), DomainError);
    CHECK_THROWS_AS(compute_table1(48, 4, 16), DomainError);
}

TEST_CASE("table run tail sequences") {
    const auto run = compute_table1(48, 4, 10);
    CHECK(run.pass());
    for (int c : {0, 1}) {
        CHECK(run.a1_leading[c].size() == 5);
        CHECK(run.a1_centered[c].size() == 5);
        CHECK(run.a1_leading[c].front().r == 4.0);
        CHECK(run.a1_centered[c].front().r == 5.0);
        // same window, different attribution
        CHECK(run.a1_leading[c][0].a1 == run.a1_centered[c][0].a1);
        CHECK(run.a1_extrapolated[c].has_value());
    }
    const auto small = compute_table1(48, 4, 7);
    CHECK(!small.a1_extrapolated[0]);
}

TEST_CASE("Monte Carlo oracle") {
    McConfig cfg;
    cfg.M = 1;
    cfg.N0 = 10;
    cfg.nu_int = {0};
    CHECK(*mc_oracle(cfg, 0.0) == 1.0);
    CHECK(*mc_oracle(cfg, 1.5) == doctest::Approx(std::exp(-1.5)).epsilon(1e-10));
    // integer nu: E = e^{-s} det[I_{j-k}(2 sqrt s)], j, k < nu
    cfg.nu_int = {1};
    CHECK(*mc_oracle(cfg, 1.0) == doctest::Approx(std::exp(-1.0) * std::cyl_bessel_i(0.0, 2.0)).epsilon(1e-10));
    cfg.nu_int = {2};
    const double i0 = std::cyl_bessel_i(0.0, 2.0 * std::sqrt(2.0)), i1 = std::cyl_bessel_i(1.0, 2.0 * std::sqrt(2.0));
    CHECK(*mc_oracle(cfg, 2.0) == doctest::Approx(std::exp(-2.0) * (i0 * i0 - i1 * i1)).epsilon(1e-9));
    cfg.M = 2;
    cfg.nu_int = {0, 0};
    CHECK(!mc_oracle(cfg, 1.0));
}
