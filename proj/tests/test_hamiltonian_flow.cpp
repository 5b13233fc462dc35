#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hardedge/hamiltonian_flow.hpp"

using namespace hardedge;

namespace {

const double kPi = std::acos(-1.0);
const cplx kI(0.0, 1.0);

HardEdgeParams special_set() { return HardEdgeParams::m2(-0.5, 0.0); }

HamiltonianState random_state(int M, double s, unsigned seed) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> n;
    HamiltonianState st = HamiltonianState::zero(M, s);
    for (int m = 0; m <= M; ++m) {
        st.x[m] = {n(gen), n(gen)};
        st.y[m] = {n(gen), n(gen)};
        st.xi[m] = {n(gen), n(gen)};
        st.eta[m] = {n(gen), n(gen)};
    }
    return st;
}

double named(const std::vector<Residual>& r, const std::string& name) {
    for (const auto& e : r)
        if (e.name == name) return e.value;
    FAIL("missing residual " << name);
    return 0.0;
}

}  // namespace

TEST_CASE("series initial state, special set") {
    const auto p = special_set();
    const double s0 = 1e-6;
    const auto st = initial_state(p, s0);
    CHECK(std::abs(st.x[0] - (-kI / std::sqrt(kPi))) <= 1e-14);
    CHECK(st.eta[0].real() == doctest::Approx(-2.0 * std::sqrt(s0) / std::sqrt(kPi)).epsilon(3e-3));
    CHECK(std::abs(st.xi[2] + p.e1() - st.eta[0]) <= 1e-15);
    CHECK(st.series_order == doctest::Approx(0.5));
}

TEST_CASE("series initial state agrees with the resolvent data") {
    for (const auto& p : {special_set(), HardEdgeParams::m2(0.3, -0.2), HardEdgeParams::m2(0.25, 0.5),
                          HardEdgeParams::m1(0.0), HardEdgeParams::m1(0.7), HardEdgeParams::m1(-0.5)}) {
        const double s0 = 1e-6;
        const auto a = initial_state(p, s0);
        const auto b = resolvent_initial_state(p, s0).state;
        const double bound = 10.0 * std::pow(s0, a.series_order) + 1e-12;
        for (int m = 0; m <= p.M; ++m) {
            CHECK(std::abs(a.x[m] - b.x[m]) <= bound * std::abs(b.x[m]));
            CHECK(std::abs(a.y[m] - b.y[m]) <= bound * std::abs(b.y[m]));
            CHECK(std::abs(a.xi[m] - b.xi[m]) <= bound * (1.0 + std::abs(b.xi[m])));
            CHECK(std::abs(a.eta[m] - b.eta[m]) <= bound * std::abs(b.eta[m]));
        }
    }
}

TEST_CASE("series initial state preconditions") {
    CHECK_THROWS_AS(initial_state(special_set(), 1e-2), DomainError);
    CHECK_THROWS_AS(initial_state(special_set(), 0.0), DomainError);
    CHECK_THROWS_AS(initial_state(HardEdgeParams::m2(0.0, 1.0), 1e-6), DomainError);
    CHECK_THROWS_AS(integrate(HardEdgeParams::m2(0.5, 0.5), 1e-6, {1.0}, 1e-8), DomainError);
}

TEST_CASE("equations of motion as displayed") {
    const auto st2 = random_state(2, 0.7, 3);
    const auto d2 = rhs(st2);
    CHECK(d2.eta[0] == -st2.x[0] * st2.y[2]);
    CHECK(std::abs(d2.xi[2] - d2.eta[0]) <= 1e-14);
    const auto st1 = random_state(1, 0.7, 4);
    CHECK(rhs(st1).eta[0] == st1.x[0] * st1.y[1]);
    CHECK_THROWS_AS(rhs(HamiltonianState::zero(3, 1.0)), DomainError);
}

TEST_CASE("pack and unpack round trip") {
    const auto st = random_state(2, 1.5, 5);
    const auto back = HamiltonianState::unpack(2, 1.5, st.pack());
    CHECK(back.pack() == st.pack());
}

TEST_CASE("Taylor jet starts with the equations of motion") {
    for (int M : {1, 2}) {
        const auto st = random_state(M, 0.9, 6 + M);
        const auto jet = taylor_jet(st, 3);
        CHECK((jet[1] - rhs(st).pack()).cwiseAbs().maxCoeff() <= 1e-13);
    }
}

TEST_CASE("Schlesinger equations hold for any state") {
    for (int M : {1, 2}) {
        const auto st = random_state(M, 1.3, 10 + M);
        const auto p = M == 1 ? HardEdgeParams::m1(0.3) : HardEdgeParams::m2(0.3, -0.2);
        const auto r = structural_residuals(st, p);
        CHECK(named(r, "schlesinger_A") <= 1e-14);
        CHECK(named(r, "schlesinger_C") <= 1e-14);
        CHECK(named(r, "rank_one") <= 1e-14);
    }
}

TEST_CASE("integrals of the truncated series") {
    for (const auto& p : {HardEdgeParams::m2(0.25, 0.5), HardEdgeParams::m2(0.5, 1.0), HardEdgeParams::m1(0.0),
                          HardEdgeParams::m1(0.7)}) {
        const auto r = first_integral_residuals(initial_state(p, 1e-8), p);
        CHECK(max_residual(r) <= 1e-6);
    }
    const auto p = special_set();
    auto st = random_state(2, 0.4, 21);
    st.xi[2] = st.eta[0] - p.e1();
    CHECK(named(first_integral_residuals(st, p), "first") == 0.0);
}

TEST_CASE("validated trajectories conserve every integral") {
    const std::vector<double> ts{0.5, 1.0, 2.0, 5.0, 10.0};
    for (const auto& p : {special_set(), HardEdgeParams::m1(0.0)}) {
        const auto tr = integrate(p, 1e-6, ts, 1e-10);
        REQUIRE(tr.states.size() == ts.size());
        for (const auto& st : tr.states) {
            CHECK(max_residual(first_integral_residuals(st, p)) <= 1e-8);
            CHECK(imaginary_leakage(st) <= 1e-9);
            CHECK(named(structural_residuals(st, p), "rank_one") <= 1e-10);
        }
    }
}

TEST_CASE("trace of A and the first integral at s = 1") {
    const auto tr2 = integrate(special_set(), 1e-6, {1.0}, 1e-10);
    const auto& st = tr2.states[0];
    CHECK(std::abs(st.x[0] * st.y[0] + st.x[1] * st.y[1] + st.x[2] * st.y[2]) <= 1e-9);
    const auto p1 = HardEdgeParams::m1(0.0);
    const auto tr1 = integrate(p1, 1e-6, {1.0}, 1e-10);
    CHECK(std::abs(tr1.states[0].xi[1] - tr1.states[0].eta[0] + p1.e1()) <= 1e-10);
}

TEST_CASE("folding and Tracy-Widom relations along M = 1 trajectories") {
    for (double nu : {0.0, 0.5, -0.5, 0.7, 1.3}) {
        const auto p = HardEdgeParams::m1(nu);
        const auto tr = integrate(p, 1e-6, {0.1, 1.0, 3.0, 10.0}, 1e-10);
        for (const auto& st : tr.states) {
            const auto r = structural_residuals(st, p);
            CHECK(named(r, "fold_x1") <= 1e-10);
            CHECK(named(r, "fold_y1") <= 1e-10);
            for (const char* k : {"tw_1", "tw_2", "tw_3", "tw_4", "tw_5", "tw_6"}) CHECK(named(r, k) <= 1e-8);
        }
    }
    const auto tr = integrate(HardEdgeParams::m1(0.0), 1e-6, {1.0}, 1e-10);
    const auto& st = tr.states[0];
    CHECK(std::abs(st.x[1] + st.y[0]) <= 1e-10);
}

TEST_CASE("Schlesinger residuals along an M = 2 trajectory") {
    const auto p = special_set();
    const auto tr = integrate(p, 1e-6, {1.0}, 1e-10);
    const auto r = structural_residuals(tr.states[0], p);
    CHECK(named(r, "schlesinger_A") <= 1e-8);
    CHECK(named(r, "schlesinger_C") <= 1e-8);
}

TEST_CASE("tightening the tolerance shrinks the energy residual") {
    std::vector<double> ts;
    for (int i = 1; i <= 100; ++i) ts.push_back(0.1 * i);
    for (const auto& p : {special_set(), HardEdgeParams::m1(0.5)}) {
        double loose = 0.0, tight = 0.0;
        for (const auto& st : integrate(p, 1e-6, ts, 1e-6).states)
            loose = std::max(loose, named(first_integral_residuals(st, p), "energy"));
        for (const auto& st : integrate(p, 1e-6, ts, 1e-8).states)
            tight = std::max(tight, named(first_integral_residuals(st, p), "energy"));
        CHECK(tight * 4.0 <= loose);
    }
}

TEST_CASE("self-convergence at s = 5") {
    for (const auto& p : {special_set(), HardEdgeParams::m2(0.3, -0.2), HardEdgeParams::m1(0.5)}) {
        for (double tol : {1e-6, 1e-8}) {
            const double a = integrate(p, 1e-6, {5.0}, tol).states[0].eta[0].real();
            const double b = integrate(p, 1e-6, {5.0}, tol / 10.0).states[0].eta[0].real();
            CHECK(std::abs(a - b) <= 10.0 * tol);
        }
    }
}

TEST_CASE("integrate rejects bad arguments") {
    const auto p = special_set();
    CHECK_THROWS_AS(integrate(p, 1e-6, {1.0}, 1e-3), DomainError);
    CHECK_THROWS_AS(integrate(p, 1e-6, {1.0}, 1e-14), DomainError);
    CHECK_THROWS_AS(integrate(p, 1e-6, {2.0, 1.0}, 1e-8), DomainError);
    CHECK_THROWS_AS(integrate(p, 1e-3, {1e-4}, 1e-8), DomainError);
}

TEST_CASE("derivative stack of eta0") {
    const auto p = special_set();
    const double s = 1.0, h = 0.0125;
    std::vector<double> ts;
    for (int k = -3; k <= 3; ++k) ts.push_back(s + k * h);
    const auto tr = integrate(p, 1e-6, ts, 1e-12);
    const auto& st = tr.states[3];
    const auto jet = eta_derivatives(st, p);
    CHECK(jet.d[1] == (-st.x[0] * st.y[2]).real());
    CHECK(std::abs(jet.U + jet.V + s * jet.d[2]) <= 1e-12 * (std::abs(jet.U) + std::abs(jet.V)));
    // Seven-point stencil for the fourth derivative, O(h^4).
    const double c[7] = {-1.0, 12.0, -39.0, 56.0, -39.0, 12.0, -1.0};
    double fd = 0.0;
    for (int k = 0; k < 7; ++k) fd += c[k] * tr.states[k].eta[0].real();
    fd /= 6.0 * std::pow(h, 4);
    CHECK(std::abs(fd - jet.d[4]) <= 1e-5 * std::abs(jet.d[4]));
    CHECK(jet.G == doctest::Approx((st.x[0] / st.y[2]).real()));
}

TEST_CASE("gap probability from the tau function") {
    const auto p = special_set();
    const auto tr = integrate(p, 1e-6, {1e-6, 0.999, 1.0, 1.001, 4.0}, 1e-10);
    const GapCurve curve = gap_from_eta0(tr);
    CHECK_NOTHROW(curve.validate());
    CHECK(std::abs(curve.points[0].E - 1.0) <= 10.0 * std::sqrt(1e-6));
    MBParams mb;
    CHECK(std::abs(curve.points[2].E - std::exp(gap_probability_mb(mb, 2.0, 1e-12).logE)) <= 1e-6);
    CHECK(std::abs(curve.points[4].logE - (-5.96549338586)) <= 1e-6);
    const double slope = (curve.points[3].logE - curve.points[1].logE) / 0.002;
    CHECK(std::abs(slope - tr.states[2].eta[0].real()) <= 1e-6);

    const auto tr1 = integrate(HardEdgeParams::m1(0.0), 1e-6, {0.5, 2.0, 7.0}, 1e-10);
    for (const auto& pt : gap_from_eta0(tr1).points) CHECK(std::abs(pt.logE + pt.abscissa) <= 1e-9);
}
