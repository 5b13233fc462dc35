// One line per acceptance criterion; exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "hardedge/asymptotics.hpp"
#include "hardedge/ginibre_mc.hpp"
#include "hardedge/validation.hpp"

using namespace hardedge;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome table1_values(const Table1Run& run) {
    double worst8 = 0.0, worst14 = 0.0;
    bool all = true;
    for (const auto& c : run.cells) {
        all = all && c.pass() && c.diff;
        const double d = c.diff ? *c.diff : INFINITY;
        (c.r <= 8 ? worst8 : worst14) = std::max(c.r <= 8 ? worst8 : worst14, d);
    }
    const bool ok = all && run.cells.size() == 22 && worst8 <= 1e-7 && worst14 <= 1e-6 &&
                    run.nodes <= kTable1MaxNodes && run.seconds <= 120.0;
    return {ok, fmt("max|diff| r<=8 %.2e, r<=14 %.2e, %g nodes, %.2f s", worst8, worst14, run.nodes, run.seconds)};
}

Outcome tail_coefficient(const Table1Run& run) {
    const double expect[2] = {-0.7082218856, -0.7079460684};
    double a13[2] = {NAN, NAN};
    for (int c : {0, 1})
        for (const auto& e : run.a1_centered[c])
            if (e.r == 13.0) a13[c] = e.a1;
    const double d0 = std::abs(a13[0] - expect[0]), d1 = std::abs(a13[1] - expect[1]);
    const double predicted = 9.0 * std::pow(2.0, -11.0 / 3.0);
    double worst_inf = 0.0;
    for (int c : {0, 1})
        worst_inf = std::max(worst_inf, run.a1_extrapolated[c] ? std::abs(std::abs(*run.a1_extrapolated[c]) - predicted)
                                                               : INFINITY);
    const bool ok = d0 <= 2e-3 && d1 <= 2e-3 && worst_inf <= 5e-3;
    return {ok, fmt("a1(13) diffs %.2e, %.2e; |a_inf| diff %.2e (limit %.12f)", d0, d1, worst_inf, predicted)};
}

Outcome three_way(const VerifyReport& m2) {
    const auto& g = m2.category("gap_vs_fredholm");
    const bool ok = g.pass() && g.evaluations == 5 && g.max_residual <= 1e-6;
    return {ok, fmt("max|dlogE| %.2e over %g points", g.max_residual, g.evaluations)};
}

Outcome conservation(const VerifyReport& m1, const VerifyReport& m2) {
    const double a = m1.category("first_integrals").max_residual;
    const double b = m2.category("first_integrals").max_residual;
    const double c = m2.category("alternate_integrals").max_residual;
    const bool ok = std::max({a, b, c}) <= 1e-8 && m1.grid.front() <= 1e-4 && m1.grid.back() >= 10.0;
    return {ok, fmt("M=1 %.2e, M=2 %.2e, alternates %.2e", a, b, c)};
}

Outcome sigma_suite(const VerifyReport& m1, const VerifyReport& m2) {
    const double s1 = m1.category("sigma_m1").max_residual;
    const double q = m2.category("quartic").max_residual;
    const double d = m2.category("dual_path").max_residual;
    const double t = std::max(m2.category("third_order").max_residual, m2.category("f_identity").max_residual);
    const bool ok = s1 <= 1e-8 && q <= 1e-6 && d <= 1e-9 && t <= 1e-6;
    return {ok, fmt("sigma %.2e, quartic %.2e, dual path %.2e, third order/F %.2e", s1, q, d, t)};
}

Outcome structure_suite(const VerifyReport& m1, const VerifyReport& m2) {
    const double f = m1.category("folding").max_residual;
    const double tw = m1.category("tracy_widom").max_residual;
    const double sch = std::max(m1.category("schlesinger").max_residual, m2.category("schlesinger").max_residual);
    const double rep = std::max(m2.category("appendix").max_residual, m2.category("decoupling_ode").max_residual);
    const bool ok = f <= 1e-10 && tw <= 1e-8 && sch <= 1e-8 && rep <= 1e-6;
    return {ok, fmt("folding %.2e, Tracy-Widom %.2e, Schlesinger %.2e, recovery %.2e", f, tw, sch, rep)};
}

Outcome small_s_series() {
    const auto p = HardEdgeParams::m2(-0.5, 0.0);
    const double s = 1e-3;
    const auto tr = integrate(p, 1e-6, {s}, 1e-10);
    const double eta0 = eta_derivatives(tr.states[0], p).d[0];
    const double err = std::abs(eta0 - special_small_s_eta0(s)[0]);
    const double bound = 5.0 * std::pow(s, 3.5);
    return {err <= bound, fmt("|eta0 - series| %.2e <= %.2e", err, bound)};
}

Outcome monte_carlo() {
    const auto t0 = std::chrono::steady_clock::now();
    McConfig c1;
    c1.M = 1;
    c1.N0 = 50;
    c1.nu_int = {0};
    c1.samples = 10000;
    c1.seed = 8101;
    const std::vector<double> grid{0.5, 1.0, 2.0};
    double z1 = 0.0;
    for (const auto& g : empirical_gap(sample_min_singular_sq(c1), grid)) {
        const double E = std::exp(fredholm_log_gap(HardEdgeParams::m1(0.0), g.s));
        z1 = std::max(z1, std::abs(g.p_hat - E) / std::sqrt(E * (1.0 - E) / g.samples));
    }
    McConfig c2 = c1;
    c2.M = 2;
    c2.nu_int = {0, 0};
    c2.N0 = 40;
    c2.seed = 8102;
    const auto a = empirical_gap(sample_min_singular_sq(c2), grid);
    c2.N0 = 80;
    c2.seed = 8103;
    const auto b = empirical_gap(sample_min_singular_sq(c2), grid);
    double z2 = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double se = std::sqrt(a[k].p_hat * (1.0 - a[k].p_hat) / a[k].samples +
                                    b[k].p_hat * (1.0 - b[k].p_hat) / b[k].samples);
        z2 = std::max(z2, std::abs(a[k].p_hat - b[k].p_hat) / se);
    }
    const double t = seconds_since(t0);
    return {z1 <= 3.0 && z2 <= 3.0 && t <= 300.0,
            fmt("M=1 max %.2f sigma, M=2 collapse max %.2f sigma, %.1f s", z1, z2, t)};
}

Outcome indicial() {
    const auto rep = indicial_exponents(HardEdgeParams::m2(-0.5, 0.0));
    std::vector<double> fixed(rep.fixed.begin(), rep.fixed.end());
    std::sort(fixed.begin(), fixed.end());
    fixed.erase(std::unique(fixed.begin(), fixed.end(), [](double x, double y) { return std::abs(x - y) <= 1e-14; }),
                fixed.end());
    const bool set_ok = fixed.size() == 3 && std::abs(fixed[0] - 0.5) <= 1e-14 && std::abs(fixed[1] - 1.0) <= 1e-14 &&
                        std::abs(fixed[2] - 1.5) <= 1e-14;
    const double r3 = 1.0 / std::sqrt(3.0);
    const double pair = std::max(std::abs(rep.pair_q[0] - (1.0 + r3)), std::abs(rep.pair_q[1] - (1.0 - r3)));
    double worst = 0.0;
    for (const auto& c : rep.fractional_C1) worst = std::max(worst, fractional_residual(rep, c));
    const bool ok = set_ok && pair <= 1e-14 && rep.fractional_C1.size() == 6 && worst <= 1e-10;
    return {ok, std::string("exponent set ") + (set_ok ? "{1/2, 1, 3/2}" : "mismatch") +
                    fmt(", pair error %.1e, worst C1 residual %.2e", pair, worst)};
}

}  // namespace

int main() {
    int failures = 0;
    auto report = [&](int n, const char* title, const std::function<Outcome()>& f) {
        Outcome o;
        try {
            o = f();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", n, title, o.detail.c_str());
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    };

    Table1Run run;
    std::string table_error;
    try {
        run = compute_table1(48, 4, 14);
    } catch (const std::exception& e) {
        table_error = e.what();
    }
    auto need_table = [&] {
        if (!table_error.empty()) throw std::runtime_error(table_error);
    };
    std::optional<VerifyReport> m1, m2;
    std::string verify_error;
    try {
        m1 = run_verify(VerifyCase::m1, 10.0, 1e-10);
        m2 = run_verify(VerifyCase::m2_special, 10.0, 1e-10);
    } catch (const std::exception& e) {
        verify_error = e.what();
    }
    auto need_verify = [&] {
        if (!m1 || !m2) throw std::runtime_error(verify_error);
    };

    report(1, "gap table", [&] { return need_table(), table1_values(run); });
    report(2, "tail coefficient", [&] { return need_table(), tail_coefficient(run); });
    report(3, "ODE vs Fredholm", [&] { return need_verify(), three_way(*m2); });
    report(4, "conservation", [&] { return need_verify(), conservation(*m1, *m2); });
    report(5, "scalar equations", [&] { return need_verify(), sigma_suite(*m1, *m2); });
    report(6, "structure", [&] { return need_verify(), structure_suite(*m1, *m2); });
    report(7, "small-s series", small_s_series);
    report(8, "Monte Carlo", monte_carlo);
    report(9, "indicial classes", indicial);
    return failures == 0 ? 0 : 1;
}
