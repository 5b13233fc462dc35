#include "hardedge/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

#include "hardedge/sigma_forms.hpp"
#include "hardedge/table1_reference.hpp"

namespace hardedge {

namespace {

constexpr double kStart = 1e-6;

struct Tally {
    std::map<std::string, CategoryCheck> by_name;
    std::vector<std::string> order;

    void declare(const std::string& name, double tol) {
        if (by_name.count(name)) return;
        CategoryCheck c;
        c.category = name;
        c.tolerance = tol;
        by_name[name] = c;
        order.push_back(name);
    }
    void add(const std::string& name, double value, double s, const std::string& entry) {
        auto& c = by_name.at(name);
        ++c.evaluations;
        // NaN must count as a failure
        if (!(value <= c.max_residual)) {
            c.max_residual = std::isnan(value) ? INFINITY : value;
            c.worst_s = s;
            c.worst_entry = entry;
        }
    }
    std::vector<CategoryCheck> list() const {
        std::vector<CategoryCheck> out;
        for (const auto& n : order) out.push_back(by_name.at(n));
        return out;
    }
};

std::string integral_category(const std::string& name) {
    return name.rfind("Ids", 0) == 0 ? "alternate_integrals" : "first_integrals";
}

std::string structural_category(const std::string& name) {
    if (name.rfind("fold", 0) == 0) return "folding";
    if (name.rfind("tw_", 0) == 0) return "tracy_widom";
    if (name.rfind("schlesinger", 0) == 0) return "schlesinger";
    return name;
}

}  // namespace

std::optional<VerifyCase> parse_verify_case(std::string_view name) {
    if (name == "m1") return VerifyCase::m1;
    if (name == "m2-special") return VerifyCase::m2_special;
    return std::nullopt;
}

std::string_view verify_case_name(VerifyCase which) { return which == VerifyCase::m1 ? "m1" : "m2-special"; }

HardEdgeParams verify_case_params(VerifyCase which) {
    return which == VerifyCase::m1 ? HardEdgeParams::m1(0.0) : HardEdgeParams::m2(-0.5, 0.0);
}

bool VerifyReport::pass() const { return first_failure() == nullptr; }

const CategoryCheck* VerifyReport::first_failure() const {
    for (const auto& c : categories)
        if (!c.pass()) return &c;
    return nullptr;
}

const CategoryCheck& VerifyReport::category(std::string_view name) const {
    for (const auto& c : categories)
        if (c.category == name) return c;
    throw DomainError("VerifyReport: no category " + std::string(name));
}

double fredholm_log_gap(const HardEdgeParams& params, double s, double target_tol) {
    if (params.M == 2) {
        const auto c = params.borodin_c();
        if (c && *c == std::round(*c)) {
            MBParams mb;
            mb.c = *c;
            return gap_probability_mb(mb, 2.0 * std::sqrt(s), target_tol).logE;
        }
    }
    return gap_probability_hardedge(KernelBundle(params), s, target_tol).logE;
}

VerifyReport run_verify(VerifyCase which, double s_max, double tol) {
    if (!(s_max > kVerifySMin)) throw DomainError("run_verify: s_max must exceed 1e-4");
    if (!(tol > 0.0)) throw DomainError("run_verify: tol must be positive");
    VerifyReport rep;
    rep.which = which;
    rep.params = verify_case_params(which);
    rep.s_max = s_max;
    rep.tol = tol;
    const auto& p = rep.params;

    for (int k = 0; k < kVerifyGridPoints; ++k)
        rep.grid.push_back(kVerifySMin * std::pow(s_max / kVerifySMin, double(k) / (kVerifyGridPoints - 1)));
    rep.grid.back() = s_max;
    for (double s : {0.25, 0.5, 1.0, 2.0, 4.0})
        if (s <= s_max) rep.gap_grid.push_back(s);
    std::vector<double> targets = rep.grid;
    targets.insert(targets.end(), rep.gap_grid.begin(), rep.gap_grid.end());
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

    Tally t;
    t.declare("first_integrals", 1e-8);
    if (p.M == 2) t.declare("alternate_integrals", 1e-8);
    if (p.M == 1) {
        t.declare("folding", 1e-10);
        t.declare("tracy_widom", 1e-8);
    }
    t.declare("schlesinger", 1e-8);
    t.declare("rank_one", 1e-10);
    t.declare("imaginary_leakage", 1e-9);
    if (p.M == 1) {
        t.declare("sigma_m1", 1e-8);
    } else {
        t.declare("quartic", 1e-6);
        t.declare("dual_path", 1e-9);
        t.declare("third_order", 1e-6);
        t.declare("f_identity", 1e-6);
        t.declare("appendix", 1e-6);
        t.declare("decoupling_ode", 1e-6);
    }
    if (!rep.gap_grid.empty()) t.declare("gap_vs_fredholm", 1e-6);

    const Trajectory tr = integrate(p, kStart, targets, tol);
    for (std::size_t i = 0; i < tr.states.size(); ++i) {
        const auto& st = tr.states[i];
        const double s = st.s;
        if (std::binary_search(rep.gap_grid.begin(), rep.gap_grid.end(), s)) {
            const double d = std::abs(tr.log_e[i] - fredholm_log_gap(p, s));
            t.add("gap_vs_fredholm", d, s, "logE");
        }
        if (!std::binary_search(rep.grid.begin(), rep.grid.end(), s)) continue;
        for (const auto& r : first_integral_residuals(st, p)) t.add(integral_category(r.name), r.value, s, r.name);
        for (const auto& r : structural_residuals(st, p)) t.add(structural_category(r.name), r.value, s, r.name);
        t.add("imaginary_leakage", imaginary_leakage(st), s, "imag");
        const ResolventJet j = eta_derivatives(st, p);
        if (p.M == 1) {
            t.add("sigma_m1", p3_sigma_residual(s, j.d[0], j.d[1], j.d[2], p.e1(), p.e2()), s, "sigma");
            continue;
        }
        t.add("quartic", quartic_ode_residual(j), s, "quartic");
        const auto q = quartic_paths(j);
        t.add("dual_path", q.scale > 0.0 ? std::abs(q.typeset - q.pipeline) / q.scale : 0.0, s, "typeset-pipeline");
        if (which == VerifyCase::m2_special) {
            const auto sp = special_case_residuals(j);
            t.add("third_order", sp.third_order, s, "third_order");
            t.add("f_identity", sp.f_identity, s, "f_identity");
        }
        for (const auto& r : appendix_recover(st, p))
            t.add(r.name == "GODE" ? "decoupling_ode" : "appendix", r.value, s, r.name);
    }
    rep.categories = t.list();
    return rep;
}

const Table1Cell& Table1Run::cell(int c, int r) const {
    for (const auto& x : cells)
        if (x.c == c && x.r == r) return x;
    throw DomainError("Table1Run: no cell");
}

bool Table1Run::pass() const {
    return std::all_of(cells.begin(), cells.end(), [](const Table1Cell& c) { return c.pass(); });
}

Table1Run compute_table1(int nodes, int r_min, int r_max) {
    if (nodes < kMinNodes || nodes > kTable1MaxNodes) throw DomainError("compute_table1: nodes must lie in [16, 96]");
    if (r_min < 1 || r_max < r_min || r_max > kMaxMBInterval) throw DomainError("compute_table1: bad r range");
    const auto t0 = std::chrono::steady_clock::now();
    Table1Run run;
    run.nodes = nodes;
    run.r_min = r_min;
    run.r_max = r_max;
    for (int c : {0, 1}) {
        MBParams mb;
        mb.c = c;
        std::vector<TailPoint> pts;
        for (int r = r_min; r <= r_max; ++r) {
            Table1Cell cell;
            cell.c = c;
            cell.r = r;
            cell.tolerance = r <= 8 ? 1e-7 : 1e-6;
            try {
                cell.logE = gap_probability_mb_fixed(mb, r, nodes).logE;
                cell.est_error = std::abs(cell.logE - gap_probability_mb_fixed(mb, r, nodes + 16).logE);
                cell.converged = std::isfinite(cell.logE) && cell.est_error <= cell.tolerance;
                if (!cell.converged) cell.error = "node refinement moved log E beyond tolerance";
            } catch (const std::exception& e) {
                cell.logE = NAN;
                cell.error = e.what();
            }
            for (const auto& row : table1_rows())
                if (row.r == r) {
                    cell.reference = c == 0 ? row.logE_c0 : row.logE_c1;
                    if (cell.converged) cell.diff = std::abs(cell.logE - *cell.reference);
                }
            if (cell.converged) pts.push_back({double(r), cell.logE});
            run.cells.push_back(cell);
        }
        if (pts.size() >= 3) {
            run.a1_leading[c] = local_a1_sequence(pts, TripleWindow::leading);
            run.a1_centered[c] = local_a1_sequence(pts, TripleWindow::centered);
            if (run.a1_centered[c].size() >= 5) run.a1_extrapolated[c] = extrapolate_a1(run.a1_centered[c]);
        }
    }
    run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return run;
}

std::optional<double> mc_oracle(const McConfig& cfg, double s) {
    if (cfg.M != 1) return std::nullopt;
    if (s <= 0.0) return 1.0;
    return std::exp(gap_probability_hardedge(KernelBundle(HardEdgeParams::m1(cfg.nu_int[0])), s, 1e-10).logE);
}

}  // namespace hardedge
