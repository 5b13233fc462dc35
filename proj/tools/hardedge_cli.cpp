#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "hardedge/asymptotics.hpp"
#include "hardedge/ginibre_mc.hpp"
#include "hardedge/sigma_forms.hpp"
#include "hardedge/table1_reference.hpp"
#include "hardedge/validation.hpp"

#ifndef HARDEDGE_VERSION
#define HARDEDGE_VERSION "0.0.0"
#endif

using namespace hardedge;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

// Thrown for bad flag combinations discovered after parsing.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, r.ptr);
}

std::string opt_num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

json jnum(double v) { return std::isfinite(v) ? json(v) : json(num(v)); }
json jopt(const std::optional<double>& v) { return v ? jnum(*v) : json(nullptr); }
json jcplx(std::complex<double> z) { return json::array({jnum(z.real()), jnum(z.imag())}); }

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_lines(const fs::path& path, const std::vector<std::vector<std::string>>& rows) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
        os << '\n';
    }
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << j.dump(2) << '\n';
}

class Manifest {
public:
    Manifest(std::string command, fs::path dir) : dir_(std::move(dir)) {
        j_["command"] = std::move(command);
        j_["version"] = HARDEDGE_VERSION;
        j_["started"] = utc_now();
        j_["seeds"] = json::array();
        j_["outputs"] = json::array();
    }
    json& parameters() { return j_["parameters"]; }
    void seed(std::uint64_t s) { j_["seeds"].push_back(s); }
    std::string name() const { return j_["command"].get<std::string>() + ".manifest.json"; }
    // Registers a data file; returns its full path.
    fs::path output(const std::string& file) {
        j_["outputs"].push_back(file);
        return dir_ / file;
    }
    void finish() {
        j_["finished"] = utc_now();
        write_json(dir_ / name(), j_);
    }

private:
    fs::path dir_;
    json j_;
};

fs::path prepare_dir(const std::string& out) {
    fs::path p(out);
    fs::create_directories(p);
    return p;
}

struct Format {
    bool csv = false;
    bool json_flag = false;
    void attach(CLI::App* app) {
        auto* j = app->add_flag("--json", json_flag, "JSON on stdout (default)");
        auto* c = app->add_flag("--csv", csv, "CSV on stdout");
        j->excludes(c);
    }
};

HardEdgeParams params_from(int m, double nu1, double nu2) {
    if (m == 1) return HardEdgeParams::m1(nu1);
    if (m == 2) return HardEdgeParams::m2(nu1, nu2);
    throw DomainError("M must be 1 or 2");
}

bool is_special(const HardEdgeParams& p) { return p.M == 2 && p.nu[1] == -0.5 && p.nu[2] == 0.0; }

// ---------------------------------------------------------------- table1

struct Table1Opts {
    std::string out = ".";
    int nodes = 48;
    int r_min = 4;
    int r_max = 14;
};

int cmd_table1(const Table1Opts& o) {
    if (o.nodes < kMinNodes || o.nodes > kTable1MaxNodes) throw UsageError("--nodes must lie in [16, 96]");
    if (o.r_min < 1 || o.r_max < o.r_min || o.r_max > 15) throw UsageError("need 1 <= r-min <= r-max <= 15");
    const fs::path dir = prepare_dir(o.out);
    Manifest man("table1", dir);
    man.parameters() = {{"nodes", o.nodes}, {"r_min", o.r_min}, {"r_max", o.r_max}, {"theta", 2.0}, {"c", {0, 1}}};
    const Table1Run run = compute_table1(o.nodes, o.r_min, o.r_max);

    const bool with_a1 = o.r_max - o.r_min >= 2;
    auto a1_at = [&](int c, int r) -> std::optional<double> {
        for (const auto& e : run.a1_leading[c])
            if (int(e.r) == r) return e.a1;
        return std::nullopt;
    };
    std::vector<std::vector<std::string>> rows;
    rows.push_back(with_a1 ? std::vector<std::string>{"r", "logE_c0", "a1_c0", "logE_c1", "a1_c1"}
                           : std::vector<std::string>{"r", "logE_c0", "logE_c1"});
    for (int r = o.r_min; r <= o.r_max; ++r) {
        const auto& c0 = run.cell(0, r);
        const auto& c1 = run.cell(1, r);
        if (with_a1)
            rows.push_back({std::to_string(r), num(c0.logE), opt_num(a1_at(0, r)), num(c1.logE), opt_num(a1_at(1, r))});
        else
            rows.push_back({std::to_string(r), num(c0.logE), num(c1.logE)});
    }
    write_lines(man.output("table1.csv"), rows);

    json cells = json::array();
    double max_diff = 0.0;
    for (const auto& c : run.cells) {
        json e{{"c", c.c},           {"r", c.r},
               {"logE", jnum(c.logE)}, {"reference", jopt(c.reference)},
               {"diff", jopt(c.diff)}, {"tolerance", c.tolerance},
               {"est_error", jnum(c.est_error)}, {"converged", c.converged},
               {"pass", c.pass()}};
        if (!c.error.empty()) e["error"] = c.error;
        if (c.diff) max_diff = std::max(max_diff, *c.diff);
        cells.push_back(e);
    }
    json a1 = json::object();
    for (int c : {0, 1}) {
        json lead = json::array(), cent = json::array();
        for (const auto& e : run.a1_leading[c]) {
            std::optional<double> ref;
            for (const auto& row : table1_rows())
                if (row.r == int(e.r)) ref = c == 0 ? row.a1_c0 : row.a1_c1;
            lead.push_back({{"r", e.r}, {"a1", jnum(e.a1)}, {"reference", jopt(ref)},
                            {"diff", ref ? jnum(std::abs(e.a1 - *ref)) : json(nullptr)}});
        }
        for (const auto& e : run.a1_centered[c]) cent.push_back({{"r", e.r}, {"a1", jnum(e.a1)}});
        a1["c" + std::to_string(c)] = {{"leading_window", lead},
                                       {"centered_window", cent},
                                       {"extrapolated", jopt(run.a1_extrapolated[c])},
                                       {"reference_extrapolated", table1_a1_limit(c)},
                                       {"predicted_limit", leading_a1()}};
    }
    const json summary{{"manifest", man.name()}, {"nodes", run.nodes},      {"seconds", run.seconds},
                       {"max_diff", max_diff},   {"pass", run.pass()},      {"cells", cells},
                       {"a1", a1}};
    write_json(man.output("table1.json"), summary);
    man.finish();

    std::cout << "table1: " << run.cells.size() << " cells, max |diff| " << num(max_diff) << ", "
              << (run.pass() ? "PASS" : "FAIL") << '\n';
    for (const auto& c : run.cells)
        if (!c.pass())
            std::cerr << "table1: cell c=" << c.c << " r=" << c.r << " "
                      << (c.error.empty() ? "diff " + opt_num(c.diff) : c.error) << '\n';
    return run.pass() ? kOk : kFailed;
}

// ---------------------------------------------------------------- verify

struct VerifyOpts {
    std::string which;
    double s_max = 10.0;
    double tol = 1e-10;
    std::string out;
};

json verify_json(const VerifyReport& rep) {
    json cats = json::array();
    for (const auto& c : rep.categories)
        cats.push_back({{"category", c.category},
                        {"max_residual", jnum(c.max_residual)},
                        {"tolerance", c.tolerance},
                        {"worst_s", c.worst_s},
                        {"worst_entry", c.worst_entry},
                        {"evaluations", c.evaluations},
                        {"pass", c.pass()}});
    return {{"case", verify_case_name(rep.which)},
            {"nu", rep.params.nu},
            {"s_max", rep.s_max},
            {"tol", rep.tol},
            {"grid_points", rep.grid.size()},
            {"gap_grid", rep.gap_grid},
            {"categories", cats},
            {"pass", rep.pass()}};
}

int cmd_verify(const VerifyOpts& o) {
    const auto which = parse_verify_case(o.which);
    if (!which) throw UsageError("--case must be m1 or m2-special, got '" + o.which + "'");
    if (!(o.s_max > kVerifySMin) || o.s_max > 50.0) throw UsageError("--s-max must lie in (1e-4, 50]");
    if (!(o.tol > 0.0) || o.tol > 1e-4) throw UsageError("--tol must lie in (0, 1e-4]");
    const VerifyReport rep = run_verify(*which, o.s_max, o.tol);
    json j = verify_json(rep);
    if (!o.out.empty()) {
        Manifest man("verify", prepare_dir(o.out));
        man.parameters() = {{"case", o.which}, {"s_max", o.s_max}, {"tol", o.tol}};
        j["manifest"] = man.name();
        write_json(man.output("verify.json"), j);
        man.finish();
    }
    std::cout << j.dump(2) << '\n';
    if (const auto* f = rep.first_failure()) {
        std::cerr << "verify: " << f->category << " residual " << num(f->max_residual) << " exceeds "
                  << num(f->tolerance) << " (" << f->worst_entry << " at s = " << num(f->worst_s) << ")\n";
        return kFailed;
    }
    return kOk;
}

// ---------------------------------------------------------------- mc

struct McOpts {
    int m = 1;
    int n0 = 50;
    std::vector<int> nu;
    int samples = 10000;
    std::uint64_t seed = 7;
    std::string variance = "unit_total";
    std::vector<double> s{0.25, 0.5, 1.0, 2.0, 4.0};
    std::string out = ".";
    bool raw = false;
    bool check = false;
};

int cmd_mc(const McOpts& o) {
    McConfig cfg;
    cfg.M = o.m;
    cfg.N0 = o.n0;
    cfg.nu_int = o.nu.empty() && o.m > 0 ? std::vector<int>(o.m, 0) : o.nu;
    cfg.samples = o.samples;
    cfg.seed = o.seed;
    cfg.variance = o.variance == "unit_total" ? VarianceConvention::unit_total : VarianceConvention::unit_component;
    cfg.validate();
    for (double s : o.s)
        if (!(s >= 0.0)) throw DomainError("--s values must be non-negative");

    const fs::path dir = prepare_dir(o.out);
    Manifest man("mc", dir);
    man.parameters() = {{"M", cfg.M},           {"N0", cfg.N0},   {"nu", cfg.nu_int}, {"samples", cfg.samples},
                        {"variance", o.variance}, {"s_grid", o.s}};
    man.seed(cfg.seed);
    const McResult res = sample_min_singular_sq(cfg);
    const auto gaps = empirical_gap(res, o.s);

    const bool oracle = cfg.M == 1;
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"s", "p_hat", "ci_low", "ci_high", "survivors", "samples"});
    if (oracle) {
        rows[0].push_back("oracle");
        rows[0].push_back("sigma_distance");
    }
    double worst = 0.0;
    for (const auto& g : gaps) {
        std::vector<std::string> row{num(g.s), num(g.p_hat), num(g.ci_low), num(g.ci_high),
                                     std::to_string(g.survivors), std::to_string(g.samples)};
        if (oracle) {
            const double E = *mc_oracle(cfg, g.s);
            const double se = std::sqrt(E * (1.0 - E) / g.samples);
            const double d = se > 0.0 ? std::abs(g.p_hat - E) / se : (g.p_hat == E ? 0.0 : INFINITY);
            worst = std::max(worst, d);
            row.push_back(num(E));
            row.push_back(num(d));
        }
        rows.push_back(row);
    }
    write_lines(man.output("mc.csv"), rows);
    if (o.raw) {
        write_samples(res, man.output("mc_samples.bin").string());
        man.output("mc_samples.bin.json");
    }
    man.finish();

    std::cout << "mc: " << cfg.samples << " samples, mean N0*lambda_min " << num(res.mean * cfg.N0);
    if (oracle) std::cout << ", max sigma distance " << num(worst);
    std::cout << '\n';
    if (o.check && oracle && worst > 3.0) {
        std::cerr << "mc: empirical gap deviates from the oracle by " << num(worst) << " sigma\n";
        return kFailed;
    }
    return kOk;
}

// ---------------------------------------------------------------- gap

struct GapOpts {
    double c = 0.0;
    double theta = 2.0;
    double r = 0.0;
    double tol = 1e-10;
    int nodes = 0;
    Format fmt;
};

int cmd_gap(const GapOpts& o) {
    MBParams mb;
    mb.c = o.c;
    mb.theta = o.theta;
    mb.validate();
    if (!(o.tol > 0.0)) throw UsageError("--tol must be positive");
    const GapPoint p = o.nodes > 0 ? gap_probability_mb_fixed(mb, o.r, o.nodes) : gap_probability_mb(mb, o.r, o.tol);
    if (o.fmt.csv) {
        std::cout << "c,theta,r,logE,E,nodes,est_error\n"
                  << num(o.c) << ',' << num(o.theta) << ',' << num(o.r) << ',' << num(p.logE) << ',' << num(p.E) << ','
                  << p.nodes << ',' << num(p.est_error) << '\n';
    } else {
        const json j{{"c", o.c},       {"theta", o.theta}, {"r", o.r},
                     {"logE", jnum(p.logE)}, {"E", jnum(p.E)}, {"nodes", p.nodes},
                     {"est_error", jnum(p.est_error)}};
        std::cout << j.dump(2) << '\n';
    }
    return kOk;
}

// ---------------------------------------------------------------- ode

struct OdeOpts {
    int m = 2;
    double nu1 = -0.5;
    double nu2 = 0.0;
    double s0 = 1e-6;
    double s_max = 10.0;
    double tol = 1e-10;
    int points = 100;
    std::string out = ".";
};

int cmd_ode(const OdeOpts& o) {
    const HardEdgeParams p = params_from(o.m, o.nu1, o.nu2);
    if (!(o.s0 > 0.0) || !(o.s_max > o.s0)) throw UsageError("need 0 < s0 < s-max");
    if (o.points < 2) throw UsageError("--points must be at least 2");
    std::vector<double> grid;
    for (int k = 1; k <= o.points; ++k) grid.push_back(o.s0 * std::pow(o.s_max / o.s0, double(k) / o.points));
    grid.back() = o.s_max;

    const fs::path dir = prepare_dir(o.out);
    Manifest man("ode", dir);
    man.parameters() = {{"M", p.M},       {"nu", p.nu},   {"s0", o.s0},
                        {"s_max", o.s_max}, {"tol", o.tol}, {"points", o.points}};
    const Trajectory tr = integrate(p, o.s0, grid, o.tol);

    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> head{"s", "logE"};
    for (const char* v : {"x", "y", "xi", "eta"})
        for (int i = 0; i <= p.M; ++i)
            for (const char* part : {"_re", "_im"}) head.push_back(v + std::to_string(i) + part);
    rows.push_back(head);
    double leak = 0.0;
    for (std::size_t i = 0; i < tr.states.size(); ++i) {
        const auto& st = tr.states[i];
        std::vector<std::string> row{num(st.s), num(tr.log_e[i])};
        for (const auto* v : {&st.x, &st.y, &st.xi, &st.eta})
            for (const auto& z : *v) {
                row.push_back(num(z.real()));
                row.push_back(num(z.imag()));
            }
        leak = std::max(leak, imaginary_leakage(st));
        rows.push_back(row);
    }
    write_lines(man.output("ode.csv"), rows);
    man.parameters()["tol_used"] = tr.tol;
    man.parameters()["tightenings"] = tr.tightenings;
    man.parameters()["max_imaginary_leakage"] = leak;
    man.finish();
    std::cout << "ode: " << tr.states.size() << " states, log E(s_max) " << num(tr.log_e.back()) << '\n';
    return kOk;
}

// ---------------------------------------------------------------- sigma

struct SigmaOpts {
    int m = 2;
    double nu1 = -0.5;
    double nu2 = 0.0;
    std::vector<double> s;
    double tol = 1e-10;
    Format fmt;
};

int cmd_sigma(const SigmaOpts& o) {
    const HardEdgeParams p = params_from(o.m, o.nu1, o.nu2);
    std::vector<double> grid = o.s;
    std::sort(grid.begin(), grid.end());
    if (grid.empty() || !(grid.front() >= 1e-6)) throw UsageError("--s values must be at least 1e-6");
    const Trajectory tr = integrate(p, 1e-6, grid, o.tol);

    std::vector<std::pair<double, Residual>> out;
    for (const auto& st : tr.states) {
        auto add = [&](const std::string& n, double v) { out.push_back({st.s, Residual{n, v}}); };
        const ResolventJet j = eta_derivatives(st, p);
        if (p.M == 1) {
            add("sigma_m1", p3_sigma_residual(st.s, j.d[0], j.d[1], j.d[2], p.e1(), p.e2()));
        } else {
            add("quartic", quartic_ode_residual(j));
            const auto q = quartic_paths(j);
            add("dual_path", q.scale > 0.0 ? std::abs(q.typeset - q.pipeline) / q.scale : 0.0);
            if (is_special(p)) {
                const auto sp = special_case_residuals(j);
                add("third_order", sp.third_order);
                add("f_identity", sp.f_identity);
            }
            for (const auto& r : appendix_recover(st, p)) add(r.name, r.value);
        }
        for (const auto& r : first_integral_residuals(st, p)) add(r.name, r.value);
        for (const auto& r : structural_residuals(st, p)) add(r.name, r.value);
    }
    if (o.fmt.csv) {
        std::cout << "s,residual,value\n";
        for (const auto& [s, r] : out) std::cout << num(s) << ',' << r.name << ',' << num(r.value) << '\n';
    } else {
        json j{{"M", p.M}, {"nu", p.nu}, {"tol", o.tol}, {"points", json::array()}};
        for (const auto& st : tr.states) {
            json res = json::object();
            for (const auto& [s, r] : out)
                if (s == st.s) res[r.name] = jnum(r.value);
            j["points"].push_back({{"s", st.s}, {"residuals", res}});
        }
        std::cout << j.dump(2) << '\n';
    }
    return kOk;
}

// ---------------------------------------------------------------- fit

struct FitOpts {
    std::string in;
    std::string column;
    std::string mode = "local";
    std::string window = "centered";
    std::optional<double> at;
    bool extrapolate = false;
    int points = 5;
    Format fmt;
};

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) out.push_back(f);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_double(const std::string& f) {
    double v = 0.0;
    const auto r = std::from_chars(f.data(), f.data() + f.size(), v);
    if (r.ec != std::errc() || r.ptr != f.data() + f.size()) throw DomainError("fit: not a number: '" + f + "'");
    return v;
}

std::vector<TailPoint> read_points(const std::string& path, const std::string& column) {
    std::ifstream is(path);
    if (!is) throw UsageError("cannot read " + path);
    std::string line;
    if (!std::getline(is, line)) throw DomainError("fit: empty file");
    const auto head = split(line);
    auto find = [&](const std::string& n) { return std::find(head.begin(), head.end(), n) - head.begin(); };
    const std::size_t ri = find("r");
    std::size_t li = column.empty() ? find("logE") : find(column);
    if (column.empty() && li == head.size()) li = ri == 0 ? 1 : 0;
    if (ri == head.size() || li >= head.size()) throw DomainError("fit: need columns r and " + (column.empty() ? std::string("logE") : column));
    std::vector<TailPoint> pts;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto f = split(line);
        if (f.size() <= std::max(ri, li) || f[li].empty()) continue;
        pts.push_back({parse_double(f[ri]), parse_double(f[li])});
    }
    return pts;
}

int cmd_fit(const FitOpts& o) {
    FitOptions fo;
    if (o.mode == "local")
        fo.mode = FitMode::local_triple;
    else if (o.mode == "global")
        fo.mode = FitMode::global_lsq;
    else
        throw UsageError("--mode must be local or global");
    if (o.window == "centered")
        fo.window = TripleWindow::centered;
    else if (o.window == "leading")
        fo.window = TripleWindow::leading;
    else
        throw UsageError("--window must be centered or leading");
    fo.at = o.at;
    fo.extrapolate = o.extrapolate;
    fo.extrapolation_points = o.points;
    const auto pts = read_points(o.in, o.column);
    const TailFit f = fit_tail(pts, fo);
    if (o.fmt.csv) {
        std::cout << "a1,b1,c1,residual,a1_extrapolated\n"
                  << num(f.a1) << ',' << num(f.b1) << ',' << num(f.c1) << ',' << num(f.residual) << ','
                  << opt_num(f.a1_extrapolated) << '\n';
    } else {
        const json j{{"points", pts.size()},   {"mode", o.mode},          {"window", f.window},
                     {"a1", jnum(f.a1)},       {"b1", jnum(f.b1)},        {"c1", jnum(f.c1)},
                     {"residual", jnum(f.residual)}, {"a1_extrapolated", jopt(f.a1_extrapolated)},
                     {"predicted_limit", leading_a1()}};
        std::cout << j.dump(2) << '\n';
    }
    return kOk;
}

// ---------------------------------------------------------------- indicial

struct IndicialOpts {
    double nu1 = -0.5;
    double nu2 = 0.0;
    Format fmt;
};

int cmd_indicial(const IndicialOpts& o) {
    const IndicialReport rep = indicial_exponents(HardEdgeParams::m2(o.nu1, o.nu2));
    if (o.fmt.csv) {
        std::cout << "class,re,im,residual\n";
        for (double v : rep.fixed) std::cout << "fixed," << num(v) << ",0,\n";
        for (double v : rep.pair_q) std::cout << "pair_q," << num(v) << ",0,\n";
        for (const auto& z : rep.pair_disc) std::cout << "pair_disc," << num(z.real()) << ',' << num(z.imag()) << ",\n";
        for (const auto& z : rep.fractional_C1)
            std::cout << "fractional_C1," << num(z.real()) << ',' << num(z.imag()) << ','
                      << num(fractional_residual(rep, z)) << '\n';
        return kOk;
    }
    json frac = json::array(), disc = json::array(), cand = json::array();
    for (const auto& z : rep.fractional_C1) frac.push_back({{"C1", jcplx(z)}, {"residual", fractional_residual(rep, z)}});
    for (const auto& z : rep.pair_disc) disc.push_back(jcplx(z));
    for (const auto& z : rep.lambda_candidates) cand.push_back(jcplx(z));
    const json j{{"nu", rep.params.nu},     {"fixed", rep.fixed},          {"pair_q", rep.pair_q},
                 {"pair_disc", disc},       {"lambda_candidates", cand},   {"Q", rep.Q},
                 {"x", rep.x_disc},         {"y", rep.y_disc},             {"fractional_C1", frac},
                 {"delta1", rep.delta1},    {"mu1", rep.mu1}};
    std::cout << j.dump(2) << '\n';
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hard-edge gap probabilities for products of Ginibre matrices"};
    app.set_version_flag("--version", HARDEDGE_VERSION);
    app.require_subcommand(1);

    Table1Opts t1;
    auto* table1 = app.add_subcommand("table1", "Muttalib-Borodin theta = 2 log E table for c = 0, 1 with tail fits");
    table1->add_option("--out", t1.out, "Output directory")->capture_default_str();
    table1->add_option("--nodes", t1.nodes, "Gauss-Legendre nodes")->capture_default_str();
    table1->add_option("--r-min", t1.r_min)->capture_default_str();
    table1->add_option("--r-max", t1.r_max)->capture_default_str();

    VerifyOpts vo;
    auto* verify = app.add_subcommand("verify", "Residual suites and ODE vs Fredholm comparison");
    verify->add_option("--case", vo.which, "m1 or m2-special")->required();
    verify->add_option("--s-max", vo.s_max)->capture_default_str();
    verify->add_option("--tol", vo.tol, "Integration tolerance")->capture_default_str();
    verify->add_option("--out", vo.out, "Also write verify.json and a manifest here");

    McOpts mo;
    auto* mc = app.add_subcommand("mc", "Monte Carlo of the smallest squared singular value");
    mc->add_option("--m", mo.m, "Number of factors")->capture_default_str();
    mc->add_option("--n0", mo.n0)->capture_default_str();
    mc->add_option("--nu", mo.nu, "nu_1 .. nu_M (default zeros)");
    mc->add_option("--samples", mo.samples)->capture_default_str();
    mc->add_option("--seed", mo.seed)->capture_default_str();
    mc->add_option("--variance", mo.variance)->check(CLI::IsMember({"unit_total", "unit_component"}))->capture_default_str();
    mc->add_option("--s", mo.s, "Gap abscissas")->capture_default_str();
    mc->add_option("--out", mo.out)->capture_default_str();
    mc->add_flag("--raw", mo.raw, "Write raw samples");
    mc->add_flag("--check", mo.check, "Exit 1 when the oracle is more than 3 sigma away");

    GapOpts go;
    auto* gap = app.add_subcommand("gap", "Single Muttalib-Borodin gap probability on (0, r)");
    gap->add_option("--c", go.c)->capture_default_str();
    gap->add_option("--theta", go.theta)->capture_default_str();
    gap->add_option("--r", go.r)->required();
    gap->add_option("--tol", go.tol)->capture_default_str();
    gap->add_option("--nodes", go.nodes, "Fixed node count instead of doubling");
    go.fmt.attach(gap);

    OdeOpts oo;
    auto* ode = app.add_subcommand("ode", "Hamiltonian trajectory export");
    ode->add_option("--m", oo.m)->capture_default_str();
    ode->add_option("--nu1", oo.nu1)->capture_default_str();
    ode->add_option("--nu2", oo.nu2)->capture_default_str();
    ode->add_option("--s0", oo.s0)->capture_default_str();
    ode->add_option("--s-max", oo.s_max)->capture_default_str();
    ode->add_option("--tol", oo.tol)->capture_default_str();
    ode->add_option("--points", oo.points)->capture_default_str();
    ode->add_option("--out", oo.out)->capture_default_str();

    SigmaOpts so;
    auto* sigma = app.add_subcommand("sigma", "Scalar-equation and structural residuals at given s");
    sigma->add_option("--m", so.m)->capture_default_str();
    sigma->add_option("--nu1", so.nu1)->capture_default_str();
    sigma->add_option("--nu2", so.nu2)->capture_default_str();
    sigma->add_option("--s", so.s)->required();
    sigma->add_option("--tol", so.tol)->capture_default_str();
    so.fmt.attach(sigma);

    FitOpts fo;
    auto* fit = app.add_subcommand("fit", "Tail fit a1 r^{4/3} + b1 r^{2/3} + c1 from a CSV");
    fit->add_option("--in", fo.in, "CSV with columns r and logE")->required();
    fit->add_option("--column", fo.column, "log E column name");
    fit->add_option("--mode", fo.mode, "local or global")->capture_default_str();
    fit->add_option("--window", fo.window, "centered or leading")->capture_default_str();
    fit->add_option("--at", fo.at, "r the local triple is attributed to");
    fit->add_flag("--extrapolate", fo.extrapolate);
    fit->add_option("--points", fo.points, "Local estimates used in the extrapolation")->capture_default_str();
    fo.fmt.attach(fit);

    IndicialOpts io;
    auto* indicial = app.add_subcommand("indicial", "Small-s exponent classes for M = 2");
    indicial->add_option("--nu1", io.nu1)->capture_default_str();
    indicial->add_option("--nu2", io.nu2)->capture_default_str();
    io.fmt.attach(indicial);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*table1) return cmd_table1(t1);
        if (*verify) return cmd_verify(vo);
        if (*mc) return cmd_mc(mo);
        if (*gap) return cmd_gap(go);
        if (*ode) return cmd_ode(oo);
        if (*sigma) return cmd_sigma(so);
        if (*fit) return cmd_fit(fo);
        if (*indicial) return cmd_indicial(io);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailed;
    }
    return kUsage;
}
