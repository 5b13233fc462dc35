#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("hardedge_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

Run run(const std::string& args, const fs::path& dir) {
    const fs::path out = dir / "stdout.txt";
    const std::string cmd = std::string(HARDEDGE_CLI) + " " + args + " > " + out.string() + " 2> " +
                            (dir / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream is(out);
    std::stringstream ss;
    ss << is.rdbuf();
    r.out = ss.str();
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::ifstream is(p);
    std::string line;
    while (std::getline(is, line)) {
        std::vector<std::string> row;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) row.push_back(f);
        if (!line.empty() && line.back() == ',') row.emplace_back();
        rows.push_back(row);
    }
    return rows;
}

double as_double(const std::string& s) {
    double v = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    REQUIRE(r.ec == std::errc());
    return v;
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
    const auto dir = scratch("usage");
    CHECK(run("", dir).code == 2);
    CHECK(run("verify --case bogus", dir).code == 2);
    CHECK(run("mc --samples 0 --out " + dir.string(), dir).code == 2);
    CHECK(run("mc --n0 513 --out " + dir.string(), dir).code == 2);
    CHECK(run("table1 --nodes 200 --out " + dir.string(), dir).code == 2);
    CHECK(run("gap --r 20", dir).code == 2);
    CHECK(run("nonsense", dir).code == 2);
    CHECK(run("--help", dir).code == 0);
}

TEST_CASE("table1 default run") {
    const auto dir = scratch("table1");
    const auto r = run("table1 --out " + dir.string(), dir);
    REQUIRE(r.code == 0);
    const auto rows = read_csv(dir / "table1.csv");
    REQUIRE(rows.size() == 12);
    CHECK(rows[0] == std::vector<std::string>{"r", "logE_c0", "a1_c0", "logE_c1", "a1_c1"});
    // rows are r = 4 .. 14
    CHECK(std::abs(as_double(rows[6][1]) - (-15.826846765594)) <= 1e-7);
    CHECK(std::abs(as_double(rows[2][3]) - (-4.6175115857278)) <= 1e-7);
    // a1 needs r + 2 inside the range
    CHECK(rows[11][2].empty());
    CHECK(!rows[9][2].empty());

    const auto j = json::parse(slurp(dir / "table1.json"));
    CHECK(j["pass"] == true);
    CHECK(j["manifest"] == "table1.manifest.json");
    CHECK(j["cells"].size() == 22);
    const auto m = json::parse(slurp(dir / "table1.manifest.json"));
    CHECK(m["command"] == "table1");
    CHECK(m["outputs"] == json::array({"table1.csv", "table1.json"}));
    CHECK(m["parameters"]["nodes"] == 48);
}

TEST_CASE("table1 with a single r has no a1 column") {
    const auto dir = scratch("table1_one");
    REQUIRE(run("table1 --r-min 4 --r-max 4 --out " + dir.string(), dir).code == 0);
    const auto rows = read_csv(dir / "table1.csv");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == std::vector<std::string>{"r", "logE_c0", "logE_c1"});
}

TEST_CASE("verify reports every category") {
    const auto dir = scratch("verify");
    const auto r1 = run("verify --case m1 --s-max 5", dir);
    CHECK(r1.code == 0);
    const auto j1 = json::parse(r1.out);
    CHECK(j1["pass"] == true);
    for (const auto& c : j1["categories"]) CHECK(c["max_residual"].get<double>() <= c["tolerance"].get<double>());

    const auto r2 = run("verify --case m2-special --s-max 4 --out " + dir.string(), dir);
    CHECK(r2.code == 0);
    const auto j2 = json::parse(slurp(dir / "verify.json"));
    bool found = false;
    for (const auto& c : j2["categories"])
        if (c["category"] == "gap_vs_fredholm") {
            found = true;
            CHECK(c["max_residual"].get<double>() <= 1e-6);
            CHECK(c["evaluations"] == 5);
        }
    CHECK(found);
}

TEST_CASE("mc is deterministic and matches the M = 1 oracle") {
    const auto a = scratch("mc_a");
    const auto b = scratch("mc_b");
    const std::string args = "mc --m 1 --n0 50 --samples 10000 --seed 7 --check --out ";
    REQUIRE(run(args + a.string(), a).code == 0);
    REQUIRE(run(args + b.string(), b).code == 0);
    CHECK(slurp(a / "mc.csv") == slurp(b / "mc.csv"));
    const auto rows = read_csv(a / "mc.csv");
    REQUIRE(rows.size() == 6);
    CHECK(rows[0].back() == "sigma_distance");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(as_double(rows[i].back()) <= 3.0);
        CHECK(std::abs(as_double(rows[i][6]) - std::exp(-as_double(rows[i][0]))) <= 1e-9);
    }
    const auto m = json::parse(slurp(a / "mc.manifest.json"));
    CHECK(m["seeds"] == json::array({7}));
}

TEST_CASE("mc for M = 2 has no oracle column and can keep raw samples") {
    const auto dir = scratch("mc2");
    REQUIRE(run("mc --m 2 --nu 0 1 --n0 4 --samples 50 --seed 3 --raw --out " + dir.string(), dir).code == 0);
    const auto rows = read_csv(dir / "mc.csv");
    CHECK(rows[0].size() == 6);
    CHECK(fs::file_size(dir / "mc_samples.bin") == 50 * sizeof(double));
    CHECK(fs::exists(dir / "mc_samples.bin.json"));
}

TEST_CASE("numbers are written with 17 significant digits") {
    const auto dir = scratch("digits");
    const auto r = run("gap --c 1 --r 4 --csv", dir);
    REQUIRE(r.code == 0);
    std::stringstream ss(r.out);
    std::string head, line;
    std::getline(ss, head);
    std::getline(ss, line);
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string x; std::getline(ls, x, ',');) f.push_back(x);
    REQUIRE(f.size() == 7);
    const double logE = as_double(f[3]);
    CHECK(std::abs(logE - (-3.2910182568186667)) <= 1e-9);
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, logE, std::chars_format::general, 17);
    CHECK(std::string(buf, res.ptr) == f[3]);
}

TEST_CASE("indicial, sigma, ode and fit") {
    const auto dir = scratch("misc");
    const auto ind = run("indicial --nu1 -0.5 --nu2 0", dir);
    REQUIRE(ind.code == 0);
    const auto j = json::parse(ind.out);
    CHECK(j["fractional_C1"].size() == 6);
    CHECK(j["pair_q"][0].get<double>() == doctest::Approx(1.0 + 1.0 / std::sqrt(3.0)));

    const auto sig = run("sigma --m 2 --nu1 -0.5 --nu2 0 --s 0.5 2", dir);
    REQUIRE(sig.code == 0);
    const auto js = json::parse(sig.out);
    REQUIRE(js["points"].size() == 2);
    CHECK(js["points"][1]["residuals"]["quartic"].get<double>() <= 1e-6);
    CHECK(js["points"][1]["residuals"]["third_order"].get<double>() <= 1e-6);

    REQUIRE(run("ode --m 1 --nu1 0 --points 4 --s-max 2 --out " + dir.string(), dir).code == 0);
    const auto ode = read_csv(dir / "ode.csv");
    REQUIRE(ode.size() == 5);
    CHECK(ode[0].size() == 2 + 4 * 2 * 2);
    // M = 1, nu = 0: log E = -s
    CHECK(as_double(ode[4][1]) == doctest::Approx(-2.0).epsilon(1e-9));

    REQUIRE(run("table1 --out " + dir.string(), dir).code == 0);
    const auto fit = run("fit --in " + (dir / "table1.csv").string() + " --column logE_c0 --at 13", dir);
    REQUIRE(fit.code == 0);
    CHECK(std::abs(json::parse(fit.out)["a1"].get<double>() - (-0.7082218856)) <= 2e-3);
    CHECK(run("fit --in " + (dir / "missing.csv").string(), dir).code == 2);
}
