#include "hardedge/ginibre_mc.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <random>

#include "hardedge/special_functions.hpp"

namespace hardedge {

namespace {

std::mt19937_64 sample_engine(std::uint64_t seed, int index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), 0x68617264u};
    return std::mt19937_64(seq);
}

Eigen::MatrixXcd ginibre(int rows, int cols, double sd, std::mt19937_64& gen) {
    std::normal_distribution<double> n(0.0, sd);
    Eigen::MatrixXcd X(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) {
            const double re = n(gen);
            X(i, j) = {re, n(gen)};
        }
    return X;
}

double draw(const McConfig& cfg, int index) {
    auto gen = sample_engine(cfg.seed, index);
    const double sd = cfg.variance == VarianceConvention::unit_total ? std::sqrt(0.5) : 1.0;
    Eigen::MatrixXcd Y = ginibre(cfg.rows(1), cfg.N0, sd, gen);
    for (int m = 2; m <= cfg.M; ++m) Y = ginibre(cfg.rows(m), cfg.rows(m - 1), sd, gen) * Y;
    const Eigen::MatrixXcd gram = Y.adjoint() * Y;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram, Eigen::EigenvaluesOnly);
    double lam = es.eigenvalues()(0);
    if (cfg.variance == VarianceConvention::unit_component) lam /= std::ldexp(1.0, cfg.M);
    return lam;
}

void summarize(McResult& r) {
    const auto& v = r.lambda_min;
    double sum = 0.0, sq = 0.0;
    for (double x : v) {
        if (!(x > 0.0)) throw ConvergenceError("sample_min_singular_sq: rank-deficient draw");
        sum += x;
    }
    r.mean = sum / v.size();
    for (double x : v) sq += (x - r.mean) * (x - r.mean);
    r.stddev = v.size() > 1 ? std::sqrt(sq / (v.size() - 1)) : 0.0;
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    r.min = *lo;
    r.max = *hi;
}

}  // namespace

void McConfig::validate() const {
    if (M < 1) throw DomainError("McConfig: M must be positive");
    if (N0 < 1 || N0 > kMaxMcN0) throw DomainError("McConfig: N0 must lie in [1, 512]");
    if (static_cast<int>(nu_int.size()) != M) throw DomainError("McConfig: need nu_1 .. nu_M");
    for (int v : nu_int)
        if (v < 0) throw DomainError("McConfig: nu must be non-negative integers");
    if (samples < 1) throw DomainError("McConfig: samples must be positive");
}

std::vector<double> sample_range(const McConfig& cfg, int first, int count) {
    cfg.validate();
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i) out[i] = draw(cfg, first + i);
    return out;
}

McResult sample_min_singular_sq(const McConfig& cfg) {
    McResult r;
    r.config = cfg;
    r.lambda_min = sample_range(cfg, 0, cfg.samples);
    r.scaled = cfg.variance == VarianceConvention::unit_component;
    summarize(r);
    return r;
}

std::pair<double, double> wilson_interval(int k, int n, double z) {
    const double p = double(k) / n, z2 = z * z;
    const double centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    const double half = z / (1.0 + z2 / n) * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

std::vector<GapEstimate> empirical_gap(const McResult& result, const std::vector<double>& s_grid) {
    const int n = static_cast<int>(result.lambda_min.size());
    if (n == 0) throw DomainError("empirical_gap: no samples");
    std::vector<double> sorted = result.lambda_min;
    std::sort(sorted.begin(), sorted.end());
    std::vector<GapEstimate> out;
    for (double s : s_grid) {
        GapEstimate g;
        g.s = s;
        g.samples = n;
        const double t = s / result.config.N0;
        g.survivors = static_cast<int>(sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), t));
        g.p_hat = double(g.survivors) / n;
        std::tie(g.ci_low, g.ci_high) = wilson_interval(g.survivors, n, kZ99);
        out.push_back(g);
    }
    return out;
}

double ks_distance(const McResult& a, const McResult& b) {
    std::vector<double> x, y;
    for (double v : a.lambda_min) x.push_back(v * a.config.N0);
    for (double v : b.lambda_min) y.push_back(v * b.config.N0);
    if (x.empty() || y.empty()) throw DomainError("ks_distance: empty sample");
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < x.size() && j < y.size()) {
        const double t = std::min(x[i], y[j]);
        while (i < x.size() && x[i] <= t) ++i;
        while (j < y.size() && y[j] <= t) ++j;
        d = std::max(d, std::abs(double(i) / x.size() - double(j) / y.size()));
    }
    return d;
}

void write_samples(const McResult& result, const std::string& path) {
    std::ofstream bin(path, std::ios::binary);
    if (!bin) throw std::runtime_error("write_samples: cannot open " + path);
    bin.write(reinterpret_cast<const char*>(result.lambda_min.data()),
              static_cast<std::streamsize>(result.lambda_min.size() * sizeof(double)));
    const auto& c = result.config;
    nlohmann::json j{{"M", c.M},
                     {"N0", c.N0},
                     {"nu", c.nu_int},
                     {"samples", c.samples},
                     {"seed", c.seed},
                     {"variance", c.variance == VarianceConvention::unit_total ? "unit_total" : "unit_component"},
                     {"scaled", result.scaled},
                     {"generator", "mt19937_64 per sample, seed_seq(seed, index)"},
                     {"dtype", "float64 little-endian"}};
    std::ofstream side(path + ".json");
    side << j.dump(2) << '\n';
}

McResult read_samples(const std::string& path) {
    std::ifstream side(path + ".json");
    if (!side) throw std::runtime_error("read_samples: missing sidecar for " + path);
    const auto j = nlohmann::json::parse(side);
    McResult r;
    auto& c = r.config;
    c.M = j.at("M");
    c.N0 = j.at("N0");
    c.nu_int = j.at("nu").get<std::vector<int>>();
    c.samples = j.at("samples");
    c.seed = j.at("seed");
    c.variance = j.at("variance") == "unit_total" ? VarianceConvention::unit_total : VarianceConvention::unit_component;
    r.scaled = j.at("scaled");
    std::ifstream bin(path, std::ios::binary);
    r.lambda_min.resize(c.samples);
    bin.read(reinterpret_cast<char*>(r.lambda_min.data()), static_cast<std::streamsize>(c.samples * sizeof(double)));
    if (bin.gcount() != static_cast<std::streamsize>(c.samples * sizeof(double)))
        throw std::runtime_error("read_samples: truncated " + path);
    summarize(r);
    return r;
}

}  // namespace hardedge
