#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hardedge/special_functions.hpp"

namespace hardedge {

enum class VarianceConvention {
    unit_total,      // E|g|^2 = 1: real and imaginary parts each of variance 1/2
    unit_component,  // real and imaginary parts each of variance 1
};

struct McConfig {
    int M = 1;
    int N0 = 1;
    std::vector<int> nu_int;  // nu_1 .. nu_M, non-negative
    int samples = 1;
    std::uint64_t seed = 0;
    VarianceConvention variance = VarianceConvention::unit_total;

    void validate() const;
    int rows(int m) const { return m == 0 ? N0 : N0 + nu_int[m - 1]; }
};

inline constexpr int kMaxMcN0 = 512;

struct McResult {
    McConfig config;
    // Smallest eigenvalue of Y^* Y per sample, on the unit_total scale.
    std::vector<double> lambda_min;
    bool scaled = false;  // true when unit_component draws were divided by 2^M
    double mean = 0.0;
    double stddev = 0.0;
    double min = 0.0;
    double max = 0.0;
};

// Product Y = X(M) ... X(1), X(m) of shape N_m x N_{m-1}. Sample i uses an
// mt19937_64 seeded from (seed, i), so any subset of samples can be redrawn.
McResult sample_min_singular_sq(const McConfig& cfg);

// Draws for sample indices [first, first + count).
std::vector<double> sample_range(const McConfig& cfg, int first, int count);

struct GapEstimate {
    double s = 0.0;
    double p_hat = 1.0;  // fraction with lambda_min > s / N0
    double ci_low = 1.0;
    double ci_high = 1.0;
    int survivors = 0;
    int samples = 0;
};

// Wilson interval at level 99%.
std::vector<GapEstimate> empirical_gap(const McResult& result, const std::vector<double>& s_grid);

// Wilson score interval for k successes in n trials with normal quantile z.
std::pair<double, double> wilson_interval(int k, int n, double z);

inline constexpr double kZ99 = 2.5758293035489004;

// Two-sample Kolmogorov-Smirnov distance of N0 * lambda_min.
double ks_distance(const McResult& a, const McResult& b);

// Flat little-endian float64 array plus a JSON sidecar at path + ".json".
void write_samples(const McResult& result, const std::string& path);
McResult read_samples(const std::string& path);

}  // namespace hardedge
