#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hardedge/asymptotics.hpp"
#include "hardedge/ginibre_mc.hpp"
#include "hardedge/hamiltonian_flow.hpp"

namespace hardedge {

enum class VerifyCase { m1, m2_special };

// "m1" or "m2-special".
std::optional<VerifyCase> parse_verify_case(std::string_view name);
std::string_view verify_case_name(VerifyCase which);
HardEdgeParams verify_case_params(VerifyCase which);

struct CategoryCheck {
    std::string category;
    double max_residual = 0.0;
    double tolerance = 0.0;
    double worst_s = 0.0;
    std::string worst_entry;
    int evaluations = 0;

    bool pass() const { return max_residual <= tolerance; }
};

struct VerifyReport {
    VerifyCase which = VerifyCase::m1;
    HardEdgeParams params;
    double s_max = 0.0;
    double tol = 0.0;
    std::vector<double> grid;
    std::vector<double> gap_grid;
    std::vector<CategoryCheck> categories;

    bool pass() const;
    const CategoryCheck* first_failure() const;
    const CategoryCheck& category(std::string_view name) const;
};

inline constexpr double kVerifySMin = 1e-4;
inline constexpr int kVerifyGridPoints = 41;

// Integrates from s0 = 1e-6 and evaluates every residual family on a log grid
// over [1e-4, s_max]; the Fredholm comparison uses s in {0.25, 0.5, 1, 2, 4}
// up to s_max.
VerifyReport run_verify(VerifyCase which, double s_max = 10.0, double tol = 1e-10);

// Fredholm reference for log E_M(0; (0, s)): Bessel kernel for M = 1, the
// theta = 2 Muttalib-Borodin kernel at r = 2 sqrt(s) when M = 2 has one.
double fredholm_log_gap(const HardEdgeParams& params, double s, double target_tol = 1e-10);

struct Table1Cell {
    int c = 0;
    int r = 0;
    double logE = 0.0;
    double est_error = 0.0;  // |log E(n) - log E(n + 16)|
    bool converged = false;
    std::string error;
    std::optional<double> reference;
    std::optional<double> diff;
    double tolerance = 0.0;  // 1e-7 for r <= 8, 1e-6 beyond

    bool pass() const { return converged && (!diff || *diff <= tolerance); }
};

struct Table1Run {
    int nodes = 48;
    int r_min = 4;
    int r_max = 14;
    std::vector<Table1Cell> cells;  // c = 0 rows, then c = 1 rows
    // Per c: local a1 with the window (r, r + 1, r + 2), the reference layout.
    std::array<std::vector<LocalA1>, 2> a1_leading;
    std::array<std::vector<LocalA1>, 2> a1_centered;
    std::array<std::optional<double>, 2> a1_extrapolated;
    double seconds = 0.0;

    const Table1Cell& cell(int c, int r) const;
    bool pass() const;
};

inline constexpr int kTable1MaxNodes = 96;

Table1Run compute_table1(int nodes = 48, int r_min = 4, int r_max = 14);

// Exact gap probability for the Monte Carlo configuration when one is
// available (M = 1).
std::optional<double> mc_oracle(const McConfig& cfg, double s);

}  // namespace hardedge
