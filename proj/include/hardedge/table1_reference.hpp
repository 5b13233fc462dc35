#pragma once

#include <array>

namespace hardedge {

// Reference log E and local a_1 for the theta = 2 Muttalib-Borodin hard edge, c = 0 and c = 1.
struct Table1Row {
    int r;
    double logE_c0, a1_c0, logE_c1, a1_c1;
};

inline constexpr int kTable1Rows = 11;

const std::array<Table1Row, kTable1Rows>& table1_rows();

// Reference extrapolated a_1.
double table1_a1_limit(int c);

}  // namespace hardedge
