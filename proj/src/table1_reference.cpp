#include "hardedge/table1_reference.hpp"

#include "hardedge/special_functions.hpp"

namespace hardedge {

const std::array<Table1Row, kTable1Rows>& table1_rows() {
    static const std::array<Table1Row, kTable1Rows> rows{{
        {4, -5.96549338586, -0.70729888196, -3.2910182568186667, -0.7050253349947},
        {5, -7.7702165574578, -0.707506362179, -4.6175115857278, -0.7059621770238},
        {6, -9.666703768133, -0.707671636400, -6.06617567204249, -0.7065523127608},
        {7, -11.6460744648319, -0.707802917979, -7.6216467824166, -0.706953478338},
        {8, -13.701343595761, -0.707908414200, -9.2725398209570, -0.707241379027},
        {9, -15.826846765594, -0.70799443184, -11.010033902389, -0.70745656369},
        {10, -18.017880484821, -0.70806558203, -12.8270650595890, -0.7076225663},
        {11, -20.27046470121, -0.7081252605, -14.7178300927, -0.7077538862},
        {12, -22.58117923782, -0.7081762248, -16.6774638565, -0.7078597927},
        {13, -24.9470471656, -0.7082218856, -18.70181973197, -0.7079460684},
        {14, -27.3654492473, -0.70827084, -20.7873147490, -0.7080153465},
    }};
    return rows;
}

double table1_a1_limit(int c) {
    if (c == 0) return -0.7088;
    if (c == 1) return -0.7083172;
    throw DomainError("table1_a1_limit: c must be 0 or 1");
}

}  // namespace hardedge
