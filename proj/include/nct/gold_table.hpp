// Built-in evaluation table: 17 (x, nu, delta) triples with reference lower
// CDF values spanning the central region down to the 1e-272 extreme-tail
// regime, plus the windowed-integrand showcase case (x=5, nu=100, delta=15).

#pragma once

#include <array>

namespace nct {

struct GoldRow {
    double x;
    double nu;
    double delta;
    double lower;  // reference lower-tail CDF
};

inline constexpr std::array<GoldRow, 17> kGoldTable = {{
    {1.0, 1.0, 0.0, 7.50000000000000000e-001},
    {-35.0, 1.0, 0.0, 9.09209467564843408e-003},
    {-35.0, 1.0, 1.0, 1.89903487263458750e-003},
    {-5.0, 1.0, 5.0, 8.52042451613777143e-009},
    {-15.0, 1.0, 15.0, 1.29043391190105994e-053},
    {-35.0, 1.0, 35.0, 7.31501102529248499e-272},
    {1.0, 10.0, 5.0, 4.34725285650591657e-005},
    {1.0, 10.0, 10.0, 7.95914542988750673e-019},
    {1.0, 10.0, 15.0, 1.41346486009205976e-042},
    {1.0, 10.0, 35.0, 1.69061467860900429e-237},
    {150.0, 10.0, 200.0, 5.88999020094520836e-002},
    {150.0, 10.0, 500.0, 3.25241635439258347e-019},
    {50.0, 100.0, 75.0, 4.99615060338271916e-011},
    {500.0, 100.0, 510.0, 3.71160937464178059e-001},
    {1.0, 1000.0, 10.0, 1.14935521338266224e-019},
    {100.0, 1000.0, 105.0, 2.05403544901854621e-002},
    {1000.0, 1000.0, 1010.0, 3.22438286661716843e-001},
}};

inline constexpr GoldRow kFigureCase = {5.0, 100.0, 15.0, 2.640405806735035e-21};

}  // namespace nct
