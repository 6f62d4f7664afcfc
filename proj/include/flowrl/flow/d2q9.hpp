#pragma once

#include <array>

namespace flowrl::flow {

// D2Q9 lattice: rest population first, then axis directions, then diagonals.
inline constexpr int kQ = 9;
inline constexpr std::array<int, kQ> kCx = {0, 1, 0, -1, 0, 1, -1, -1, 1};
inline constexpr std::array<int, kQ> kCy = {0, 0, 1, 0, -1, 1, 1, -1, -1};
inline constexpr std::array<int, kQ> kOpp = {0, 3, 4, 1, 2, 7, 8, 5, 6};
inline constexpr std::array<double, kQ> kWeight = {
    4.0 / 9.0,  1.0 / 9.0,  1.0 / 9.0,  1.0 / 9.0, 1.0 / 9.0,
    1.0 / 36.0, 1.0 / 36.0, 1.0 / 36.0, 1.0 / 36.0};

inline constexpr double kCs2 = 1.0 / 3.0;  // lattice speed of sound squared

}  // namespace flowrl::flow
