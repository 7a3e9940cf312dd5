#pragma once

// CODATA 2018 values, SI units.
namespace spdc::constants {

inline constexpr double c = 299'792'458.0;              // m/s, exact
inline constexpr double epsilon0 = 8.8541878128e-12;    // F/m
inline constexpr double hbar = 1.054571817e-34;         // J s, exact

}  // namespace spdc::constants
