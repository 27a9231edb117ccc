#pragma once

namespace omht::constants {

// SI defining constants (exact) and CODATA 2022 values, 10 significant figures.
inline constexpr double hbar = 1.054571817e-34;    // J s
inline constexpr double k_B = 1.380649e-23;        // J/K (exact)
inline constexpr double c_light = 299792458.0;     // m/s (exact)
inline constexpr double amu = 1.66053906892e-27;   // kg

inline constexpr double pi = 3.14159265358979323846;

}  // namespace omht::constants
