#pragma once

// Physical constants, CODATA 2018, SI units. Every formula in the toolkit
// consumes these; no module redefines them.
namespace casikit::constants {

inline constexpr double hbar = 1.054571817e-34;      // J s
inline constexpr double c = 299792458.0;             // m/s
inline constexpr double k_b = 1.380649e-23;          // J/K
inline constexpr double eps0 = 8.8541878128e-12;     // F/m
inline constexpr double e_charge = 1.602176634e-19;  // C

}  // namespace casikit::constants
