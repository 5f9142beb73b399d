#pragma once

#include <cmath>

namespace ddeit::units {

inline constexpr double two_pi = 6.283185307179586476925286766559;
inline constexpr double c_light = 2.99792458e8;        // m/s
inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double eps0 = 8.8541878128e-12;       // F/m
inline constexpr double k_boltzmann = 1.380649e-23;    // J/K
inline constexpr double amu = 1.66053906660e-27;       // kg

// Internal frequency unit is angular MHz (rad/us). Quoted MHz values
// are ordinary frequencies and carry a factor 2*pi.
inline constexpr double angular_from_mhz(double mhz) { return two_pi * mhz; }
inline constexpr double mhz_from_angular(double ang) { return ang / two_pi; }

// rad/s per (rad/us)
inline constexpr double rad_per_s_from_angular(double ang) { return ang * 1e6; }

} // namespace ddeit::units
