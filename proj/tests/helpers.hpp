#pragma once

#include <Eigen/Dense>

#include "ddeit/atom.hpp"
#include "ddeit/units.hpp"

namespace tst {

// reference configuration used throughout: coupling at the full excited
// decay rate, signal at 0.3 of it and parked at half the coupling Rabi
// frequency, coupling on resonance
inline ddeit::AtomSpec atom() { return ddeit::make_atom(); }

inline double gamma4() { return ddeit::make_atom().decay_total(4); }

inline ddeit::DriveConfig drives(double rabi_p = 0.0) {
  ddeit::DriveConfig d;
  const double g4 = gamma4();
  d.rabi_c = g4;
  d.rabi_s = 0.3 * g4;
  d.delta_c = 0.0;
  d.delta_s = 0.5 * d.rabi_c;
  d.rabi_p = rabi_p;
  return d;
}

// population overrides that reproduce the gain curve (the honest zeroth
// state parks everything in |1>)
inline Eigen::Vector4d probe_pops() { return {0.25, 0.25, 0.5, 0.0}; }
inline Eigen::Vector4d signal_pops() { return {0.25, 0.5, 0.25, 0.0}; }

inline double mhz(double quoted) { return ddeit::units::angular_from_mhz(quoted); }

} // namespace tst
