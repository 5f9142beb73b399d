#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <utility>

#include "ddeit/units.hpp"

namespace ddeit {

using cplx = std::complex<double>;
using Matrix4 = Eigen::Matrix4cd;
using Matrix16 = Eigen::Matrix<cplx, 16, 16>;
using Vector16 = Eigen::Matrix<cplx, 16, 1>;

// Four-level tripod: |1>,|2>,|3> ground, |4> excited. All rates in angular MHz.
struct AtomSpec {
  // population decay (j -> i), keys are 1-based level pairs with j > i
  std::map<std::pair<int, int>, double> decay_channels;
  double gamma_phi2 = 0.0;
  double gamma_phi3 = 0.0;
  double gamma_phi4 = 0.0;

  double density = 1e20;                      // m^-3
  double carrier = 2.369e15;                  // rad/s, |1>-|4> transition
  double mass = 86.909180527 * units::amu;    // kg
  double dipole_14 = 0.0;                     // C m, set by make_atom
  double dipole_34 = 0.0;

  // total population loss rate out of a level plus its dephasing
  double gamma_total(int level) const;
  // population loss only
  double decay_total(int level) const;
};

struct DriveConfig {
  double rabi_p = 0.0, rabi_c = 0.0, rabi_s = 0.0;       // angular MHz
  double delta_p = 0.0, delta_c = 0.0, delta_s = 0.0;    // angular MHz
  double lw_p = 0.0, lw_c = 0.0, lw_s = 0.0;             // laser linewidths

  double delta_pc() const { return delta_p - delta_c; }
  double delta_ps() const { return delta_p - delta_s; }
  double delta_sc() const { return delta_s - delta_c; }
};

struct Liouvillian {
  Matrix16 mat;
  AtomSpec atom;
  DriveConfig drives;

  Matrix4 apply(const Matrix4& rho) const;
};

// rates in ordinary MHz as quoted; branching gamma4/3 to each ground state,
// gamma2 -> gamma21, gamma3 -> gamma31, dephasings zero
AtomSpec make_atom(double gamma2_mhz = 0.04, double gamma3_mhz = 0.01,
                   double gamma4_mhz = 18.0);

Matrix4 build_hamiltonian(const AtomSpec& atom, const DriveConfig& drives);
Liouvillian build_liouvillian(const AtomSpec& atom, const DriveConfig& drives);

} // namespace ddeit
