#pragma once

#include <utility>

#include "ddeit/atom.hpp"
#include "ddeit/steadystate.hpp"

namespace ddeit {

struct DressedFrame {
  cplx zeta{};        // mixing parameter
  double theta = 0.0; // 1/sqrt(1+|zeta|^2)
  Matrix4 U = Matrix4::Identity();
  double delta_plus = 0.0;  // probe resonance onto |+>
  double delta_minus = 0.0; // probe resonance onto |->
};

DressedFrame dressed_frame(double rabi_c, double delta_c);

// (rho_1+, rho_1-) channel amplitudes for a given linear-order rho14 ratio
std::pair<cplx, cplx> dressed_components(const AtomSpec& atom,
                                         const DriveConfig& drives,
                                         cplx rho14_lin);

DensityMatrix transform_density(const DensityMatrix& dm, const DressedFrame& frame);

// zeroth-order populations plus the coherences linear in the probe
// (rho12, rho14 and conjugates)
DensityMatrix assemble_linear_order(const AtomSpec& atom, const DriveConfig& drives,
                                    const DensityMatrix& populations, cplx rho14_lin);

} // namespace ddeit
