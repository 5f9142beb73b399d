#include "ddeit/dressed.hpp"

#include <cmath>

#include "ddeit/errors.hpp"

namespace ddeit {

namespace {
const cplx im(0.0, 1.0);
}

DressedFrame dressed_frame(double rabi_c, double delta_c) {
  if (rabi_c == 0.0)
    throw ZeroCoupling("dressed frame undefined for zero coupling Rabi frequency");

  DressedFrame f;
  const double root = std::sqrt(rabi_c * rabi_c + delta_c * delta_c);
  f.zeta = (root + delta_c) / rabi_c;
  f.theta = 1.0 / std::sqrt(1.0 + std::norm(f.zeta));
  f.delta_plus = (delta_c + root) / 2.0;
  f.delta_minus = (delta_c - root) / 2.0;

  // rows: |1>, |->, |3>, |+>
  f.U = Matrix4::Zero();
  f.U(0, 0) = 1.0;
  f.U(2, 2) = 1.0;
  f.U(1, 1) = f.theta;
  f.U(1, 3) = f.theta * f.zeta;
  f.U(3, 1) = -f.theta * std::conj(f.zeta);
  f.U(3, 3) = f.theta;
  return f;
}

std::pair<cplx, cplx> dressed_components(const AtomSpec& atom,
                                         const DriveConfig& drives,
                                         cplx rho14_lin) {
  const DressedFrame f = dressed_frame(drives.rabi_c, drives.delta_c);
  const double g2 = atom.decay_total(2) + atom.gamma_phi2;
  const cplx raman(g2, -2.0 * drives.delta_pc());
  const cplx b = drives.rabi_c / raman;
  const cplx plus = (f.theta - im * f.theta * std::conj(f.zeta) * b) * rho14_lin;
  const cplx minus = (f.theta * f.zeta + im * f.theta * b) * rho14_lin;
  return {plus, minus};
}

DensityMatrix transform_density(const DensityMatrix& dm, const DressedFrame& frame) {
  DensityMatrix out;
  out.rho = frame.U * dm.rho * frame.U.adjoint();
  out.provenance = dm.provenance + " (dressed)";
  return out;
}

DensityMatrix assemble_linear_order(const AtomSpec& atom, const DriveConfig& drives,
                                    const DensityMatrix& populations, cplx rho14_lin) {
  const double g2 = atom.decay_total(2) + atom.gamma_phi2;
  const cplx raman(g2, -2.0 * drives.delta_pc());
  const cplx rho12 = im * drives.rabi_c * rho14_lin / raman;

  DensityMatrix out;
  out.rho = Matrix4::Zero();
  for (int i = 0; i < 4; ++i) out.rho(i, i) = populations.rho(i, i).real();
  out.rho(0, 3) = rho14_lin;
  out.rho(3, 0) = std::conj(rho14_lin);
  out.rho(0, 1) = rho12;
  out.rho(1, 0) = std::conj(rho12);
  out.provenance = "linear order";
  return out;
}

} // namespace ddeit
