#include "ddeit/atom.hpp"

#include "ddeit/response.hpp"

namespace ddeit {

namespace {

Matrix4 level_op(int i, int j) { // |i><j|, 1-based
  Matrix4 m = Matrix4::Zero();
  m(i - 1, j - 1) = 1.0;
  return m;
}

// column-stacked vec: vec(A rho B) = kron(B^T, A) vec(rho)
Matrix16 kron(const Matrix4& a, const Matrix4& b) {
  Matrix16 out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      out.block<4, 4>(4 * i, 4 * j) = a(i, j) * b;
  return out;
}

} // namespace

double AtomSpec::decay_total(int level) const {
  double g = 0.0;
  for (const auto& [pair, rate] : decay_channels)
    if (pair.first == level) g += rate;
  return g;
}

double AtomSpec::gamma_total(int level) const {
  double phi = level == 2 ? gamma_phi2 : level == 3 ? gamma_phi3
                          : level == 4 ? gamma_phi4 : 0.0;
  return decay_total(level) + phi;
}

AtomSpec make_atom(double gamma2_mhz, double gamma3_mhz, double gamma4_mhz) {
  AtomSpec a;
  const double g2 = units::angular_from_mhz(gamma2_mhz);
  const double g3 = units::angular_from_mhz(gamma3_mhz);
  const double g4 = units::angular_from_mhz(gamma4_mhz);
  a.decay_channels[{2, 1}] = g2;
  a.decay_channels[{3, 1}] = g3;
  a.decay_channels[{4, 1}] = g4 / 3.0;
  a.decay_channels[{4, 2}] = g4 / 3.0;
  a.decay_channels[{4, 3}] = g4 / 3.0;
  a.dipole_14 = dipole_from_linewidth(units::rad_per_s_from_angular(g4), a.carrier);
  a.dipole_34 = a.dipole_14;
  return a;
}

Matrix4 build_hamiltonian(const AtomSpec&, const DriveConfig& d) {
  Matrix4 H = Matrix4::Zero();
  H(1, 1) = d.delta_pc();
  H(2, 2) = d.delta_ps();
  H(3, 3) = d.delta_p;
  H(3, 0) = d.rabi_p / 2.0;
  H(0, 3) = d.rabi_p / 2.0;
  H(3, 1) = d.rabi_c / 2.0;
  H(1, 3) = d.rabi_c / 2.0;
  H(3, 2) = d.rabi_s / 2.0;
  H(2, 3) = d.rabi_s / 2.0;
  return H;
}

Liouvillian build_liouvillian(const AtomSpec& atom, const DriveConfig& drives) {
  const Matrix4 H = build_hamiltonian(atom, drives);
  const Matrix4 I = Matrix4::Identity();
  const cplx im(0.0, 1.0);

  Matrix16 L = -im * (kron(I, H) - kron(H.transpose(), I));

  auto dissipator = [&](const Matrix4& C, double rate) {
    const Matrix4 CdC = C.adjoint() * C;
    L += rate * (kron(C.conjugate(), C)
                 - 0.5 * (kron(I, CdC) + kron(CdC.transpose(), I)));
  };

  for (const auto& [pair, rate] : atom.decay_channels)
    if (rate > 0.0) dissipator(level_op(pair.second, pair.first), rate);
  if (atom.gamma_phi2 > 0.0) dissipator(level_op(2, 2), atom.gamma_phi2);
  if (atom.gamma_phi3 > 0.0) dissipator(level_op(3, 3), atom.gamma_phi3);
  if (atom.gamma_phi4 > 0.0) dissipator(level_op(4, 4), atom.gamma_phi4);

  return Liouvillian{L, atom, drives};
}

Matrix4 Liouvillian::apply(const Matrix4& rho) const {
  const Eigen::Map<const Vector16> v(rho.data());
  const Vector16 w = mat * v;
  return Eigen::Map<const Matrix4>(w.data());
}

} // namespace ddeit
