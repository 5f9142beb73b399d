#pragma once

#include <optional>
#include <vector>

#include "ddeit/response.hpp"

namespace ddeit {

struct DopplerSettings {
  double temperature = 300.0;                  // K
  double mass = 86.909180527 * units::amu;     // kg
  double k_boltzmann = units::k_boltzmann;     // J/K
  int node_count = 64;                         // >= 8, even
  double wavenumber = 2.369e15 / units::c_light; // rad/m

  double v_rms() const { return std::sqrt(2.0 * k_boltzmann * temperature / mass); }
};

// Gauss-Hermite nodes and probability weights (weights sum to 1) for
// integrals against exp(-u^2)/sqrt(pi). Stable for n into the tens of
// thousands: Newton iteration on the scaled orthonormal recurrence.
struct GaussHermite {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussHermite gauss_hermite(int n);

// Each field's linewidth added to the dephasing of the coherences it drives:
// probe -> gamma_phi4, coupling -> gamma_phi2, signal -> gamma_phi3.
AtomSpec apply_laser_linewidths(const AtomSpec& atom, const DriveConfig& drives);

// Maxwell average over a 1-D velocity distribution; all three one-photon
// detunings shift by k_w*v per class, two-photon detunings invariant.
// Convergence enforced by a node-doubling check (< 1e-3 relative per point).
Spectrum doppler_average(const AtomSpec& atom, const DriveConfig& drives,
                         Channel channel, const std::vector<double>& grid,
                         const DopplerSettings& settings,
                         const std::optional<Eigen::Vector4d>& populations = {},
                         int threads = 1);

} // namespace ddeit
