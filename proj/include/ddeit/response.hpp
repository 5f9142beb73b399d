#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ddeit/atom.hpp"
#include "ddeit/steadystate.hpp"

namespace ddeit {

enum class Channel { probe, signal };

inline const char* channel_name(Channel c) {
  return c == Channel::probe ? "probe" : "signal";
}

// The coupling-saturation term in the probe denominator appears with either
// sign in the literature; plus_plus is the variant validated against the full
// Liouvillian (see tests), minus_c kept for documentation.
enum class SignVariant { plus_plus, minus_c };

struct CompositeRates {
  double Gamma43 = 0.0; // gamma4 + gamma3 (+ dephasings)
  double Gamma32 = 0.0; // gamma3 + gamma2 (+ dephasings)
};

struct LinearResponse {
  cplx rho_lin_ratio{};  // rho14_lin/Omega_p or rho34_lin/Omega_s, 1/(angular MHz)
  cplx chi{};            // prefactor * rho_lin_ratio
  double prefactor = 0;  // N |d|^2 / (eps0 hbar), angular MHz
};

struct Spectrum {
  std::vector<double> grid;  // detuning samples, angular MHz, strictly increasing
  std::vector<cplx> values;  // chi per sample
  Channel channel = Channel::probe;
  std::string broadening = "bare"; // bare | linewidth | doppler
};

double dipole_from_linewidth(double gamma_rad_si, double omega_si); // C m
double chi_prefactor(const AtomSpec& atom);                         // angular MHz

// slot rates entering the analytic formulas (decay totals plus dephasings)
CompositeRates composite_rates(const AtomSpec& atom);

// Steady state with the named field's Rabi frequency forced to zero.
DensityMatrix zeroth_order_state(const AtomSpec& atom, const DriveConfig& drives,
                                 Channel off_field);

// rho43 coherence of the coupling+signal-dressed zeroth-order state
cplx rho43_zeroth(const AtomSpec& atom, const DriveConfig& drives,
                  const DensityMatrix& populations);
// rho41 coherence of the probe+coupling-dressed zeroth-order state
cplx rho41_zeroth(const AtomSpec& atom, const DriveConfig& drives,
                  const DensityMatrix& populations);

LinearResponse probe_chi_analytic(const AtomSpec& atom, const DriveConfig& drives,
                                  const DensityMatrix& populations,
                                  SignVariant variant = SignVariant::plus_plus,
                                  bool zero_source_coherence = false);

LinearResponse signal_chi_analytic(const AtomSpec& atom, const DriveConfig& drives,
                                   const DensityMatrix& populations);

// Non-perturbative steady-state ratio at the drive's own probed Rabi
// frequency; validated by a halving test (relative change < 0.1%).
LinearResponse chi_numeric(const AtomSpec& atom, const DriveConfig& drives,
                           Channel channel);

constexpr double kDefaultProbedRabiFraction = 1e-4; // of gamma4 total

struct SweepOptions {
  Channel channel = Channel::probe;
  enum class Method { analytic, numeric } method = Method::analytic;
  std::optional<Eigen::Vector4d> populations; // override zeroth-order diagonal
  SignVariant variant = SignVariant::plus_plus;
  bool zero_source_coherence = false;
  std::optional<double> probed_rabi; // numeric method only; default 1e-4*gamma4
  int threads = 1;
};

Spectrum sweep(const AtomSpec& atom, const DriveConfig& drives,
               const std::vector<double>& grid, const SweepOptions& opt = {});

std::vector<double> linspace(double start, double stop, int points);

// v_g = c / (1 + Re chi/2 + (carrier/2) d(Re chi)/d delta), central difference
// with step = local window width / 100
double group_velocity(const Spectrum& spectrum, double center, double carrier);

} // namespace ddeit
