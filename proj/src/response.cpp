#include "ddeit/response.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "ddeit/errors.hpp"

namespace ddeit {

namespace {

const cplx im(0.0, 1.0);

void check_denominator(const cplx& d, const char* what) {
  if (std::abs(d) < 1e-12)
    throw DivisionNearZero(std::string(what) + " denominator modulus < 1e-12");
}

struct Slots {
  double g2, g3, g4; // single-coherence slots, dephasing included
  double G43, G32;   // composite slots
};

Slots slots(const AtomSpec& atom) {
  const double g2 = atom.decay_total(2);
  const double g3 = atom.decay_total(3);
  const double g4 = atom.decay_total(4);
  return Slots{g2 + atom.gamma_phi2, g3 + atom.gamma_phi3, g4 + atom.gamma_phi4,
               g4 + g3 + atom.gamma_phi4 + atom.gamma_phi3,
               g3 + g2 + atom.gamma_phi3 + atom.gamma_phi2};
}

} // namespace

double dipole_from_linewidth(double gamma_rad_si, double omega_si) {
  using namespace units;
  return std::sqrt(3.0 * M_PI * eps0 * hbar * c_light * c_light * c_light
                   * gamma_rad_si / (omega_si * omega_si * omega_si));
}

double chi_prefactor(const AtomSpec& atom) {
  using namespace units;
  const double d2 = atom.dipole_14 * atom.dipole_14;
  return atom.density * d2 / (eps0 * hbar) / 1e6; // rad/s -> angular MHz
}

CompositeRates composite_rates(const AtomSpec& atom) {
  const Slots s = slots(atom);
  return CompositeRates{s.G43, s.G32};
}

DensityMatrix zeroth_order_state(const AtomSpec& atom, const DriveConfig& drives,
                                 Channel off_field) {
  DriveConfig d = drives;
  (off_field == Channel::probe ? d.rabi_p : d.rabi_s) = 0.0;
  DensityMatrix dm = steady_state(build_liouvillian(atom, d));
  dm.provenance = std::string("zeroth_order_state(") + channel_name(off_field) + ")";
  return dm;
}

cplx rho43_zeroth(const AtomSpec& atom, const DriveConfig& drives,
                  const DensityMatrix& populations) {
  const Slots s = slots(atom);
  const double p33 = populations.population(3);
  const double p44 = populations.population(4);
  const cplx inner(s.G32, 2.0 * drives.delta_sc());
  check_denominator(inner, "rho43 inner");
  const cplx den = cplx(s.G43, 2.0 * drives.delta_s)
                   + drives.rabi_c * drives.rabi_c / inner;
  check_denominator(den, "rho43");
  return -im * drives.rabi_s * (p33 - p44) / den;
}

cplx rho41_zeroth(const AtomSpec& atom, const DriveConfig& drives,
                  const DensityMatrix& populations) {
  const Slots s = slots(atom);
  const double p11 = populations.population(1);
  const double p44 = populations.population(4);
  const cplx inner(s.g2, 2.0 * drives.delta_pc());
  check_denominator(inner, "rho41 inner");
  const cplx den = cplx(s.g4, 2.0 * drives.delta_p)
                   + drives.rabi_c * drives.rabi_c / inner;
  check_denominator(den, "rho41");
  return -im * drives.rabi_p * (p11 - p44) / den;
}

LinearResponse probe_chi_analytic(const AtomSpec& atom, const DriveConfig& drives,
                                  const DensityMatrix& populations,
                                  SignVariant variant, bool zero_source_coherence) {
  const Slots s = slots(atom);
  const double p11 = populations.population(1);
  const double p44 = populations.population(4);
  const double sign_c = variant == SignVariant::plus_plus ? 1.0 : -1.0;

  const cplx den_c(s.g2, -2.0 * drives.delta_pc());
  const cplx den_s(s.g3, -2.0 * drives.delta_ps());
  check_denominator(den_c, "coupling saturation");
  check_denominator(den_s, "signal saturation");

  const cplx r430 = zero_source_coherence
                        ? cplx(0.0, 0.0)
                        : rho43_zeroth(atom, drives, populations);
  const cplx num = im * (p11 - p44) + drives.rabi_s * r430 / den_s;
  const cplx den = cplx(s.g4, -2.0 * drives.delta_p)
                   + sign_c * drives.rabi_c * drives.rabi_c / den_c
                   + drives.rabi_s * drives.rabi_s / den_s;
  check_denominator(den, "probe response");

  LinearResponse r;
  r.prefactor = chi_prefactor(atom);
  r.rho_lin_ratio = num / den;
  r.chi = r.prefactor * r.rho_lin_ratio;
  return r;
}

LinearResponse signal_chi_analytic(const AtomSpec& atom, const DriveConfig& drives,
                                   const DensityMatrix& populations) {
  const Slots s = slots(atom);
  const double p33 = populations.population(3);
  const double p44 = populations.population(4);

  const cplx den_c(s.G32, -2.0 * drives.delta_sc());
  const cplx den_p(s.g3, 2.0 * drives.delta_ps());
  check_denominator(den_c, "coupling saturation");
  check_denominator(den_p, "probe saturation");

  const cplx r410 = rho41_zeroth(atom, drives, populations);
  const cplx num = im * (p33 - p44) + drives.rabi_p * r410 / den_p;
  const cplx den = cplx(s.G43, -2.0 * drives.delta_s)
                   + drives.rabi_c * drives.rabi_c / den_c
                   + drives.rabi_p * drives.rabi_p / den_p;
  check_denominator(den, "signal response");

  LinearResponse r;
  r.prefactor = chi_prefactor(atom);
  r.rho_lin_ratio = num / den;
  r.chi = r.prefactor * r.rho_lin_ratio;
  return r;
}

LinearResponse chi_numeric(const AtomSpec& atom, const DriveConfig& drives,
                           Channel channel) {
  const double rabi = channel == Channel::probe ? drives.rabi_p : drives.rabi_s;
  if (std::abs(rabi) < 1e-300)
    throw DivisionNearZero("probed Rabi frequency is zero, ratio undefined");

  auto ratio_at = [&](double r) {
    DriveConfig d = drives;
    (channel == Channel::probe ? d.rabi_p : d.rabi_s) = r;
    const DensityMatrix dm = steady_state(build_liouvillian(atom, d));
    return channel == Channel::probe ? dm.rho(0, 3) / r : dm.rho(2, 3) / r;
  };

  const cplx full = ratio_at(rabi);
  const cplx half = ratio_at(rabi / 2.0);
  if (std::abs(full - half) > 1e-3 * std::abs(full))
    throw NonlinearRegime("halving the probed Rabi changes the ratio by > 0.1%");

  LinearResponse r;
  r.prefactor = chi_prefactor(atom);
  r.rho_lin_ratio = full;
  r.chi = r.prefactor * r.rho_lin_ratio;
  return r;
}

std::vector<double> linspace(double start, double stop, int points) {
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i)
    g[i] = start + (stop - start) * double(i) / double(points - 1);
  return g;
}

Spectrum sweep(const AtomSpec& atom, const DriveConfig& drives,
               const std::vector<double>& grid, const SweepOptions& opt) {
  Spectrum out;
  out.grid = grid;
  out.values.resize(grid.size());
  out.channel = opt.channel;
  out.broadening = (atom.gamma_phi2 > 0 || atom.gamma_phi3 > 0 || atom.gamma_phi4 > 0)
                       ? "linewidth" : "bare";

  DensityMatrix pops;
  if (opt.method == SweepOptions::Method::analytic) {
    if (opt.populations) {
      pops.rho = opt.populations->cast<cplx>().asDiagonal();
      pops.provenance = "override";
    } else {
      pops = zeroth_order_state(atom, drives, opt.channel);
    }
  }

  const double probed_default =
      kDefaultProbedRabiFraction * atom.decay_total(4);

  auto value_at = [&](double delta) {
    DriveConfig d = drives;
    (opt.channel == Channel::probe ? d.delta_p : d.delta_s) = delta;
    if (opt.method == SweepOptions::Method::analytic) {
      return opt.channel == Channel::probe
                 ? probe_chi_analytic(atom, d, pops, opt.variant,
                                      opt.zero_source_coherence).chi
                 : signal_chi_analytic(atom, d, pops).chi;
    }
    (opt.channel == Channel::probe ? d.rabi_p : d.rabi_s) =
        opt.probed_rabi.value_or(probed_default);
    return chi_numeric(atom, d, opt.channel).chi;
  };

  const int n = static_cast<int>(grid.size());
  const int workers = std::max(1, std::min(opt.threads, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) out.values[i] = value_at(grid[i]);
  } else {
    std::vector<std::exception_ptr> errs(workers);
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (int i = w; i < n; i += workers) out.values[i] = value_at(grid[i]);
        } catch (...) {
          errs[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errs)
      if (e) std::rethrow_exception(e);
  }
  return out;
}

namespace {

std::vector<int> local_maxima(const Spectrum& s) {
  std::vector<int> peaks;
  const auto& v = s.values;
  for (int i = 1; i + 1 < static_cast<int>(v.size()); ++i)
    if (v[i].imag() > v[i - 1].imag() && v[i].imag() >= v[i + 1].imag())
      peaks.push_back(i);
  return peaks;
}

double interp_re(const Spectrum& s, double x) {
  const auto& g = s.grid;
  auto it = std::upper_bound(g.begin(), g.end(), x);
  if (it == g.begin() || it == g.end())
    throw GridTooCoarse("interpolation point outside the grid");
  const int i1 = static_cast<int>(it - g.begin());
  const int i0 = i1 - 1;
  const double t = (x - g[i0]) / (g[i1] - g[i0]);
  return (1.0 - t) * s.values[i0].real() + t * s.values[i1].real();
}

} // namespace

double group_velocity(const Spectrum& spectrum, double center, double carrier) {
  const auto& g = spectrum.grid;
  if (g.empty() || center < g.front() || center > g.back())
    throw GridTooCoarse("center outside the spectrum grid");

  // local window width from the Im peaks flanking the center
  const std::vector<int> peaks = local_maxima(spectrum);
  double left = g.front(), right = g.back();
  for (int p : peaks) {
    if (g[p] < center) left = std::max(left, g[p]);
    if (g[p] > center) { right = g[p]; break; }
  }
  const double width = right - left;

  int inside = 0;
  for (double x : g)
    if (x >= center - width / 2 && x <= center + width / 2) ++inside;
  if (inside < 5)
    throw GridTooCoarse("fewer than 5 grid points inside the window");

  const double h = width / 100.0;
  const double slope = (interp_re(spectrum, center + h)
                        - interp_re(spectrum, center - h)) / (2.0 * h);
  const double ng = 1.0 + interp_re(spectrum, center) / 2.0
                    + (carrier / 2.0) * slope * 1e-6; // per rad/s
  return units::c_light / ng;
}

} // namespace ddeit
