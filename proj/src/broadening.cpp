#include "ddeit/broadening.hpp"

#include <cmath>
#include <thread>

#include "ddeit/errors.hpp"

namespace ddeit {

namespace {

// scaled orthonormal Hermite recurrence at x: returns f_n, f_{n-1} under a
// common scale and the log of that scale, so polynomial growth ~exp(x^2/2)
// never overflows
struct HermiteEval {
  double f_n;
  double f_nm1;
  double log_scale;
};

// Bohr-Sommerfeld seed for the k-th positive root counted from the
// outermost (k >= 1): solve phi - sin(2 phi)/2 = (4k-1) pi / (2 nu) by
// bisection, root ~ sqrt(nu) cos(phi). Accurate to a small fraction of the
// local root spacing once past the Airy edge zone, and independent per
// root, so one bad Newton solve cannot poison the rest
double wkb_seed(int n, int k) {
  const double nu = 2.0 * n + 1.0;
  const double c = (4.0 * k - 1.0) * M_PI / (2.0 * nu);
  double lo = 0.0, hi = 0.5 * M_PI;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double g = mid - 0.5 * std::sin(2.0 * mid);
    (g < c ? lo : hi) = mid;
  }
  return std::sqrt(nu) * std::cos(0.5 * (lo + hi));
}

HermiteEval hermite_scaled(int n, double x) {
  double fm = 0.0;
  double f = 0.75112554446494248; // pi^(-1/4)
  double ls = -0.5 * x * x;
  for (int k = 0; k < n; ++k) {
    const double fn = x * std::sqrt(2.0 / (k + 1)) * f
                      - std::sqrt(double(k) / (k + 1)) * fm;
    fm = f;
    f = fn;
    const double a = std::abs(f);
    if (a > 1e250) {
      f *= 1e-250;
      fm *= 1e-250;
      ls += std::log(1e250);
    } else if (a > 0.0 && a < 1e-250) {
      f *= 1e250;
      fm *= 1e250;
      ls -= std::log(1e250);
    }
  }
  return {f, fm, ls};
}

} // namespace

GaussHermite gauss_hermite(int n) {
  if (n < 1) throw ConfigError("Gauss-Hermite node count must be positive");

  GaussHermite gh;
  gh.nodes.assign(n, 0.0);
  gh.weights.assign(n, 0.0);

  const int m = (n + 1) / 2;
  const double log_sqrt_pi = 0.5 * std::log(M_PI);
  double z = 0.0, z_prev = 0.0, z_prev2 = 0.0;

  for (int i = 0; i < m; ++i) {
    // outermost four roots sit in the Airy zone where the phase seed is
    // weakest; seed them from Airy-function zeros at large n and from the
    // fitted small-n rules otherwise
    static const double airy_zero[4] = {2.33810741045977, 4.08794944413097,
                                        5.52055982809555, 6.78670809007176};
    if (i == 0 || (i < 4 && n >= 256)) {
      const double nu = 2.0 * n + 1.0;
      z = std::sqrt(nu)
          - std::pow(2.0, -1.0 / 3.0) * airy_zero[i] * std::pow(nu, -1.0 / 6.0);
    } else if (i == 1) {
      z -= 1.14 * std::pow(double(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * z_prev2;
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * z_prev2;
    } else {
      z = wkb_seed(n, i + 1);
    }

    HermiteEval h{};
    for (int iter = 0; iter < 200; ++iter) {
      h = hermite_scaled(n, z);
      const double denom = std::sqrt(2.0 * n) * h.f_nm1 - z * h.f_n;
      if (denom == 0.0) throw SolveFailure("Gauss-Hermite Newton step degenerate");
      const double dz = h.f_n / denom;
      z -= dz;
      if (std::abs(dz) <= 1e-15 * std::max(1.0, std::abs(z))) {
        h = hermite_scaled(n, z);
        break;
      }
    }

    // probability weight: 1/(sqrt(pi) n h_{n-1}(z)^2) with the e^{-z^2}
    // Gaussian folded in, evaluated in logs
    const double log_w = -z * z - log_sqrt_pi - std::log(double(n))
                         - 2.0 * (h.log_scale + std::log(std::abs(h.f_nm1)));
    const double w = std::exp(log_w);

    gh.nodes[i] = -z; // fill ascending: most negative first
    gh.nodes[n - 1 - i] = z;
    gh.weights[i] = w;
    gh.weights[n - 1 - i] = w;

    z_prev2 = z_prev; // root i-1, feeds the extrapolated guess two steps on
    z_prev = z;
  }

  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(gh.weights[i]) || gh.weights[i] < 0.0)
      throw SolveFailure("Gauss-Hermite weight not finite");
    if (i > 0 && !(gh.nodes[i] > gh.nodes[i - 1]))
      throw SolveFailure("Gauss-Hermite nodes out of order");
  }
  return gh;
}

AtomSpec apply_laser_linewidths(const AtomSpec& atom, const DriveConfig& drives) {
  if (drives.lw_p < 0 || drives.lw_c < 0 || drives.lw_s < 0)
    throw ConfigError("laser linewidths must be non-negative");
  AtomSpec out = atom;
  out.gamma_phi4 += drives.lw_p;
  out.gamma_phi2 += drives.lw_c;
  out.gamma_phi3 += drives.lw_s;
  return out;
}

namespace {

std::vector<cplx> averaged_curve(const AtomSpec& atom, const DriveConfig& drives,
                                 Channel channel, const std::vector<double>& grid,
                                 const DensityMatrix& pops, double kv, int nodes,
                                 int threads) {
  const GaussHermite gh = gauss_hermite(nodes);
  const int n = static_cast<int>(grid.size());
  std::vector<cplx> out(n);

  auto value_at = [&](int idx) {
    // Kahan summation in ascending node order
    cplx sum(0, 0), comp(0, 0);
    for (int k = 0; k < nodes; ++k) {
      if (gh.weights[k] == 0.0) continue;
      const double shift = -kv * gh.nodes[k];
      DriveConfig d = drives;
      (channel == Channel::probe ? d.delta_p : d.delta_s) = grid[idx];
      d.delta_p += shift;
      d.delta_c += shift;
      d.delta_s += shift;
      const cplx chi = channel == Channel::probe
                           ? probe_chi_analytic(atom, d, pops).chi
                           : signal_chi_analytic(atom, d, pops).chi;
      const cplx y = gh.weights[k] * chi - comp;
      const cplx t = sum + y;
      comp = (t - sum) - y;
      sum = t;
    }
    return sum;
  };

  const int workers = std::max(1, std::min(threads, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) out[i] = value_at(i);
  } else {
    std::vector<std::exception_ptr> errs(workers);
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (int i = w; i < n; i += workers) out[i] = value_at(i);
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

} // namespace

Spectrum doppler_average(const AtomSpec& atom, const DriveConfig& drives,
                         Channel channel, const std::vector<double>& grid,
                         const DopplerSettings& settings,
                         const std::optional<Eigen::Vector4d>& populations,
                         int threads) {
  if (settings.temperature < 0) throw ConfigError("temperature must be >= 0");
  if (settings.node_count < 8 || settings.node_count % 2 != 0)
    throw ConfigError("doppler node count must be even and >= 8");
  if (!std::isfinite(settings.v_rms())) throw ConfigError("v_rms is not finite");

  DensityMatrix pops;
  if (populations) {
    pops.rho = populations->cast<cplx>().asDiagonal();
    pops.provenance = "override";
  } else {
    pops = zeroth_order_state(atom, drives, channel);
  }

  const double kv = settings.wavenumber * settings.v_rms() / 1e6; // angular MHz

  const std::vector<cplx> base = averaged_curve(atom, drives, channel, grid, pops,
                                                kv, settings.node_count, threads);
  const std::vector<cplx> fine = averaged_curve(atom, drives, channel, grid, pops,
                                                kv, 2 * settings.node_count, threads);
  for (std::size_t i = 0; i < base.size(); ++i) {
    const double scale = std::abs(fine[i]);
    if (scale > 0.0 && std::abs(fine[i] - base[i]) > 1e-3 * scale)
      throw QuadratureNotConverged("node doubling changes a grid point by > 1e-3 relative");
  }

  Spectrum s;
  s.grid = grid;
  s.values = base;
  s.channel = channel;
  s.broadening = "doppler";
  return s;
}

} // namespace ddeit
