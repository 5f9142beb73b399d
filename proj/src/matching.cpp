#include "ddeit/matching.hpp"

#include <algorithm>
#include <cmath>

#include "ddeit/errors.hpp"

namespace ddeit {

namespace {

struct ChannelWindows {
  std::vector<WindowReport> windows;
  int first = -1;  // index of window centred nearest delta_c
  int second = -1; // nearest delta_s
};

ChannelWindows measure_channel(const RunConfig& cfg, const DriveConfig& drives,
                               Channel channel) {
  SweepOptions opt;
  opt.channel = channel;
  opt.populations = cfg.populations_for(channel);

  const Spectrum coarse = sweep(cfg.atom, drives, cfg.grid(), opt);
  const SegmentSweep resweep = [&](double lo, double hi, int points) {
    return sweep(cfg.atom, drives, linspace(lo, hi, points), opt);
  };

  ChannelWindows out;
  out.windows = refined_windows(coarse, resweep, cfg.atom.carrier);
  if (out.windows.size() < 2)
    throw NoWindowFound("velocity matching needs two transparency windows");

  auto nearest = [&](double target) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(out.windows.size()); ++i)
      if (std::abs(out.windows[i].center - target) <
          std::abs(out.windows[best].center - target))
        best = i;
    return best;
  };
  out.first = nearest(drives.delta_c);
  out.second = nearest(drives.delta_s);
  if (out.first == out.second)
    throw NoWindowFound("transparency windows do not separate the two resonances");
  return out;
}

} // namespace

MatchResult match_velocities(const RunConfig& cfg, const MatchOptions& opt) {
  const double gamma4 = cfg.atom.decay_total(4);
  if (cfg.drives.rabi_s <= 0.0)
    throw ConfigError("velocity matching needs a signal field");

  const double hi = opt.interval_hi.value_or(2.0 * cfg.drives.rabi_s);
  const double lo = opt.interval_lo.value_or(std::min(1e-3 * gamma4, 0.01 * hi));
  if (!(lo > 0.0) || !(hi > lo))
    throw ConfigError("matching interval must satisfy 0 < lo < hi");

  // probe response is independent of the probe Rabi frequency: measure once
  const ChannelWindows probe = measure_channel(cfg, cfg.drives, Channel::probe);
  const double vp1 = probe.windows[probe.first].group_velocity;
  const double vp2 = probe.windows[probe.second].group_velocity;

  int evaluations = 0;
  auto signal_at = [&](double rabi_p) -> std::optional<ChannelWindows> {
    DriveConfig d = cfg.drives;
    d.rabi_p = rabi_p;
    ++evaluations;
    try {
      return measure_channel(cfg, d, Channel::signal);
    } catch (const NoWindowFound&) {
      return std::nullopt; // second window not yet resolved at this drive
    }
  };
  auto objective = [&](const std::optional<ChannelWindows>& s) {
    if (!s) return 1e300;
    return std::abs(s->windows[s->second].group_velocity - vp2);
  };

  auto finish = [&](double rabi_p, const ChannelWindows& s, bool from_guess) {
    MatchResult r;
    r.rabi_p = rabi_p;
    r.from_guess = from_guess;
    r.evaluations = evaluations;
    r.probe_windows = probe.windows;
    r.signal_windows = s.windows;
    r.mismatch_first =
        std::abs(s.windows[s.first].group_velocity - vp1) / std::abs(vp1);
    r.mismatch_second =
        std::abs(s.windows[s.second].group_velocity - vp2) / std::abs(vp2);
    return r;
  };

  std::optional<double> guess = opt.guess;
  if (!guess && cfg.drives.rabi_p > 0.0) guess = cfg.drives.rabi_p;
  if (guess && *guess > 0.0 && *guess <= hi) {
    const std::optional<ChannelWindows> s = signal_at(*guess);
    if (s) {
      const double rel = objective(s) / std::abs(vp2);
      if (rel < opt.guess_tolerance) return finish(*guess, *s, true);
    }
  }

  // coarse scan to bracket the minimum
  constexpr int kScan = 33;
  std::vector<double> xs(kScan), fs(kScan);
  for (int i = 0; i < kScan; ++i) {
    xs[i] = lo + (hi - lo) * i / double(kScan - 1);
    fs[i] = objective(signal_at(xs[i]));
  }
  int k = 0;
  for (int i = 1; i < kScan; ++i)
    if (fs[i] < fs[k]) k = i;
  if (k == 0 || k == kScan - 1)
    throw NoBracket("group-velocity mismatch is monotone on the search interval");

  // golden section on the bracketing triple
  const double inv_phi = 0.6180339887498949;
  double a = xs[k - 1], b = xs[k + 1];
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = objective(signal_at(x1));
  double f2 = objective(signal_at(x2));
  const double tol = opt.interval_tol_fraction * gamma4;
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = objective(signal_at(x1));
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = objective(signal_at(x2));
    }
  }

  const double best = 0.5 * (a + b);
  const std::optional<ChannelWindows> s = signal_at(best);
  if (!s) throw NoWindowFound("no paired signal window at the matched drive");
  return finish(best, *s, false);
}

} // namespace ddeit
