#include "ddeit/windows.hpp"

#include <algorithm>
#include <cmath>

#include "ddeit/errors.hpp"

namespace ddeit {

namespace {

std::vector<int> significant_maxima(const Spectrum& s) {
  const int n = static_cast<int>(s.grid.size());
  double global_max = 0.0;
  for (const auto& v : s.values) global_max = std::max(global_max, v.imag());
  std::vector<int> peaks;
  for (int i = 1; i + 1 < n; ++i) {
    const double a = s.values[i - 1].imag();
    const double b = s.values[i].imag();
    const double c = s.values[i + 1].imag();
    if (b > a && b >= c && b > 0.05 * global_max) peaks.push_back(i);
  }
  return peaks;
}

// walk out from the dip until Im chi reaches `level`, linear interpolation at
// the crossing; clamps at the flanking peak when the level is never reached
double crossing_left(const Spectrum& s, int dip, int peak, double level) {
  int i = dip;
  while (i > peak && s.values[i].imag() < level) --i;
  if (i == dip || s.values[i].imag() < level) return s.grid[i];
  const double y0 = s.values[i].imag();
  const double y1 = s.values[i + 1].imag();
  if (y0 == y1) return s.grid[i];
  const double t = (level - y0) / (y1 - y0);
  return s.grid[i] + t * (s.grid[i + 1] - s.grid[i]);
}

double crossing_right(const Spectrum& s, int dip, int peak, double level) {
  int i = dip;
  while (i < peak && s.values[i].imag() < level) ++i;
  if (i == dip || s.values[i].imag() < level) return s.grid[i];
  const double y0 = s.values[i - 1].imag();
  const double y1 = s.values[i].imag();
  if (y0 == y1) return s.grid[i];
  const double t = (level - y1) / (y0 - y1);
  return s.grid[i] - t * (s.grid[i] - s.grid[i - 1]);
}

// window center: zero crossing of Re chi between the flanking peaks, the one
// nearest the dip; falls back to the dip position if Re never crosses zero
double window_center(const Spectrum& s, int left, int right, int dip) {
  double best = s.grid[dip];
  double best_dist = std::numeric_limits<double>::infinity();
  bool found = false;
  for (int i = left; i < right; ++i) {
    const double r0 = s.values[i].real();
    const double r1 = s.values[i + 1].real();
    if (r0 == 0.0) {
      const double d = std::abs(s.grid[i] - s.grid[dip]);
      if (d < best_dist) { best_dist = d; best = s.grid[i]; found = true; }
      continue;
    }
    if ((r0 < 0.0) != (r1 < 0.0)) {
      const double t = r0 / (r0 - r1);
      const double x = s.grid[i] + t * (s.grid[i + 1] - s.grid[i]);
      const double d = std::abs(x - s.grid[dip]);
      if (d < best_dist) { best_dist = d; best = x; found = true; }
    }
  }
  (void)found;
  return best;
}

std::vector<WindowReport> detect_windows(const Spectrum& s, double carrier,
                                         bool attach_velocity) {
  if (s.grid.size() < 101)
    throw ConfigError("window analysis needs at least 101 grid points");

  const std::vector<int> peaks = significant_maxima(s);
  std::vector<WindowReport> out;

  for (std::size_t p = 0; p + 1 < peaks.size(); ++p) {
    const int a = peaks[p];
    const int b = peaks[p + 1];
    int dip = a;
    for (int i = a + 1; i < b; ++i)
      if (s.values[i].imag() < s.values[dip].imag()) dip = i;
    if (dip == a) continue;

    WindowReport w;
    w.peaks = {s.grid[a], s.grid[b]};
    w.min_im = s.values[dip].imag();
    w.min_im_position = s.grid[dip];
    w.center = window_center(s, a, b, dip);

    const double peak_mean = 0.5 * (s.values[a].imag() + s.values[b].imag());
    const double half_level = 0.5 * (peak_mean + w.min_im);
    w.fwhm = crossing_right(s, dip, b, half_level) -
             crossing_left(s, dip, a, half_level);
    const double half_peak = 0.5 * peak_mean;
    w.width_half_peak = crossing_right(s, dip, b, half_peak) -
                        crossing_left(s, dip, a, half_peak);

    if (attach_velocity) w.group_velocity = group_velocity(s, w.center, carrier);
    out.push_back(w);
  }

  if (out.empty()) throw NoWindowFound("no transparency window in sweep range");
  return out;
}

} // namespace

std::vector<WindowReport> find_windows(const Spectrum& s, double carrier) {
  return detect_windows(s, carrier, true);
}

std::vector<WindowReport> refined_windows(const Spectrum& coarse,
                                          const SegmentSweep& resweep,
                                          double carrier) {
  // group velocities are re-measured on the fine segments, so a window too
  // narrow for the coarse grid is not an error here
  const std::vector<WindowReport> rough = detect_windows(coarse, carrier, false);
  const double step = (coarse.grid.back() - coarse.grid.front()) /
                      double(coarse.grid.size() - 1);

  std::vector<WindowReport> out;
  for (const auto& w : rough) {
    const double pad = 0.05 * (w.peaks[1] - w.peaks[0]);
    const double lo = w.peaks[0] - pad;
    const double hi = w.peaks[1] + pad;
    int points = static_cast<int>(std::ceil((hi - lo) / (0.1 * step))) + 1;
    points = std::max(points, 101);
    const Spectrum fine = resweep(lo, hi, points);

    std::vector<WindowReport> refined;
    try {
      refined = find_windows(fine, carrier);
    } catch (const NoWindowFound&) {
      // did not survive closer inspection; keep the coarse report only if a
      // group velocity is measurable there, else it was a grid-scale ripple
      try {
        WindowReport fallback = w;
        fallback.group_velocity = group_velocity(coarse, w.center, carrier);
        out.push_back(fallback);
      } catch (const GridTooCoarse&) {
      }
      continue;
    }
    const WindowReport* best = &refined.front();
    for (const auto& r : refined)
      if (std::abs(r.min_im_position - w.min_im_position) <
          std::abs(best->min_im_position - w.min_im_position))
        best = &r;
    out.push_back(*best);
  }
  if (out.empty()) throw NoWindowFound("no transparency window survived refinement");
  return out;
}

} // namespace ddeit
