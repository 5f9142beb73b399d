#pragma once

#include <array>
#include <functional>
#include <vector>

#include "ddeit/response.hpp"

namespace ddeit {

struct WindowReport {
  double center = 0.0;          // angular MHz; Re chi zero crossing between the peaks
  double fwhm = 0.0;            // half level = (mean flanking peaks + dip)/2
  double width_half_peak = 0.0; // width at half the mean flanking peak height
  double min_im = 0.0;          // Im chi at the dip (negative = gain)
  double min_im_position = 0.0; // angular MHz
  double group_velocity = 0.0;  // m/s at center
  std::array<double, 2> peaks{}; // flanking absorption maxima, angular MHz
};

// Absorption local maxima, transparency dips between adjacent maxima.
// Requires >= 101 points; throws NoWindowFound when no dip exists.
std::vector<WindowReport> find_windows(const Spectrum& spectrum, double carrier);

using SegmentSweep = std::function<Spectrum(double lo, double hi, int points)>;

// Re-measures each coarse window on a locally resampled segment at 10x the
// coarse density (at least 101 points), padded slightly past the peaks.
std::vector<WindowReport> refined_windows(const Spectrum& coarse,
                                          const SegmentSweep& resweep,
                                          double carrier);

} // namespace ddeit
