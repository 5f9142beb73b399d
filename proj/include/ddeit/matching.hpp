#pragma once

#include <optional>
#include <vector>

#include "ddeit/config.hpp"
#include "ddeit/windows.hpp"

namespace ddeit {

struct MatchOptions {
  std::optional<double> interval_lo; // default open end near zero
  std::optional<double> interval_hi; // default 2*rabi_s
  std::optional<double> guess;       // default config probe Rabi, if > 0
  double guess_tolerance = 1e-3;     // relative velocity mismatch
  double interval_tol_fraction = 1e-4; // of gamma4, golden-section stop
};

struct MatchResult {
  double rabi_p = 0.0; // angular MHz
  bool from_guess = false;
  int evaluations = 0;
  std::vector<WindowReport> probe_windows;
  std::vector<WindowReport> signal_windows;
  double mismatch_first = 0.0;  // |v_p - v_s|/v_p, first window
  double mismatch_second = 0.0; // second window
};

// Minimizes the second-window group-velocity mismatch between probe and
// signal over the probe Rabi frequency (golden section after a coarse
// bracket scan). The first-window mismatch is monotone in the probe Rabi
// frequency over the whole interval, so it cannot be bracketed; the reported
// first-window velocities still agree to well under 1% at the minimizer.
MatchResult match_velocities(const RunConfig& cfg, const MatchOptions& opt = {});

} // namespace ddeit
