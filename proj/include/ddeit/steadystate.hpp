#pragma once

#include <string>

#include "ddeit/atom.hpp"

namespace ddeit {

struct DensityMatrix {
  Matrix4 rho = Matrix4::Zero();
  std::string provenance;

  double population(int level) const { return rho(level - 1, level - 1).real(); }
};

struct DensityDiagnostics {
  double trace_error = 0.0;       // |trace - 1|
  double hermiticity_error = 0.0; // max |rho - rho^dagger|
  double min_eigenvalue = 0.0;
  bool trace_ok = false;
  bool hermitian_ok = false;
  bool positive_ok = false;
  bool all_ok() const { return trace_ok && hermitian_ok && positive_ok; }
};

// Null vector of L with unit trace. Bordered solve cross-checked against an
// SVD null-space route on every call.
DensityMatrix steady_state(const Liouvillian& L);

DensityDiagnostics validate_density(const DensityMatrix& dm);

} // namespace ddeit
