#include "ddeit/steadystate.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "ddeit/errors.hpp"

namespace ddeit {

namespace {

Matrix4 unvec(const Vector16& v) { return Eigen::Map<const Matrix4>(v.data()); }

Matrix4 bordered_solve(const Matrix16& L) {
  Matrix16 A = L;
  A.row(15).setZero();
  A(15, 0) = A(15, 5) = A(15, 10) = A(15, 15) = 1.0;
  Vector16 b = Vector16::Zero();
  b(15) = 1.0;
  Eigen::FullPivLU<Matrix16> lu(A);
  if (!lu.isInvertible())
    throw SolveFailure("bordered steady-state system is singular");
  return unvec(lu.solve(b));
}

Matrix4 svd_null_solve(const Matrix16& L) {
  Eigen::JacobiSVD<Matrix16> svd(L, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (s(14) < 1e-8 * s(0))
    throw DegenerateSteadyState("null space of the Liouvillian has dimension > 1");
  Vector16 v = svd.matrixV().col(15);
  Matrix4 rho = unvec(v);
  const cplx tr = rho.trace();
  if (std::abs(tr) < 1e-12)
    throw SolveFailure("null vector has vanishing trace");
  return rho / tr;
}

} // namespace

DensityMatrix steady_state(const Liouvillian& L) {
  Matrix4 rho_svd = svd_null_solve(L.mat); // also runs the degeneracy check
  Matrix4 rho = bordered_solve(L.mat);
  rho = 0.5 * (rho + rho.adjoint().eval());
  rho_svd = 0.5 * (rho_svd + rho_svd.adjoint().eval());
  if ((rho - rho_svd).cwiseAbs().maxCoeff() > 1e-9)
    throw SolveFailure("bordered and SVD steady-state routes disagree");
  DensityMatrix dm;
  dm.rho = rho;
  dm.provenance = "steady_state";
  return dm;
}

DensityDiagnostics validate_density(const DensityMatrix& dm) {
  DensityDiagnostics d;
  d.trace_error = std::abs(dm.rho.trace() - cplx(1.0, 0.0));
  d.hermiticity_error = (dm.rho - dm.rho.adjoint().eval()).cwiseAbs().maxCoeff();
  const Matrix4 herm = 0.5 * (dm.rho + dm.rho.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<Matrix4> es(herm);
  d.min_eigenvalue = es.eigenvalues().minCoeff();
  d.trace_ok = d.trace_error <= 1e-10;
  d.hermitian_ok = d.hermiticity_error <= 1e-10;
  d.positive_ok = d.min_eigenvalue >= -1e-8;
  return d;
}

} // namespace ddeit
