/// \file problems.hpp
/// \brief Manufactured test problems with exact separable solutions,
///        closed-form right-hand sides, and every derivative callback the
///        scheme and boundary eliminations require.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "helm/core.hpp"

namespace helm {

/// A manufactured problem: exact solution u (with derivatives to order 6 per
/// axis), the source f = lap u + k^2 u, and a boundary-kind layout.
struct ManufacturedProblem {
  std::string name;
  int dim = 3;
  cplx k{};
  std::array<BCKind, 6> kinds{};  ///< per-face boundary kinds
  /// u-derivative evaluator: d^(ax+ay+az) u / dx^ax dy^ay dz^az.
  std::function<cplx(int, int, int, double, double, double)> u_deriv;

  cplx u(double x, double y, double z) const { return u_deriv(0, 0, 0, x, y, z); }

  /// Builds the checked descriptor at step h (boundary data sampled from the
  /// exact solution; all source callbacks closed-form).
  Problem make(double h) const;
};

/// Problem families (lateral faces Dirichlet throughout):
///   "dirichlet1d"          u = z(1-z) cos(k pi z), 1D, Dirichlet ends
///   "dirichlet3d"          u = x^3(1-x)^3 * y(1-y)cos(k pi y) * sin(k pi z)
///   "dirichlet_neumann"    same laterals, phi3 = cos(k pi z): Neumann bottom
///                          (beta = 0), nonzero Dirichlet data at the top
///   "dirichlet_sommerfeld" same laterals, phi3 = e^{ikz} + e^{-ik(z-1)} - 2:
///                          homogeneous radiation conditions on both z faces
ManufacturedProblem make_problem(const std::string& name, cplx k);

/// The catalog: the four families at k in {10, 20, 30, 40, 50}, plus the
/// complex wavenumber k = 35.7 + 0.43i for the radiation-condition family.
std::vector<ManufacturedProblem> problem_catalog();

/// Max-norm error over the unknowns, max |U - u_exact|.
double exact_error(const Problem& p, const Field& U,
                   const ManufacturedProblem& mp);

/// Samples the exact solution on the unknowns of p.
Field sample_exact(const Problem& p, const ManufacturedProblem& mp);

}  // namespace helm
