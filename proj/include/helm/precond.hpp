/// \file precond.hpp
/// \brief Fast direct solver for the second-order operator A2: diagonalize
///        the lateral directions by trigonometric transforms (DST-I for
///        Dirichlet, a cosine-type transform for Neumann), solve one complex
///        tridiagonal pencil per lateral mode pair along z, transform back.
///        O(N^2 Nz log N) per application.
#pragma once

#include <memory>
#include <vector>

#include "helm/core.hpp"

namespace helm {

/// Solves one complex tridiagonal pencil: lower/diag/upper are the three
/// bands (lower[0] and upper[n-1] unused).  Elimination without pivoting,
/// guarded by |pivot| < 1e-12 * scale with a dense partially-pivoted fallback
/// for the single pencil; a genuinely singular pencil raises ResonanceError
/// tagged with `tag`.
std::vector<cplx> solve_tridiag(const std::vector<cplx>& lower,
                                const std::vector<cplx>& diag,
                                const std::vector<cplx>& upper,
                                const std::vector<cplx>& rhs,
                                const std::string& tag = {});

/// Lateral eigenvalues of the one-axis block A0 = Lambda^beta - 2I:
/// Dirichlet (beta=0): 2 cos(j pi/(N+1)) - 2, j = 1..N;
/// Neumann  (beta=1): 2 cos(j pi/(N-1)) - 2, j = 0..N-1.
std::vector<double> lateral_eigenvalues(BCKind kind, int n);

/// Fast A2 solver bound to one problem descriptor.  Plans are created once;
/// apply() is safe to call repeatedly (single-owner, not thread-safe across
/// concurrent apply() calls on the same instance because of the internal
/// workspace).
class Preconditioner {
 public:
  explicit Preconditioner(const Problem& p);
  ~Preconditioner();

  Preconditioner(const Preconditioner&) = delete;
  Preconditioner& operator=(const Preconditioner&) = delete;

  /// U := A2^{-1} Y.
  void apply(const Field& Y, Field& U) const;
  Field apply(const Field& Y) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One-shot convenience wrapper: builds the solver and applies it.
Field precondition_solve(const Problem& p, const Field& Y);

}  // namespace helm
