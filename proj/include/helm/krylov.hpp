/// \file krylov.hpp
/// \brief Right-preconditioned iterative solvers (full GMRES, the simplified
///        Krylov subspace iteration, Chebyshev acceleration), the
///        preconditioning-order estimator psi, and the theoretical
///        contraction-factor formulas.
///
/// All solvers run on the right-preconditioned system A A2^{-1} Y = F with
/// zero initial guess (unless an explicit guess is supplied), so reported
/// residual histories are true relative residuals ||F - A U^(n)|| / ||F||.
#pragma once

#include <functional>
#include <optional>
#include <utility>

#include "helm/core.hpp"
#include "helm/precond.hpp"

namespace helm {

enum class Method { GMRES, SKS, Chebyshev };

struct IterationConfig {
  double tol = 1e-10;  ///< relative residual target
  int max_iter = 100;
  Method method = Method::GMRES;
  std::optional<int> gmres_restart;  ///< default: no restart (full GMRES)
  /// Chebyshev preconditioned-eigenvalue interval [ ratio_min, ratio_max ]
  /// expressed as (m_hat, M_hat) with ratio = 1 + m_hat .. 1 + M_hat.
  std::optional<std::pair<double, double>> chebyshev_interval;
};

/// Solves A6 U = F by full (optionally restarted) GMRES on the
/// right-preconditioned system; modified Gram-Schmidt Arnoldi with Givens
/// rotations.  `guess` (when non-null) supplies an initial iterate.  A
/// reusable Preconditioner may be passed to share transform plans.
SolveReport solve_gmres(const Problem& p, const Field& F, Field& U,
                        const IterationConfig& cfg = {},
                        const Field* guess = nullptr,
                        const Preconditioner* pre = nullptr);

/// Simplified Krylov subspace iteration:
///   Y = r0 = F;  repeat { U = A2^{-1} Y;  w = A6 U;  r = r0 - w;
///                         eps = ||r||/||r0||;  Y += r; }
/// until eps <= tol.  No inner products beyond the norm.  Divergence
/// (eps > 1e6 or non-finite) sets SolveReport::diverged ("div").
SolveReport solve_sks(const Problem& p, const Field& F, Field& U,
                      const IterationConfig& cfg = {},
                      const Preconditioner* pre = nullptr);

/// Chebyshev semi-iteration on the right-preconditioned system over the real
/// eigenvalue interval [1 + m_hat, 1 + M_hat] (required in cfg; 1 + m_hat > 0).
/// For complex k the interval comes from real parts and the report is flagged
/// approximate.
SolveReport solve_chebyshev(const Problem& p, const Field& F, Field& U,
                            const IterationConfig& cfg,
                            const Preconditioner* pre = nullptr);

/// Generic in-place operator application (out := Op in).
using ApplyFn = std::function<void(const Field&, Field&)>;

/// Chebyshev kernel over arbitrary operator/preconditioner applications on
/// the preconditioned eigenvalue interval [lo, hi] (0 < lo <= hi); lo == hi
/// degenerates to the Richardson step x += P^{-1} r / lo.
SolveReport chebyshev_iterate(const ApplyFn& apply_op, const ApplyFn& apply_pre,
                              const Field& F, Field& U, double lo, double hi,
                              double tol, int max_iter);

/// Dispatch on cfg.method.
SolveReport solve(const Problem& p, const Field& F, Field& U,
                  const IterationConfig& cfg,
                  const Preconditioner* pre = nullptr);

/// Preconditioning-order estimate from two grids with steps h and gamma*h:
/// runs exactly two SKS iterations on each, forms the first-to-second
/// residual ratios eps_h and eps_gamma_h, and returns
/// psi = (ln eps_gamma_h - ln eps_h) / ln gamma.
struct PsiEstimate {
  double eps_h = 0.0;
  double eps_gamma_h = 0.0;
  double gamma = 2.0;
  double psi = 0.0;
  bool valid = false;  ///< false when a residual vanished or went non-finite
};

PsiEstimate estimate_psi(const Problem& coarse, const Problem& fine,
                         const std::function<Field(const Problem&)>& rhs,
                         double gamma = 2.0);

/// Theoretical per-iteration contraction factors.
enum class BoundKind {
  OrderK,     ///< M * h^k            (kth-order preconditioned system)
  General,    ///< M_tilde            (uniform spectral deviation bound)
  Chebyshev,  ///< (M_hat - m_hat) / (4 (1 + m_hat))
  OneD,       ///< k^4 h^2 / (12 delta0)   (second-order 1D bound)
  ThreeD,     ///< 3/4                 (3D Dirichlet small-k^2h^2 bound)
};

struct BoundParams {
  double M = 0.0;       ///< OrderK / General constant
  double h = 0.0;       ///< grid step (OrderK, OneD)
  int order = 0;        ///< k in h^k (OrderK)
  double k = 0.0;       ///< wavenumber (OneD)
  double delta0 = 0.0;  ///< spectral gap (OneD)
  double m_hat = 0.0, M_hat = 0.0;  ///< interval (Chebyshev)
};

double theoretical_bound(BoundKind kind, const BoundParams& prm);

}  // namespace helm
