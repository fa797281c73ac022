/// \file operator.hpp
/// \brief Matrix-free application of the sixth-order compact operator A6 and
///        the second-order operator A2, with right-hand-side assembly.
///
/// Both operators are assembled in h^2-scaled (dimensionless stencil) form.
/// Boundary rows for Neumann and Sommerfeld faces are ghost-eliminated: the
/// ghost-plane contribution -- which the per-plane decomposition shows to be
/// exactly the tangential operator T applied to the ghost plane -- is replaced
/// by its interior-plane equivalent (mirror for Neumann, the C1/C0 correction
/// stencils for Sommerfeld); source terms go to RHS assembly, never into the
/// operator.  Every tangential 2D stencil is applied "laterally closed":
/// lateral Dirichlet neighbors are dropped (their data is folded into the
/// RHS), lateral Neumann neighbors reflect pointwise.
#pragma once

#include "helm/core.hpp"

namespace helm {

/// y := A6 x (sixth-order operator, boundary-eliminated).
void apply_a6(const Problem& p, const Field& x, Field& y);
Field apply_a6(const Problem& p, const Field& x);

/// y := A2 x (second-order 7-point operator with alpha_z = 2ikh Sommerfeld
/// diagonal corners and doubled mirror off-diagonals on Neumann faces).
void apply_a2(const Problem& p, const Field& x, Field& y);
Field apply_a2(const Problem& p, const Field& x);

/// Assembles the sixth-order right-hand side: volume terms, Neumann and
/// Sommerfeld face sources from the ghost eliminations, and nonzero Dirichlet
/// data folded in with the sixth-order stencil weights.
Field assemble_rhs(const Problem& p);

/// Assembles the second-order right-hand side h^2 f with the matching
/// boundary treatment (2h beta Neumann sources, homogeneous Sommerfeld,
/// 7-point Dirichlet folding).
Field assemble_rhs2(const Problem& p);

/// Residual r = F - A6 U and its relative l2 norm ||r|| / ||F||.
/// When ||F|| == 0 the returned norm is absolute and *absolute_flag is set.
struct Residual {
  Field r;
  double rel_norm = 0.0;
  bool absolute = false;  ///< set when ||F|| == 0
};

Residual residual(const Problem& p, const Field& U, const Field& F);

}  // namespace helm
