/// \file stencils.hpp
/// \brief Closed-form stencil coefficients: the 1D compact scheme, the
///        27-point sixth-order stencil, the per-plane 9-point decomposition,
///        and the ghost-elimination plans for derivative boundary conditions.
#pragma once

#include "helm/core.hpp"

namespace helm {

/// 1D sixth-order compact scheme row (d1, d2, d1), h^2-scaled.
struct Coeffs1D {
  cplx d1;  ///< off-diagonal: 1 - k^4 h^4 / 360
  cplx d2;  ///< diagonal:    -2 + k^2 h^2 - 7 k^4 h^4 / 90
};

Coeffs1D coeffs_1d(cplx k, double h);

/// 27-point sixth-order stencil weights by taxicab distance class,
/// h^2-scaled.  Every face weight equals w1, every edge weight w2, every
/// corner weight w3 (the scheme is isotropic).
struct Stencil3D {
  cplx w0, w1, w2, w3;  ///< center / face / edge / corner weights
  cplx c2;  ///< cross-difference coefficient (1 + k^2 h^2 / 30) / 6
  cplx c3;  ///< triple-difference coefficient 1/30
  cplx c0;  ///< zeroth-order coefficient k^2 h^2 (1 - k^2h^2/12 + k^4h^4/360)
};

Stencil3D stencil_3d(cplx k, double h);

/// 2D 9-point stencil with class weights (center, side, diagonal); the
/// building block of the per-plane decomposition of the 27-point stencil.
struct Plane9 {
  cplx c{}, s{}, d{};

  Plane9 operator+(const Plane9& o) const { return {c + o.c, s + o.s, d + o.d}; }
};

/// Same-z-plane part of the 27-point stencil: (w0, w1, w2).
Plane9 slab_same(const Stencil3D& st);
/// Adjacent-z-plane part (the tangential operator T = I + c2(Dx+Dy) + c3 DxDy
/// in class form): (w1, w2, w3).
Plane9 slab_adj(const Stencil3D& st);

/// Sommerfeld ghost-elimination plan for a z face.
///
/// The ghost-plane contribution T*U_ghost of the 27-point stencil is replaced
/// by C1 applied to the plane one step inside plus C0 applied to the face
/// plane itself (both laterally closed), and a source term handled by RHS
/// assembly.  The matching parameters satisfy two exact identities,
/// mu3*(1 + (2ikh/3)(1 + 2k^2h^2/15)) = 1 and mu2*(10 mu1 mu3) = 1, kept as
/// invariants by construction and asserted in tests.
struct SommerfeldPlan {
  cplx mu1, mu2, mu3;
  cplx phase1;  ///< e^{ikh}
  cplx phase2;  ///< e^{2ikh}
  Plane9 C1;    ///< correction stencil on the plane one step inside
  Plane9 C0;    ///< correction stencil on the face plane
};

SommerfeldPlan sommerfeld_plan(cplx k, double h);

/// Scalar coefficients of the Neumann face source terms (bottom-face sign
/// convention; the top face negates every term, lateral faces permute axes):
///   S = cb*beta + cf1*f_n + cf3*f_nnn + cft*(f_ntt sum)
///     + cbt*[beta_t1t1t1t1 + beta_t2t2t2t2 + beta_t1t1t2t2
///            + k^2 (beta_t1t1 + beta_t2t2)]
/// where n is the face axis and t1, t2 the tangents, and the ghost relation
/// is  T*U_ghost = T*U_inside - S  (so assembly adds +S to the face row RHS).
struct NeumannSource {
  cplx cb;   ///< 2h (1 - h^2k^2/6 + h^4k^4/120)
  cplx cf1;  ///< (h^3/3)(1 - h^2k^2/20)
  cplx cf3;  ///< h^5/60
  cplx cft;  ///< 7h^5/180
  cplx cbt;  ///< -h^5/90
};

NeumannSource neumann_source(cplx k, double h);

/// Resolved ghost-elimination plan for one non-Dirichlet face: the ghost
/// plane T*U_ghost is replaced by `mirror` applied to the plane one step
/// inside plus `same` applied to the face plane (Neumann: mirror = slab_adj,
/// same = 0; Sommerfeld: mirror = C1, same = C0).  The source side (`src` or
/// `som`) is consumed by RHS assembly, not the operator.
struct GhostEliminationPlan {
  BCKind kind = BCKind::Dirichlet;
  Plane9 mirror;       ///< weights applied to the plane one step inside
  Plane9 same;         ///< weights applied to the face plane itself
  SommerfeldPlan som;  ///< populated for Sommerfeld faces
  NeumannSource src;   ///< populated for Neumann faces
};

/// Builds the plan for `face` of p (ConfigError for a Dirichlet face, which
/// has no ghost plane).
GhostEliminationPlan build_ghost_plan(const Problem& p, int face);

}  // namespace helm
