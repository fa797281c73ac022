/// \file operator.cpp
/// \brief Stencil coefficient kits, matrix-free operator applications, and
///        right-hand-side assembly with boundary folding.

#include "helm/operator.hpp"

#include <cmath>
#include <cstdlib>

#include "helm/stencils.hpp"

namespace helm {

// ---------------------------------------------------------------------------
// Coefficient kits
// ---------------------------------------------------------------------------

Coeffs1D coeffs_1d(cplx k, double h) {
  const cplx kh2 = k * k * h * h;
  const cplx kh4 = kh2 * kh2;
  Coeffs1D c;
  c.d1 = 1.0 - kh4 / 360.0;
  c.d2 = -2.0 + kh2 - 7.0 * kh4 / 90.0;
  return c;
}

Stencil3D stencil_3d(cplx k, double h) {
  const cplx kh2 = k * k * h * h;
  const cplx kh4 = kh2 * kh2;
  Stencil3D st;
  st.c2 = (1.0 + kh2 / 30.0) / 6.0;
  st.c3 = 1.0 / 30.0;
  st.c0 = kh2 * (1.0 - kh2 / 12.0) + kh4 * kh2 / 360.0;
  st.w0 = -6.0 + 12.0 * st.c2 - 8.0 * st.c3 + st.c0;
  st.w1 = 1.0 - 4.0 * st.c2 + 4.0 * st.c3;
  st.w2 = st.c2 - 2.0 * st.c3;
  st.w3 = st.c3;
  return st;
}

Plane9 slab_same(const Stencil3D& st) { return {st.w0, st.w1, st.w2}; }

Plane9 slab_adj(const Stencil3D& st) { return {st.w1, st.w2, st.w3}; }

SommerfeldPlan sommerfeld_plan(cplx k, double h) {
  const cplx ikh = cplx(0.0, 1.0) * k * h;
  const cplx kh2 = k * k * h * h;
  SommerfeldPlan pl;
  pl.mu3 = 1.0 / (1.0 + (2.0 * ikh / 3.0) * (1.0 + 2.0 * kh2 / 15.0));
  pl.mu1 = (ikh / 90.0 + (1.0 / (6.0 * pl.mu3)) * (1.0 + kh2 / 30.0)) /
           (1.0 + 2.0 * ikh / 3.0);
  pl.mu2 = 1.0 / (10.0 * pl.mu1 * pl.mu3);
  pl.phase1 = std::exp(ikh);
  pl.phase2 = std::exp(2.0 * ikh);
  // Matching coefficients of the one-step-inside plane (through the ghost
  // relation) by 2D stencil class: identity, cross-difference, and
  // double-cross parts.
  const cplx b_i = 1.0 - 2.0 * ikh / 3.0 - 4.0 * ikh * kh2 / 45.0;
  const cplx b_p = pl.mu1 + ikh / 90.0 - 2.0 * ikh * pl.mu1 / 3.0;
  const cplx b_q = 1.0 / (30.0 * pl.mu3);
  const cplx f1 = pl.phase2 * pl.mu3;
  pl.C1 = {f1 * (b_i - 4.0 * b_p + 4.0 * b_q), f1 * (b_p - 2.0 * b_q),
           f1 * b_q};
  const cplx a_i = (4.0 * ikh / 3.0) * (1.0 + 2.0 * kh2 / 15.0);
  const cplx a_p = 4.0 * ikh * pl.mu1 / 3.0 - ikh / 45.0;
  const cplx f0 = pl.phase1 * pl.mu3;
  pl.C0 = {f0 * (a_i - 4.0 * a_p), f0 * a_p, cplx(0.0)};
  return pl;
}

NeumannSource neumann_source(cplx k, double h) {
  const cplx kh2 = k * k * h * h;
  const double h3 = h * h * h;
  const double h5 = h3 * h * h;
  NeumannSource ns;
  ns.cb = 2.0 * h * (1.0 - kh2 / 6.0 + kh2 * kh2 / 120.0);
  ns.cf1 = (h3 / 3.0) * (1.0 - kh2 / 20.0);
  ns.cf3 = h5 / 60.0;
  ns.cft = 7.0 * h5 / 180.0;
  ns.cbt = -h5 / 90.0;
  return ns;
}

GhostEliminationPlan build_ghost_plan(const Problem& p, int face) {
  GhostEliminationPlan plan;
  plan.kind = p.bc(face);
  if (plan.kind == BCKind::Dirichlet) {
    throw ConfigError("build_ghost_plan: Dirichlet face has no ghost plane");
  }
  const Stencil3D st = stencil_3d(p.k, p.grid.h);
  if (plan.kind == BCKind::Neumann) {
    plan.mirror = slab_adj(st);
    plan.same = Plane9{};
    plan.src = neumann_source(p.k, p.grid.h);
  } else {
    plan.som = sommerfeld_plan(p.k, p.grid.h);
    plan.mirror = plan.som.C1;
    plan.same = plan.som.C0;
  }
  return plan;
}

// ---------------------------------------------------------------------------
// Local helpers
// ---------------------------------------------------------------------------

namespace {

/// Resolves an out-of-range lateral tap index: Dirichlet drops the tap (the
/// boundary plane carries data, not unknowns), Neumann reflects it pointwise
/// across the face plane.  Returns -1 to drop.
inline int resolve_tap(int t, int n, BCKind lo, BCKind hi) {
  if (t >= 0 && t < n) return t;
  const BCKind kind = (t < 0) ? lo : hi;
  if (kind == BCKind::Dirichlet) return -1;
  return (t < 0) ? 1 : n - 2;
}

inline void check_shape(const Problem& p, const Field& f, const char* who) {
  if (f.nx != p.grid.nx || f.ny != p.grid.ny || f.nz != p.grid.nz) {
    throw ConfigError(std::string(who) + ": field shape mismatch");
  }
}

struct ClassWeights {
  cplx w[3];
};

inline ClassWeights to_classes(const Plane9& pl) {
  return ClassWeights{{pl.c, pl.s, pl.d}};
}

/// Per-problem application plan for the sixth-order operator: plane-class
/// weights plus the resolved z-face closures (coefficients applied to the
/// plane one step inside and the face plane itself; zero for Dirichlet).
struct ApplyPlan6 {
  ClassWeights same, adj;
  ClassWeights lo1, lo0;  ///< low-face closure: one-inside / face plane
  ClassWeights hi1, hi0;  ///< high-face closure
  BCKind xlo, xhi, ylo, yhi;
};

ApplyPlan6 make_plan6(const Problem& p) {
  const Stencil3D st = stencil_3d(p.k, p.grid.h);
  ApplyPlan6 pl;
  pl.same = to_classes(slab_same(st));
  pl.adj = to_classes(slab_adj(st));
  pl.lo1 = pl.lo0 = pl.hi1 = pl.hi0 = ClassWeights{{cplx(0), cplx(0), cplx(0)}};
  const auto closure = [&](int face, ClassWeights& one_in, ClassWeights& face_pl) {
    switch (p.bc(face)) {
      case BCKind::Dirichlet:
        break;
      case BCKind::Neumann:
        one_in = pl.adj;  // ghost plane mirrors pointwise across the face
        break;
      case BCKind::Sommerfeld: {
        const SommerfeldPlan sp = sommerfeld_plan(p.k, p.grid.h);
        one_in = to_classes(sp.C1);
        face_pl = to_classes(sp.C0);
        break;
      }
    }
  };
  closure(ZLo, pl.lo1, pl.lo0);
  closure(ZHi, pl.hi1, pl.hi0);
  pl.xlo = p.bc(XLo);
  pl.xhi = p.bc(XHi);
  pl.ylo = p.bc(YLo);
  pl.yhi = p.bc(YHi);
  return pl;
}

}  // namespace

// ---------------------------------------------------------------------------
// Operator applications
// ---------------------------------------------------------------------------

void apply_a6(const Problem& p, const Field& x, Field& y) {
  check_shape(p, x, "apply_a6 input");
  check_shape(p, y, "apply_a6 output");
  const int nz = p.grid.nz;
  if (p.grid.dim == 1) {
    const Coeffs1D c = coeffs_1d(p.k, p.grid.h);
    for (int l = 0; l < nz; ++l) {
      cplx acc = c.d2 * x.v[l];
      if (l > 0) acc += c.d1 * x.v[l - 1];
      if (l + 1 < nz) acc += c.d1 * x.v[l + 1];
      y.v[l] = acc;
    }
    return;
  }
  const int nx = p.grid.nx, ny = p.grid.ny;
  const ApplyPlan6 pl = make_plan6(p);
  y.fill(cplx(0.0));
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      cplx* o = &y.v[y.idx(i, j, 0)];
      for (int dx = -1; dx <= 1; ++dx) {
        const int sx = resolve_tap(i + dx, nx, pl.xlo, pl.xhi);
        if (sx < 0) continue;
        for (int dy = -1; dy <= 1; ++dy) {
          const int sy = resolve_tap(j + dy, ny, pl.ylo, pl.yhi);
          if (sy < 0) continue;
          const int cls = std::abs(dx) + std::abs(dy);
          const cplx wa = pl.same.w[cls];
          const cplx wb = pl.adj.w[cls];
          const cplx* s = &x.v[x.idx(sx, sy, 0)];
          if (nz == 1) {
            // Single z-plane (necessarily Dirichlet on both z faces).
            o[0] += wa * s[0];
            continue;
          }
          o[0] += wa * s[0] + wb * s[1] + pl.lo1.w[cls] * s[1] +
                  pl.lo0.w[cls] * s[0];
          for (int l = 1; l < nz - 1; ++l) {
            o[l] += wa * s[l] + wb * (s[l - 1] + s[l + 1]);
          }
          o[nz - 1] += wa * s[nz - 1] + wb * s[nz - 2] +
                       pl.hi1.w[cls] * s[nz - 2] + pl.hi0.w[cls] * s[nz - 1];
        }
      }
    }
  }
}

Field apply_a6(const Problem& p, const Field& x) {
  Field y = p.make_field();
  apply_a6(p, x, y);
  return y;
}

void apply_a2(const Problem& p, const Field& x, Field& y) {
  check_shape(p, x, "apply_a2 input");
  check_shape(p, y, "apply_a2 output");
  const int nz = p.grid.nz;
  const cplx kh2 = p.k2 * p.grid.h * p.grid.h;
  if (p.grid.dim == 1) {
    const cplx w = -2.0 + kh2;
    for (int l = 0; l < nz; ++l) {
      cplx acc = w * x.v[l];
      if (l > 0) acc += x.v[l - 1];
      if (l + 1 < nz) acc += x.v[l + 1];
      y.v[l] = acc;
    }
    return;
  }
  const int nx = p.grid.nx, ny = p.grid.ny;
  const cplx w = -6.0 + kh2;
  const cplx ikh = cplx(0.0, 1.0) * p.k * p.grid.h;
  // z closure coefficients on the plane one inside / the face plane itself.
  const auto z_closure = [&](int face, cplx& inside, cplx& same) {
    switch (p.bc(face)) {
      case BCKind::Dirichlet:
        inside = same = cplx(0.0);
        break;
      case BCKind::Neumann:
        inside = cplx(1.0);
        same = cplx(0.0);
        break;
      case BCKind::Sommerfeld:
        inside = cplx(1.0);
        same = 2.0 * ikh;
        break;
    }
  };
  cplx lo1, lo0, hi1, hi0;
  z_closure(ZLo, lo1, lo0);
  z_closure(ZHi, hi1, hi0);
  y.fill(cplx(0.0));
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      cplx* o = &y.v[y.idx(i, j, 0)];
      // Center pencil: tridiagonal along z with face closures.
      {
        const cplx* s = &x.v[x.idx(i, j, 0)];
        if (nz == 1) {
          o[0] += w * s[0];
        } else {
          o[0] += w * s[0] + s[1] + lo1 * s[1] + lo0 * s[0];
          for (int l = 1; l < nz - 1; ++l) {
            o[l] += w * s[l] + s[l - 1] + s[l + 1];
          }
          o[nz - 1] += w * s[nz - 1] + s[nz - 2] + hi1 * s[nz - 2] +
                       hi0 * s[nz - 1];
        }
      }
      // Four lateral neighbor taps, weight 1, drop/reflect out of range.
      const int taps[4][2] = {{i - 1, j}, {i + 1, j}, {i, j - 1}, {i, j + 1}};
      for (const auto& t : taps) {
        const int sx = resolve_tap(t[0], nx, p.bc(XLo), p.bc(XHi));
        if (sx < 0) continue;
        const int sy = resolve_tap(t[1], ny, p.bc(YLo), p.bc(YHi));
        if (sy < 0) continue;
        const cplx* s = &x.v[x.idx(sx, sy, 0)];
        for (int l = 0; l < nz; ++l) o[l] += s[l];
      }
    }
  }
}

Field apply_a2(const Problem& p, const Field& x) {
  Field y = p.make_field();
  apply_a2(p, x, y);
  return y;
}

// ---------------------------------------------------------------------------
// Right-hand-side assembly, sixth order
// ---------------------------------------------------------------------------

namespace {

/// Axis resolution of one tap of the data-folding walk.
struct AxisRes {
  int idx = 0;          ///< resolved in-range index (valid unless clamped)
  double coord = 0.0;   ///< resolved coordinate
  bool clamped = false; ///< landed on a Dirichlet data plane
  bool skip = false;    ///< crossed a ghost-eliminated (Sommerfeld) face
  int face = -1;        ///< face index when out of range
};

AxisRes resolve_axis(const Problem& p, int axis, int t) {
  AxisRes r;
  const int n = p.n_axis(axis);
  if (t >= 0 && t < n) {
    r.idx = t;
    r.coord = p.coord(axis, t);
    return r;
  }
  r.face = 2 * axis + (t < 0 ? 0 : 1);
  switch (p.bc(r.face)) {
    case BCKind::Dirichlet:
      r.clamped = true;
      r.coord = (t < 0) ? 0.0 : p.grid.a;
      break;
    case BCKind::Neumann:
      r.idx = (t < 0) ? 1 : n - 2;
      r.coord = p.coord(axis, r.idx);
      break;
    case BCKind::Sommerfeld:
      r.skip = true;
      break;
  }
  return r;
}

/// Evaluates the Neumann ghost source S at one face row (lo-face sign
/// convention; callers negate at high faces):
///   S = cb*beta + cf1*f_n + cf3*f_nnn + cft*(sum f_ntt)
///     + cbt*[beta_t40 + beta_t04 + beta_t22 + k^2 (beta_t20 + beta_t02)].
cplx neumann_face_source(const Problem& p, int face, const NeumannSource& ns,
                         double x, double y, double z) {
  const FaceBC& bc = p.face[static_cast<std::size_t>(face)];
  const SourceModel& s = p.src;
  const int axis = face_axis(face);
  cplx fn, fnnn, fntt;
  switch (axis) {
    case 0:
      fn = s.f_x(x, y, z);
      fnnn = s.f_xxx(x, y, z);
      fntt = s.f_xyy(x, y, z) + s.f_xzz(x, y, z);
      break;
    case 1:
      fn = s.f_y(x, y, z);
      fnnn = s.f_yyy(x, y, z);
      fntt = s.f_yxx(x, y, z) + s.f_yzz(x, y, z);
      break;
    default:
      fn = s.f_z(x, y, z);
      fnnn = s.f_zzz(x, y, z);
      fntt = s.f_zxx(x, y, z) + s.f_zyy(x, y, z);
      break;
  }
  const cplx beta4 = bc.beta_t40(x, y, z) + bc.beta_t04(x, y, z) +
                     bc.beta_t22(x, y, z) +
                     p.k2 * (bc.beta_t20(x, y, z) + bc.beta_t02(x, y, z));
  return ns.cb * bc.beta(x, y, z) + ns.cf1 * fn + ns.cf3 * fnnn +
         ns.cft * fntt + ns.cbt * beta4;
}

/// Evaluates the Sommerfeld ghost source sigma at one z-face row.  `sign`
/// is +1 at the low face (outgoing direction -z) and -1 at the high face
/// (outgoing +z); it flips ik throughout the first-order wave combinations.
cplx sommerfeld_face_source(const Problem& p, const SommerfeldPlan& sp,
                            double sign, double x, double y, double z) {
  const SourceModel& s = p.src;
  const double h = p.grid.h;
  const cplx ik = sign * cplx(0.0, 1.0) * p.k;
  const cplx k2 = p.k2;
  const cplx f = s.f(x, y, z);
  const cplx fz = s.f_z(x, y, z);
  const cplx fzz = s.f_zz(x, y, z);
  const cplx fzzz = s.f_zzz(x, y, z);
  const cplx fxx = s.f_xx(x, y, z);
  const cplx fyy = s.f_yy(x, y, z);
  const cplx fzxx = s.f_zxx(x, y, z);
  const cplx fzyy = s.f_zyy(x, y, z);
  // One-way wave combinations (d/dz + ik applied once, twice, three times).
  const cplx g1 = fz + ik * f;
  const cplx g2 = fzz + 2.0 * ik * fz - k2 * f;
  const cplx g3 = fzzz + 3.0 * ik * fzz - 3.0 * k2 * fz - ik * k2 * f;
  const cplx gxx = fzxx + ik * fxx;
  const cplx gyy = fzyy + ik * fyy;
  const double h2 = h * h, h4 = h2 * h2, h5 = h4 * h;
  const cplx fbar = (h2 / 6.0 + k2 * h4 / 45.0) * g1 - (ik * h4 / 90.0) * g2 +
                    (h4 / 120.0) * (g3 - gxx - gyy);
  return sp.phase1 * sp.mu3 *
         (2.0 * h * fbar + (sp.mu1 * h5 / 3.0) * (gxx + gyy));
}

}  // namespace

Field assemble_rhs(const Problem& p) {
  Field F = p.make_field();
  const double h = p.grid.h;
  const double h2 = h * h;
  const cplx kh2 = p.k2 * h2;
  const int nz = p.grid.nz;

  if (p.grid.dim == 1) {
    // Compact sixth-order source: a three-point average of f and f'' with
    // scheme-matched weights; end evaluations land on the boundary points.
    const cplx cf0 = 1.0 - 7.0 * kh2 / 90.0;
    const cplx cf1 = -kh2 / 360.0;
    const double cd0 = 7.0 * h2 / 90.0;
    const double cd1 = h2 / 360.0;
    for (int l = 0; l < nz; ++l) {
      const double z = p.z(l);
      const cplx fm = p.src.f(0, 0, z - h);
      const cplx f0 = p.src.f(0, 0, z);
      const cplx fp = p.src.f(0, 0, z + h);
      const cplx dm = p.src.f_zz(0, 0, z - h);
      const cplx d0 = p.src.f_zz(0, 0, z);
      const cplx dp = p.src.f_zz(0, 0, z + h);
      F.v[l] = h2 * (cf0 * f0 + cf1 * (fm + fp) + cd0 * d0 + cd1 * (dm + dp));
    }
    const Coeffs1D c = coeffs_1d(p.k, h);
    F.v[0] -= c.d1 * p.face[ZLo].g(0, 0, 0.0);
    F.v[nz - 1] -= c.d1 * p.face[ZHi].g(0, 0, p.grid.a);
    return F;
  }

  const int nx = p.grid.nx, ny = p.grid.ny;
  const Stencil3D st = stencil_3d(p.k, h);
  const cplx wclass[4] = {st.w0, st.w1, st.w2, st.w3};

  // Volume term at every unknown.
  const cplx vf = h2 * (1.0 - kh2 / 12.0 + kh2 * kh2 / 360.0);
  const cplx vl = (h2 * h2 / 12.0) * (1.0 - kh2 / 30.0);
  const double vb = h2 * h2 * h2 / 360.0;
  const double vm = h2 * h2 * h2 / 90.0;
  for (int i = 0; i < nx; ++i) {
    const double x = p.x(i);
    for (int j = 0; j < ny; ++j) {
      const double y = p.y(j);
      cplx* row = &F.v[F.idx(i, j, 0)];
      for (int l = 0; l < nz; ++l) {
        const double z = p.z(l);
        const cplx mixed = p.src.f_xxyy(x, y, z) + p.src.f_xxzz(x, y, z) +
                           p.src.f_yyzz(x, y, z);
        row[l] = vf * p.src.f(x, y, z) + vl * p.src.lap_f(x, y, z) +
                 vb * p.src.bilap_f(x, y, z) + vm * mixed;
      }
    }
  }

  // Boundary-row work: Dirichlet data folding (27-offset walk), ghost source
  // terms, and the Sommerfeld correction-stencil folds.
  const bool zlo_s = p.bc(ZLo) == BCKind::Sommerfeld;
  const bool zhi_s = p.bc(ZHi) == BCKind::Sommerfeld;
  SommerfeldPlan sp;
  ClassWeights c1w{}, c0w{};
  if (zlo_s || zhi_s) {
    sp = sommerfeld_plan(p.k, h);
    c1w = to_classes(sp.C1);
    c0w = to_classes(sp.C0);
  }
  NeumannSource ns = neumann_source(p.k, h);

  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      for (int l = 0; l < nz; ++l) {
        const bool on_box = (i == 0 || i == nx - 1 || j == 0 || j == ny - 1 ||
                             l == 0 || l == nz - 1);
        if (!on_box) {
          // Only boundary-box rows reach out of range; skip to the last
          // z-boundary row of this pencil.
          if (nz > 2 && l == 1 && i != 0 && i != nx - 1 && j != 0 &&
              j != ny - 1) {
            l = nz - 2;  // next ++l lands on nz - 1
            continue;
          }
          continue;
        }
        cplx acc(0.0);
        // Data-folding walk over the 26 neighbor offsets.
        for (int dx = -1; dx <= 1; ++dx) {
          for (int dy = -1; dy <= 1; ++dy) {
            for (int dz = -1; dz <= 1; ++dz) {
              if (dx == 0 && dy == 0 && dz == 0) continue;
              const AxisRes rx = resolve_axis(p, 0, i + dx);
              if (rx.skip) continue;
              const AxisRes ry = resolve_axis(p, 1, j + dy);
              if (ry.skip) continue;
              const AxisRes rz = resolve_axis(p, 2, l + dz);
              if (rz.skip) continue;
              if (!(rx.clamped || ry.clamped || rz.clamped)) continue;
              const int face = rx.clamped ? rx.face
                               : (ry.clamped ? ry.face : rz.face);
              const cplx g = p.face[static_cast<std::size_t>(face)].g(
                  rx.coord, ry.coord, rz.coord);
              const int cls = std::abs(dx) + std::abs(dy) + std::abs(dz);
              acc -= wclass[cls] * g;
            }
          }
        }
        // Sommerfeld rows: fold the lateral-Dirichlet drops of the C1/C0
        // correction stencils (the ghost offsets skipped above).
        const bool som_lo = zlo_s && l == 0;
        const bool som_hi = zhi_s && l == nz - 1;
        if (som_lo || som_hi) {
          const double z_in = som_lo ? p.z(1) : p.z(nz - 2);
          const double z_fc = som_lo ? p.z(0) : p.z(nz - 1);
          for (int dx = -1; dx <= 1; ++dx) {
            for (int dy = -1; dy <= 1; ++dy) {
              const AxisRes rx = resolve_axis(p, 0, i + dx);
              const AxisRes ry = resolve_axis(p, 1, j + dy);
              if (!(rx.clamped || ry.clamped)) continue;
              const int face = rx.clamped ? rx.face : ry.face;
              const SpaceFn& g = p.face[static_cast<std::size_t>(face)].g;
              const int cls = std::abs(dx) + std::abs(dy);
              acc -= c1w.w[cls] * g(rx.coord, ry.coord, z_in);
              acc -= c0w.w[cls] * g(rx.coord, ry.coord, z_fc);
            }
          }
        }
        F.v[F.idx(i, j, l)] += acc;
      }
    }
  }

  // Ghost source terms, one per non-Dirichlet face row.  Low faces add the
  // source, high faces subtract it (coordinate reflection flips every term).
  for (int face = 0; face < 6; ++face) {
    const BCKind kind = p.bc(face);
    if (kind == BCKind::Dirichlet) continue;
    const int axis = face_axis(face);
    const bool hi = face_is_hi(face);
    const double sgn = hi ? -1.0 : 1.0;
    const int n_ax = p.n_axis(axis);
    const int fixed = hi ? n_ax - 1 : 0;
    const int nu = (axis == 0) ? ny : nx;
    const int nv = (axis == 2) ? ny : nz;
    for (int u = 0; u < nu; ++u) {
      for (int v = 0; v < nv; ++v) {
        int i, j, l;
        if (axis == 0) {
          i = fixed, j = u, l = v;
        } else if (axis == 1) {
          i = u, j = fixed, l = v;
        } else {
          i = u, j = v, l = fixed;
        }
        const double x = p.x(i), y = p.y(j), z = p.z(l);
        cplx s;
        if (kind == BCKind::Neumann) {
          s = neumann_face_source(p, face, ns, x, y, z);
        } else {
          s = sommerfeld_face_source(p, sp, sgn, x, y, z);
        }
        F.v[F.idx(i, j, l)] += sgn * s;
      }
    }
  }

  return F;
}

// ---------------------------------------------------------------------------
// Right-hand-side assembly, second order
// ---------------------------------------------------------------------------

Field assemble_rhs2(const Problem& p) {
  Field F = p.make_field();
  const double h = p.grid.h;
  const double h2 = h * h;
  const int nz = p.grid.nz;

  if (p.grid.dim == 1) {
    for (int l = 0; l < nz; ++l) F.v[l] = h2 * p.src.f(0, 0, p.z(l));
    F.v[0] -= p.face[ZLo].g(0, 0, 0.0);
    F.v[nz - 1] -= p.face[ZHi].g(0, 0, p.grid.a);
    return F;
  }

  const int nx = p.grid.nx, ny = p.grid.ny;
  for (int i = 0; i < nx; ++i) {
    const double x = p.x(i);
    for (int j = 0; j < ny; ++j) {
      const double y = p.y(j);
      cplx* row = &F.v[F.idx(i, j, 0)];
      for (int l = 0; l < nz; ++l) row[l] = h2 * p.src.f(x, y, p.z(l));
    }
  }

  // Boundary terms: Dirichlet folds (weight-1 taps of the 7-point stencil)
  // and centered-difference Neumann sources +-2h beta.
  for (int face = 0; face < 6; ++face) {
    const BCKind kind = p.bc(face);
    if (kind == BCKind::Sommerfeld) continue;  // homogeneous
    const int axis = face_axis(face);
    const bool hi = face_is_hi(face);
    const int n_ax = p.n_axis(axis);
    const int fixed = hi ? n_ax - 1 : 0;
    const double fc = hi ? p.grid.a : 0.0;
    const int nu = (axis == 0) ? ny : nx;
    const int nv = (axis == 2) ? ny : nz;
    const FaceBC& bc = p.face[static_cast<std::size_t>(face)];
    for (int u = 0; u < nu; ++u) {
      for (int v = 0; v < nv; ++v) {
        int i, j, l;
        if (axis == 0) {
          i = fixed, j = u, l = v;
        } else if (axis == 1) {
          i = u, j = fixed, l = v;
        } else {
          i = u, j = v, l = fixed;
        }
        double x = p.x(i), y = p.y(j), z = p.z(l);
        if (axis == 0) x = fc;
        if (axis == 1) y = fc;
        if (axis == 2) z = fc;
        if (kind == BCKind::Dirichlet) {
          // The dropped neighbor of the face-adjacent row.
          F.v[F.idx(i, j, l)] -= bc.g(x, y, z);
        } else {
          const double sgn = hi ? -1.0 : 1.0;
          F.v[F.idx(i, j, l)] += sgn * 2.0 * h * bc.beta(x, y, z);
        }
      }
    }
  }

  return F;
}

// ---------------------------------------------------------------------------
// Residual
// ---------------------------------------------------------------------------

Residual residual(const Problem& p, const Field& U, const Field& F) {
  Residual res;
  res.r = apply_a6(p, U);
  for (std::size_t n = 0; n < res.r.v.size(); ++n) {
    res.r.v[n] = F.v[n] - res.r.v[n];
  }
  const double fn = nrm2(F);
  const double rn = nrm2(res.r);
  if (fn == 0.0) {
    res.absolute = true;
    res.rel_norm = rn;
  } else {
    res.rel_norm = rn / fn;
  }
  return res;
}

}  // namespace helm
