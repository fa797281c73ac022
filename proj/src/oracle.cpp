/// \file oracle.cpp
/// \brief Dense ground-truth assembly of the operators and the right-hand
///        side, dense direct solves, and dense eigendecompositions.

#include "helm/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "helm/stencils.hpp"

namespace helm {

namespace {

void guard_size(const Problem& p) {
  if (p.unknowns() > 4096) {
    throw ConfigError("dense oracle: problem exceeds 4096 unknowns");
  }
}

std::size_t flat(const Problem& p, int i, int j, int l) {
  return (static_cast<std::size_t>(i) * p.grid.ny + j) * p.grid.nz + l;
}

/// Out-of-range lateral index resolution for the dense walk: returns -1 for
/// a Dirichlet drop, the mirrored index for Neumann.
int lat_resolve(const Problem& p, int axis, int t) {
  const int n = p.n_axis(axis);
  if (t >= 0 && t < n) return t;
  const int face = 2 * axis + (t < 0 ? 0 : 1);
  if (p.bc(face) == BCKind::Dirichlet) return -1;
  return (t < 0) ? 1 : n - 2;
}

/// Adds one laterally-resolved 9-point slab application to a dense row.
void add_slab(Eigen::MatrixXcd& m, const Problem& p, std::size_t row, int i,
              int j, int lt, const Plane9& slab) {
  const cplx w[3] = {slab.c, slab.s, slab.d};
  for (int dx = -1; dx <= 1; ++dx) {
    const int sx = lat_resolve(p, 0, i + dx);
    if (sx < 0) continue;
    for (int dy = -1; dy <= 1; ++dy) {
      const int sy = lat_resolve(p, 1, j + dy);
      if (sy < 0) continue;
      m(row, flat(p, sx, sy, lt)) += w[std::abs(dx) + std::abs(dy)];
    }
  }
}

Eigen::MatrixXcd walk_a6(const Problem& p) {
  const auto n = static_cast<Eigen::Index>(p.unknowns());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  if (p.grid.dim == 1) {
    const Coeffs1D c = coeffs_1d(p.k, p.grid.h);
    for (int l = 0; l < p.grid.nz; ++l) {
      m(l, l) = c.d2;
      if (l > 0) m(l, l - 1) = c.d1;
      if (l + 1 < p.grid.nz) m(l, l + 1) = c.d1;
    }
    return m;
  }
  const Stencil3D st = stencil_3d(p.k, p.grid.h);
  const Plane9 same = slab_same(st);
  const Plane9 adj = slab_adj(st);
  const int nz = p.grid.nz;
  for (int i = 0; i < p.grid.nx; ++i) {
    for (int j = 0; j < p.grid.ny; ++j) {
      for (int l = 0; l < nz; ++l) {
        const std::size_t row = flat(p, i, j, l);
        for (int dz = -1; dz <= 1; ++dz) {
          const int lt = l + dz;
          if (lt >= 0 && lt < nz) {
            add_slab(m, p, row, i, j, lt, dz == 0 ? same : adj);
            continue;
          }
          const int face = (lt < 0) ? ZLo : ZHi;
          if (p.bc(face) == BCKind::Dirichlet) continue;
          const GhostEliminationPlan plan = build_ghost_plan(p, face);
          const int inside = (lt < 0) ? 1 : nz - 2;
          const int fpl = (lt < 0) ? 0 : nz - 1;
          add_slab(m, p, row, i, j, inside, plan.mirror);
          if (plan.kind == BCKind::Sommerfeld) {
            add_slab(m, p, row, i, j, fpl, plan.same);
          }
        }
      }
    }
  }
  return m;
}

Eigen::MatrixXcd walk_a2(const Problem& p) {
  const auto n = static_cast<Eigen::Index>(p.unknowns());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  const cplx kh2 = p.k2 * p.grid.h * p.grid.h;
  if (p.grid.dim == 1) {
    for (int l = 0; l < p.grid.nz; ++l) {
      m(l, l) = -2.0 + kh2;
      if (l > 0) m(l, l - 1) = 1.0;
      if (l + 1 < p.grid.nz) m(l, l + 1) = 1.0;
    }
    return m;
  }
  const cplx ikh2 = 2.0 * cplx(0.0, 1.0) * p.k * p.grid.h;
  const int nz = p.grid.nz;
  for (int i = 0; i < p.grid.nx; ++i) {
    for (int j = 0; j < p.grid.ny; ++j) {
      for (int l = 0; l < nz; ++l) {
        const std::size_t row = flat(p, i, j, l);
        m(row, row) += -6.0 + kh2;
        for (int dx : {-1, 1}) {
          const int sx = lat_resolve(p, 0, i + dx);
          if (sx >= 0) m(row, flat(p, sx, j, l)) += 1.0;
        }
        for (int dy : {-1, 1}) {
          const int sy = lat_resolve(p, 1, j + dy);
          if (sy >= 0) m(row, flat(p, i, sy, l)) += 1.0;
        }
        for (int dz : {-1, 1}) {
          const int lt = l + dz;
          if (lt >= 0 && lt < nz) {
            m(row, flat(p, i, j, lt)) += 1.0;
            continue;
          }
          const int face = (lt < 0) ? ZLo : ZHi;
          const BCKind kind = p.bc(face);
          if (kind == BCKind::Dirichlet) continue;
          const int inside = (lt < 0) ? 1 : nz - 2;
          m(row, flat(p, i, j, inside)) += 1.0;
          if (kind == BCKind::Sommerfeld) m(row, row) += ikh2;
        }
      }
    }
  }
  return m;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd m(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      m.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return m;
}

Eigen::MatrixXcd kron3(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y,
                       const Eigen::MatrixXcd& z) {
  return kron(kron(x, y), z);
}

/// Second-difference block tridiag(1, -2, 1) with the face closures of the
/// second-order operator on one axis.
Eigen::MatrixXcd axis_block(const Problem& p, int axis, bool with_closures) {
  const int n = p.n_axis(axis);
  Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    b(i, i) = -2.0;
    if (i > 0) b(i, i - 1) = 1.0;
    if (i + 1 < n) b(i, i + 1) = 1.0;
  }
  if (!with_closures) return b;
  const cplx ikh2 = 2.0 * cplx(0.0, 1.0) * p.k * p.grid.h;
  const BCKind lo = p.bc(2 * axis);
  const BCKind hi = p.bc(2 * axis + 1);
  if (n >= 2) {
    if (lo != BCKind::Dirichlet) b(0, 1) = 2.0;
    if (hi != BCKind::Dirichlet) b(n - 1, n - 2) = 2.0;
  }
  if (lo == BCKind::Sommerfeld) b(0, 0) += ikh2;
  if (hi == BCKind::Sommerfeld) b(n - 1, n - 1) += ikh2;
  return b;
}

Eigen::MatrixXcd kron_a6(const Problem& p) {
  for (int f = 0; f < 6; ++f) {
    if (p.grid.dim == 3 && p.bc(f) != BCKind::Dirichlet) {
      throw ConfigError(
          "dense oracle: Kronecker sixth-order assembly needs all-Dirichlet "
          "faces");
    }
  }
  if (p.grid.dim == 1) {
    const int n = p.grid.nz;
    const Coeffs1D c = coeffs_1d(p.k, p.grid.h);
    Eigen::MatrixXcd a0 = axis_block(p, 2, false);
    Eigen::MatrixXcd m = c.d1 * a0;
    m.diagonal().array() += c.d2 + 2.0 * c.d1;
    (void)n;
    return m;
  }
  const Stencil3D st = stencil_3d(p.k, p.grid.h);
  const Eigen::MatrixXcd ax = axis_block(p, 0, false);
  const Eigen::MatrixXcd ay = axis_block(p, 1, false);
  const Eigen::MatrixXcd az = axis_block(p, 2, false);
  const auto ix = Eigen::MatrixXcd::Identity(ax.rows(), ax.rows());
  const auto iy = Eigen::MatrixXcd::Identity(ay.rows(), ay.rows());
  const auto iz = Eigen::MatrixXcd::Identity(az.rows(), az.rows());
  Eigen::MatrixXcd m = kron3(ax, iy, iz) + kron3(ix, ay, iz) + kron3(ix, iy, az);
  m += st.c2 * (kron3(ax, ay, iz) + kron3(ax, iy, az) + kron3(ix, ay, az));
  m += st.c3 * kron3(ax, ay, az);
  m.diagonal().array() += st.c0;
  return m;
}

Eigen::MatrixXcd kron_a2(const Problem& p) {
  const cplx kh2 = p.k2 * p.grid.h * p.grid.h;
  if (p.grid.dim == 1) {
    Eigen::MatrixXcd m = axis_block(p, 2, false);
    m.diagonal().array() += kh2;
    return m;
  }
  const Eigen::MatrixXcd bx = axis_block(p, 0, true);
  const Eigen::MatrixXcd by = axis_block(p, 1, true);
  const Eigen::MatrixXcd bz = axis_block(p, 2, true);
  const auto ix = Eigen::MatrixXcd::Identity(bx.rows(), bx.rows());
  const auto iy = Eigen::MatrixXcd::Identity(by.rows(), by.rows());
  const auto iz = Eigen::MatrixXcd::Identity(bz.rows(), bz.rows());
  Eigen::MatrixXcd m = kron3(bx, iy, iz) + kron3(ix, by, iz) + kron3(ix, iy, bz);
  m.diagonal().array() += kh2;
  return m;
}

}  // namespace

DenseOperator assemble_dense(const Problem& p, DenseWhich which, DenseHow how) {
  guard_size(p);
  DenseOperator op;
  if (how == DenseHow::StencilWalk) {
    op.provenance = "stencil-walk";
    op.m = (which == DenseWhich::A6) ? walk_a6(p) : walk_a2(p);
  } else {
    op.provenance = "kronecker";
    op.m = (which == DenseWhich::A6) ? kron_a6(p) : kron_a2(p);
  }
  return op;
}

// ---------------------------------------------------------------------------
// Dense right-hand side
// ---------------------------------------------------------------------------

namespace {

/// Literal data-folding resolution of one neighbor offset, axis by axis:
/// Neumann mirrors the coordinate, Dirichlet clamps it to the face (first
/// clamped axis selects the data function), Sommerfeld removes the offset
/// from the walk.
struct NodeRes {
  bool skip = false;
  bool data = false;
  int face = -1;
  double c[3];
};

NodeRes resolve_node(const Problem& p, const int t[3]) {
  NodeRes r;
  for (int ax = 0; ax < 3; ++ax) {
    const int n = p.n_axis(ax);
    if (t[ax] >= 0 && t[ax] < n) {
      r.c[ax] = p.coord(ax, t[ax]);
      continue;
    }
    const int face = 2 * ax + (t[ax] < 0 ? 0 : 1);
    switch (p.bc(face)) {
      case BCKind::Dirichlet:
        r.c[ax] = (t[ax] < 0) ? 0.0 : p.grid.a;
        if (!r.data) {
          r.data = true;
          r.face = face;
        }
        break;
      case BCKind::Neumann:
        r.c[ax] = p.coord(ax, (t[ax] < 0) ? 1 : n - 2);
        break;
      case BCKind::Sommerfeld:
        r.skip = true;
        return r;
    }
  }
  return r;
}

}  // namespace

Eigen::VectorXcd dense_rhs(const Problem& p, DenseWhich which) {
  guard_size(p);
  const auto n = static_cast<Eigen::Index>(p.unknowns());
  Eigen::VectorXcd F = Eigen::VectorXcd::Zero(n);
  const double h = p.grid.h;
  const double h2 = h * h;
  const cplx kh2 = p.k2 * h2;
  const int nz = p.grid.nz;

  if (p.grid.dim == 1) {
    if (which == DenseWhich::A2) {
      for (int l = 0; l < nz; ++l) F(l) = h2 * p.src.f(0, 0, p.z(l));
      F(0) -= p.face[ZLo].g(0, 0, 0.0);
      F(nz - 1) -= p.face[ZHi].g(0, 0, p.grid.a);
      return F;
    }
    const cplx ca = 1.0 - 7.0 * kh2 / 90.0;
    const cplx cb = -kh2 / 360.0;
    for (int l = 0; l < nz; ++l) {
      const double z = p.z(l);
      F(l) = h2 * (ca * p.src.f(0, 0, z) +
                   cb * (p.src.f(0, 0, z - h) + p.src.f(0, 0, z + h)) +
                   (7.0 * h2 / 90.0) * p.src.f_zz(0, 0, z) +
                   (h2 / 360.0) *
                       (p.src.f_zz(0, 0, z - h) + p.src.f_zz(0, 0, z + h)));
    }
    const Coeffs1D c1 = coeffs_1d(p.k, h);
    F(0) -= c1.d1 * p.face[ZLo].g(0, 0, 0.0);
    F(nz - 1) -= c1.d1 * p.face[ZHi].g(0, 0, p.grid.a);
    return F;
  }

  const int nx = p.grid.nx, ny = p.grid.ny;

  if (which == DenseWhich::A2) {
    for (int i = 0; i < nx; ++i) {
      for (int j = 0; j < ny; ++j) {
        for (int l = 0; l < nz; ++l) {
          const std::size_t row = flat(p, i, j, l);
          F(row) = h2 * p.src.f(p.x(i), p.y(j), p.z(l));
          // Dirichlet folds and Neumann sources of the six axis neighbors.
          const int taps[6][3] = {{i - 1, j, l}, {i + 1, j, l}, {i, j - 1, l},
                                  {i, j + 1, l}, {i, j, l - 1}, {i, j, l + 1}};
          for (const auto& t : taps) {
            const int ax = (t[0] != i) ? 0 : (t[1] != j ? 1 : 2);
            const int n_ax = p.n_axis(ax);
            if (t[ax] >= 0 && t[ax] < n_ax) continue;
            const int face = 2 * ax + (t[ax] < 0 ? 0 : 1);
            const FaceBC& bc = p.face[static_cast<std::size_t>(face)];
            double c[3] = {p.x(i), p.y(j), p.z(l)};
            c[ax] = (t[ax] < 0) ? 0.0 : p.grid.a;
            if (bc.kind == BCKind::Dirichlet) {
              F(row) -= bc.g(c[0], c[1], c[2]);
            } else if (bc.kind == BCKind::Neumann) {
              const double sgn = (t[ax] < 0) ? 1.0 : -1.0;
              F(row) += sgn * 2.0 * h * bc.beta(c[0], c[1], c[2]);
            }
            // Sommerfeld is homogeneous at second order.
          }
        }
      }
    }
    return F;
  }

  // Sixth-order volume term.
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      for (int l = 0; l < nz; ++l) {
        const double x = p.x(i), y = p.y(j), z = p.z(l);
        F(flat(p, i, j, l)) =
            h2 * ((1.0 - kh2 / 12.0 + kh2 * kh2 / 360.0) * p.src.f(x, y, z) +
                  (h2 / 12.0) * (1.0 - kh2 / 30.0) * p.src.lap_f(x, y, z) +
                  (h2 * h2 / 360.0) * p.src.bilap_f(x, y, z) +
                  (h2 * h2 / 90.0) *
                      (p.src.f_xxyy(x, y, z) + p.src.f_xxzz(x, y, z) +
                       p.src.f_yyzz(x, y, z)));
      }
    }
  }

  // Dirichlet data folds over all 26 neighbor offsets of every row.
  const Stencil3D st = stencil_3d(p.k, h);
  const cplx wclass[4] = {st.w0, st.w1, st.w2, st.w3};
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      for (int l = 0; l < nz; ++l) {
        const std::size_t row = flat(p, i, j, l);
        for (int dx = -1; dx <= 1; ++dx) {
          for (int dy = -1; dy <= 1; ++dy) {
            for (int dz = -1; dz <= 1; ++dz) {
              if (!dx && !dy && !dz) continue;
              const int t[3] = {i + dx, j + dy, l + dz};
              const NodeRes r = resolve_node(p, t);
              if (r.skip || !r.data) continue;
              const cplx g = p.face[static_cast<std::size_t>(r.face)].g(
                  r.c[0], r.c[1], r.c[2]);
              F(row) -= wclass[std::abs(dx) + std::abs(dy) + std::abs(dz)] * g;
            }
          }
        }
      }
    }
  }

  // Non-Dirichlet face sources and the Sommerfeld correction-stencil folds.
  for (int face = 0; face < 6; ++face) {
    const BCKind kind = p.bc(face);
    if (kind == BCKind::Dirichlet) continue;
    const GhostEliminationPlan plan = build_ghost_plan(p, face);
    const int axis = face_axis(face);
    const bool hi = face_is_hi(face);
    const double sgn = hi ? -1.0 : 1.0;
    const int fixed = hi ? p.n_axis(axis) - 1 : 0;
    for (int i = 0; i < nx; ++i) {
      for (int j = 0; j < ny; ++j) {
        for (int l = 0; l < nz; ++l) {
          const int along = (axis == 0) ? i : (axis == 1 ? j : l);
          if (along != fixed) continue;
          const std::size_t row = flat(p, i, j, l);
          const double x = p.x(i), y = p.y(j), z = p.z(l);
          if (kind == BCKind::Neumann) {
            const NeumannSource& ns = plan.src;
            const SourceModel& s = p.src;
            const FaceBC& bc = p.face[static_cast<std::size_t>(face)];
            cplx fn, f3, ft;
            if (axis == 0) {
              fn = s.f_x(x, y, z);
              f3 = s.f_xxx(x, y, z);
              ft = s.f_xyy(x, y, z) + s.f_xzz(x, y, z);
            } else if (axis == 1) {
              fn = s.f_y(x, y, z);
              f3 = s.f_yyy(x, y, z);
              ft = s.f_yxx(x, y, z) + s.f_yzz(x, y, z);
            } else {
              fn = s.f_z(x, y, z);
              f3 = s.f_zzz(x, y, z);
              ft = s.f_zxx(x, y, z) + s.f_zyy(x, y, z);
            }
            const cplx b4 = bc.beta_t40(x, y, z) + bc.beta_t04(x, y, z) +
                            bc.beta_t22(x, y, z) +
                            p.k2 * (bc.beta_t20(x, y, z) + bc.beta_t02(x, y, z));
            F(row) += sgn * (ns.cb * bc.beta(x, y, z) + ns.cf1 * fn +
                             ns.cf3 * f3 + ns.cft * ft + ns.cbt * b4);
          } else {
            const SommerfeldPlan& sp = plan.som;
            const SourceModel& s = p.src;
            const cplx ik = sgn * cplx(0.0, 1.0) * p.k;
            const cplx g1 = s.f_z(x, y, z) + ik * s.f(x, y, z);
            const cplx g2 =
                s.f_zz(x, y, z) + 2.0 * ik * s.f_z(x, y, z) - p.k2 * s.f(x, y, z);
            const cplx g3 = s.f_zzz(x, y, z) + 3.0 * ik * s.f_zz(x, y, z) -
                            3.0 * p.k2 * s.f_z(x, y, z) -
                            ik * p.k2 * s.f(x, y, z);
            const cplx gxx = s.f_zxx(x, y, z) + ik * s.f_xx(x, y, z);
            const cplx gyy = s.f_zyy(x, y, z) + ik * s.f_yy(x, y, z);
            const double h4 = h2 * h2;
            const cplx fbar = (h2 / 6.0 + p.k2 * h4 / 45.0) * g1 -
                              (ik * h4 / 90.0) * g2 +
                              (h4 / 120.0) * (g3 - gxx - gyy);
            F(row) += sgn * sp.phase1 * sp.mu3 *
                      (2.0 * h * fbar + (sp.mu1 * h4 * h / 3.0) * (gxx + gyy));
            // Lateral Dirichlet folds of the correction stencils.
            const cplx c1w[3] = {plan.mirror.c, plan.mirror.s, plan.mirror.d};
            const cplx c0w[3] = {plan.same.c, plan.same.s, plan.same.d};
            const int l_in = hi ? nz - 2 : 1;
            const int l_fc = hi ? nz - 1 : 0;
            for (int dx = -1; dx <= 1; ++dx) {
              for (int dy = -1; dy <= 1; ++dy) {
                const int tin[3] = {i + dx, j + dy, l_in};
                const NodeRes r = resolve_node(p, tin);
                if (!r.data) continue;
                const SpaceFn& g = p.face[static_cast<std::size_t>(r.face)].g;
                const int cls = std::abs(dx) + std::abs(dy);
                F(row) -= c1w[cls] * g(r.c[0], r.c[1], p.z(l_in));
                F(row) -= c0w[cls] * g(r.c[0], r.c[1], p.z(l_fc));
              }
            }
          }
        }
      }
    }
  }

  return F;
}

Eigen::VectorXcd to_dense(const Field& f) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(f.v.size()));
  for (std::size_t n = 0; n < f.v.size(); ++n) {
    v(static_cast<Eigen::Index>(n)) = f.v[n];
  }
  return v;
}

Field from_dense(const Eigen::VectorXcd& v, const Problem& p) {
  Field f = p.make_field();
  if (static_cast<std::size_t>(v.size()) != f.v.size()) {
    throw ConfigError("from_dense: size mismatch");
  }
  for (std::size_t n = 0; n < f.v.size(); ++n) {
    f.v[n] = v(static_cast<Eigen::Index>(n));
  }
  return f;
}

Eigen::VectorXcd dense_solve(const DenseOperator& op,
                             const Eigen::VectorXcd& rhs) {
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(op.m);
  Eigen::VectorXcd x = lu.solve(rhs);
  const double rn = (op.m * x - rhs).norm();
  const double bn = rhs.norm();
  if (!std::isfinite(rn) || (bn > 0.0 && rn > 1e-8 * bn)) {
    throw ConfigError("dense solve: singular or severely ill-conditioned");
  }
  return x;
}

std::vector<cplx> dense_eigs(const DenseOperator& op) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(op.m, false);
  if (es.info() != Eigen::Success) {
    throw ConfigError("dense eigensolver failed to converge");
  }
  std::vector<cplx> ev(static_cast<std::size_t>(op.m.rows()));
  for (std::size_t n = 0; n < ev.size(); ++n) {
    ev[n] = es.eigenvalues()(static_cast<Eigen::Index>(n));
  }
  std::sort(ev.begin(), ev.end(), [](cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return ev;
}

}  // namespace helm
