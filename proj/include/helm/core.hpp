/// \file core.hpp
/// \brief Grid, field, boundary and source-model types shared by every solver
///        component, plus problem validation.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace helm {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Bad problem setup (maps to CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Singular (resonant) preconditioner pencil (maps to CLI exit code 4).
class ResonanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class BCKind : int { Dirichlet = 0, Neumann = 1, Sommerfeld = 2 };

/// Face indices: axis = face/2 (0=x, 1=y, 2=z); face%2 == 1 is the high end.
enum Face : int { XLo = 0, XHi = 1, YLo = 2, YHi = 3, ZLo = 4, ZHi = 5 };

inline int face_axis(int f) { return f / 2; }
inline bool face_is_hi(int f) { return (f % 2) != 0; }

/// Pointwise scalar callback over the closed domain.
using SpaceFn = std::function<cplx(double, double, double)>;

/// Per-face boundary description.
///
/// Dirichlet carries the boundary value g.  Neumann carries the axis
/// derivative beta = du/d(axis) evaluated on the face (the same axis
/// derivative at both ends, not the outward normal derivative) plus the
/// tangential derivatives of beta used by the sixth-order elimination;
/// tangent axes are the two remaining axes in ascending order (x-face:
/// (y,z); y-face: (x,z); z-face: (x,y)).  Sommerfeld (z faces only) is
/// homogeneous and carries no data.
struct FaceBC {
  BCKind kind = BCKind::Dirichlet;
  SpaceFn g;                       ///< Dirichlet boundary value
  SpaceFn beta;                    ///< Neumann axis-derivative data
  SpaceFn beta_t20, beta_t02;      ///< d2 beta / dt1^2, dt2^2
  SpaceFn beta_t40, beta_t04;      ///< d4 beta / dt1^4, dt2^4
  SpaceFn beta_t22;                ///< d4 beta / dt1^2 dt2^2
};

/// Analytic source f together with every derivative the sixth-order scheme
/// and the boundary eliminations can demand.  Only the callbacks required by
/// the active boundary configuration must be set; validate_setup checks.
struct SourceModel {
  SpaceFn f;
  SpaceFn lap_f;                    ///< laplacian of f
  SpaceFn bilap_f;                  ///< biharmonic (laplacian squared) of f
  SpaceFn f_xxyy, f_xxzz, f_yyzz;   ///< mixed fourth derivatives
  SpaceFn f_x, f_y, f_z;            ///< first derivatives
  SpaceFn f_xx, f_yy, f_zz;         ///< pure second derivatives
  SpaceFn f_xxx, f_yyy, f_zzz;      ///< pure third derivatives
  SpaceFn f_xyy, f_xzz;             ///< mixed thirds for x-face eliminations
  SpaceFn f_yxx, f_yzz;             ///< mixed thirds for y-face eliminations
  SpaceFn f_zxx, f_zyy;             ///< mixed thirds for z-face eliminations
};

/// Uniform grid over [0,a]^dim with identical step h in every direction.
/// nx, ny, nz count unknown-bearing points per axis (Dirichlet face planes
/// carry data, not unknowns; Neumann/Sommerfeld face planes are unknowns).
struct Grid {
  double a = 1.0;
  double h = 0.0;
  int nx = 0, ny = 0, nz = 0;
  int dim = 3;
};

/// Complex field over the solver unknowns, z-fastest storage.
struct Field {
  int nx = 0, ny = 0, nz = 0;
  std::vector<cplx> v;

  Field() = default;
  Field(int nx_, int ny_, int nz_)
      : nx(nx_), ny(ny_), nz(nz_),
        v(static_cast<std::size_t>(nx_) * ny_ * nz_) {}

  std::size_t size() const { return v.size(); }
  std::size_t idx(int i, int j, int l) const {
    return (static_cast<std::size_t>(i) * ny + j) * nz + l;
  }
  cplx& at(int i, int j, int l) { return v[idx(i, j, l)]; }
  const cplx& at(int i, int j, int l) const { return v[idx(i, j, l)]; }
  void fill(cplx value) { std::fill(v.begin(), v.end(), value); }
};

double nrm2(const Field& f);
double nrm_inf(const Field& f);

/// Outcome of one iterative (or direct) solve.
struct SolveReport {
  int iterations = 0;
  std::vector<double> residual_history;  ///< true relative l2 residuals
  std::optional<double> err_max;         ///< max-norm error vs exact solution
  std::optional<double> psi;             ///< preconditioning-order estimate
  double wall_time = 0.0;                ///< seconds
  bool converged = false;
  bool diverged = false;         ///< SKS divergence ("div")
  bool breakdown = false;        ///< GMRES Arnoldi breakdown
  bool approx_interval = false;  ///< Chebyshev ran on a real-part interval
};

/// Checked problem descriptor: validated grid + wavenumber + boundary
/// configuration + source model, with unknown-window bookkeeping.
/// Immutable after construction; safe to share across threads.
struct Problem {
  Grid grid;
  cplx k{};
  cplx k2{};
  std::array<FaceBC, 6> face{};
  SourceModel src;
  /// Index offset of the first unknown per axis (1 when the low face is
  /// Dirichlet, else 0): coordinate(axis, i) = (i + off[axis]) * h.
  std::array<int, 3> off{1, 1, 1};

  BCKind bc(int f) const { return face[static_cast<std::size_t>(f)].kind; }
  int n_axis(int axis) const {
    return axis == 0 ? grid.nx : (axis == 1 ? grid.ny : grid.nz);
  }
  double coord(int axis, int i) const { return (i + off[axis]) * grid.h; }
  double x(int i) const { return coord(0, i); }
  double y(int j) const { return coord(1, j); }
  double z(int l) const { return coord(2, l); }
  std::size_t unknowns() const {
    return static_cast<std::size_t>(grid.nx) * grid.ny * grid.nz;
  }
  Field make_field() const { return Field(grid.nx, grid.ny, grid.nz); }
};

/// Validates every setup invariant and returns the problem descriptor.
///
/// Checks: h > 0 and a/h integral; Re(k) >= 0; the points-per-wavelength
/// guard |k| h < 2*pi/10; lateral faces all Dirichlet or all Neumann;
/// Sommerfeld only on z faces; every derivative callback demanded by the
/// active boundary configuration present.  dim == 1 solves the one-axis
/// problem (Dirichlet ends only); lateral faces are ignored and nx = ny = 1.
Problem validate_setup(double a, double h, cplx k,
                       const std::array<FaceBC, 6>& faces,
                       const SourceModel& src, int dim = 3);

}  // namespace helm
