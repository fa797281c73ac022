#include "helm/core.hpp"

#include <cmath>
#include <sstream>

namespace helm {

double nrm2(const Field& f) {
  double s = 0.0;
  for (const cplx& c : f.v) s += std::norm(c);
  return std::sqrt(s);
}

double nrm_inf(const Field& f) {
  double m = 0.0;
  for (const cplx& c : f.v) m = std::max(m, std::abs(c));
  return m;
}

namespace {

int intervals_of(double a, double h) {
  const double m = a / h;
  const double r = std::round(m);
  if (!(h > 0.0) || r < 2.0 || std::abs(m - r) > 1e-9 * r) {
    std::ostringstream os;
    os << "step h = " << h << " does not evenly divide the extent a = " << a;
    throw ConfigError(os.str());
  }
  return static_cast<int>(r);
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

void require_fn(const SpaceFn& fn, const std::string& name) {
  if (!fn) throw ConfigError("missing derivative callback: " + name);
}

}  // namespace

Problem validate_setup(double a, double h, cplx k,
                       const std::array<FaceBC, 6>& faces,
                       const SourceModel& src, int dim) {
  require(dim == 1 || dim == 3, "dim must be 1 or 3");
  require(a > 0.0, "extent a must be positive");
  require(k.real() >= 0.0, "Re(k) must be nonnegative");
  const int m = intervals_of(a, h);

  // Points-per-wavelength guard.
  if (std::abs(k) * h >= 2.0 * kPi / 10.0) {
    std::ostringstream os;
    os << "points-per-wavelength guard violated: |k| h = " << std::abs(k) * h
       << " >= 2 pi / 10";
    throw ConfigError(os.str());
  }

  Problem p;
  p.grid.a = a;
  p.grid.h = h;
  p.grid.dim = dim;
  p.k = k;
  p.k2 = k * k;
  p.face = faces;

  if (dim == 1) {
    require(faces[ZLo].kind == BCKind::Dirichlet &&
                faces[ZHi].kind == BCKind::Dirichlet,
            "the 1D scheme supports Dirichlet ends only");
    require_fn(faces[ZLo].g, "g at the low end");
    require_fn(faces[ZHi].g, "g at the high end");
    require_fn(src.f, "f");
    require_fn(src.f_zz, "f_zz");
    p.grid.nx = p.grid.ny = 1;
    p.grid.nz = m - 1;
    p.off = {0, 0, 1};
    // Force the unused lateral kinds to Dirichlet for uniform bookkeeping.
    p.face[XLo].kind = p.face[XHi].kind = BCKind::Dirichlet;
    p.face[YLo].kind = p.face[YHi].kind = BCKind::Dirichlet;
    p.src = src;
    return p;
  }

  // Lateral faces: all Dirichlet or all Neumann.
  const BCKind lk = faces[XLo].kind;
  require(lk != BCKind::Sommerfeld, "Sommerfeld is permitted on z faces only");
  for (int f : {XLo, XHi, YLo, YHi}) {
    require(faces[static_cast<std::size_t>(f)].kind != BCKind::Sommerfeld,
            "Sommerfeld is permitted on z faces only");
    require(faces[static_cast<std::size_t>(f)].kind == lk,
            "lateral faces must be all Dirichlet or all Neumann");
  }

  // Volume callbacks demanded by the interior scheme.
  require_fn(src.f, "f");
  require_fn(src.lap_f, "lap_f");
  require_fn(src.bilap_f, "bilap_f");
  require_fn(src.f_xxyy, "f_xxyy");
  require_fn(src.f_xxzz, "f_xxzz");
  require_fn(src.f_yyzz, "f_yyzz");

  // Per-face data and derivative callbacks.
  struct FaceNeeds {
    const char* f1;
    const char* f3;
    const char* ft_a;
    const char* ft_b;
  };
  static const FaceNeeds needs[3] = {
      {"f_x", "f_xxx", "f_xyy", "f_xzz"},
      {"f_y", "f_yyy", "f_yxx", "f_yzz"},
      {"f_z", "f_zzz", "f_zxx", "f_zyy"},
  };
  auto axis_fn1 = [&](int ax) -> const SpaceFn& {
    return ax == 0 ? src.f_x : (ax == 1 ? src.f_y : src.f_z);
  };
  auto axis_fn3 = [&](int ax) -> const SpaceFn& {
    return ax == 0 ? src.f_xxx : (ax == 1 ? src.f_yyy : src.f_zzz);
  };
  auto axis_fta = [&](int ax) -> const SpaceFn& {
    return ax == 0 ? src.f_xyy : (ax == 1 ? src.f_yxx : src.f_zxx);
  };
  auto axis_ftb = [&](int ax) -> const SpaceFn& {
    return ax == 0 ? src.f_xzz : (ax == 1 ? src.f_yzz : src.f_zyy);
  };

  for (int f = 0; f < 6; ++f) {
    const FaceBC& fb = faces[static_cast<std::size_t>(f)];
    const int ax = face_axis(f);
    switch (fb.kind) {
      case BCKind::Dirichlet:
        require_fn(fb.g, "Dirichlet data g on face " + std::to_string(f));
        break;
      case BCKind::Neumann: {
        require_fn(fb.beta, "Neumann data beta on face " + std::to_string(f));
        require_fn(fb.beta_t20, "beta_t20 on face " + std::to_string(f));
        require_fn(fb.beta_t02, "beta_t02 on face " + std::to_string(f));
        require_fn(fb.beta_t40, "beta_t40 on face " + std::to_string(f));
        require_fn(fb.beta_t04, "beta_t04 on face " + std::to_string(f));
        require_fn(fb.beta_t22, "beta_t22 on face " + std::to_string(f));
        require_fn(axis_fn1(ax), needs[ax].f1);
        require_fn(axis_fn3(ax), needs[ax].f3);
        require_fn(axis_fta(ax), needs[ax].ft_a);
        require_fn(axis_ftb(ax), needs[ax].ft_b);
        break;
      }
      case BCKind::Sommerfeld:
        require(ax == 2, "Sommerfeld is permitted on z faces only");
        require_fn(src.f_z, "f_z");
        require_fn(src.f_zz, "f_zz");
        require_fn(src.f_zzz, "f_zzz");
        require_fn(src.f_zxx, "f_zxx");
        require_fn(src.f_zyy, "f_zyy");
        require_fn(src.f_xx, "f_xx");
        require_fn(src.f_yy, "f_yy");
        break;
    }
  }

  // Unknown window per axis: Dirichlet face planes carry data, derivative
  // faces carry unknowns.
  for (int ax = 0; ax < 3; ++ax) {
    const BCKind lo = faces[static_cast<std::size_t>(2 * ax)].kind;
    const BCKind hi = faces[static_cast<std::size_t>(2 * ax + 1)].kind;
    const int n = m - 1 + (lo != BCKind::Dirichlet ? 1 : 0) +
                  (hi != BCKind::Dirichlet ? 1 : 0);
    p.off[static_cast<std::size_t>(ax)] = (lo == BCKind::Dirichlet) ? 1 : 0;
    (ax == 0 ? p.grid.nx : ax == 1 ? p.grid.ny : p.grid.nz) = n;
  }
  require(p.grid.nx >= 1 && p.grid.ny >= 1 && p.grid.nz >= 1,
          "grid too coarse: no unknowns on some axis");

  p.src = src;
  return p;
}

}  // namespace helm
