/// \file problems.cpp
/// \brief Separable manufactured solutions with closed-form derivatives of
///        every order the scheme and the boundary eliminations consume.

#include "helm/problems.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <memory>

namespace helm {

namespace {

/// Derivatives 0..6 of one separable factor at one coordinate.
using FactorDerivs = std::array<cplx, 7>;
using FactorFn = std::function<FactorDerivs(double)>;

/// Constant factor 1 for the unused axes of lower-dimensional problems.
FactorFn one_factor() {
  return [](double) {
    FactorDerivs d{};
    d[0] = 1.0;
    return d;
  };
}

/// t^3 (1 - t)^3 = t^3 - 3 t^4 + 3 t^5 - t^6.
FactorFn cubic_bump_factor() {
  return [](double t) {
    static constexpr double coef[7] = {0, 0, 0, 1, -3, 3, -1};
    FactorDerivs d{};
    for (int n = 0; n <= 6; ++n) {
      double acc = 0.0;
      for (int p = n; p <= 6; ++p) {
        double fall = 1.0;
        for (int q = p; q > p - n; --q) fall *= q;
        acc += coef[p] * fall * std::pow(t, p - n);
      }
      d[n] = acc;
    }
    return d;
  };
}

/// Powers (k pi)^0..6 of a complex scalar.
std::array<cplx, 7> powers(cplx base) {
  std::array<cplx, 7> p{};
  p[0] = 1.0;
  for (int n = 1; n <= 6; ++n) p[n] = p[n - 1] * base;
  return p;
}

/// t (1 - t) cos(k pi t): Leibniz against the quadratic window.
FactorFn bump_cos_factor(cplx k) {
  const cplx kp = k * kPi;
  return [kp](double t) {
    const auto kpn = powers(kp);
    // c[m] = d^m/dt^m cos(kp t) = kp^m cos(kp t + m pi/2)
    std::array<cplx, 7> c{};
    for (int m = 0; m <= 6; ++m) c[m] = kpn[m] * std::cos(kp * t + 0.5 * m * kPi);
    const double w = t * (1.0 - t);
    const double w1 = 1.0 - 2.0 * t;
    FactorDerivs d{};
    for (int n = 0; n <= 6; ++n) {
      cplx acc = w * c[n];
      if (n >= 1) acc += static_cast<double>(n) * w1 * c[n - 1];
      if (n >= 2) acc -= static_cast<double>(n) * (n - 1) * c[n - 2];
      d[n] = acc;
    }
    return d;
  };
}

/// sin(k pi t).
FactorFn sin_factor(cplx k) {
  const cplx kp = k * kPi;
  return [kp](double t) {
    const auto kpn = powers(kp);
    FactorDerivs d{};
    for (int m = 0; m <= 6; ++m) d[m] = kpn[m] * std::sin(kp * t + 0.5 * m * kPi);
    return d;
  };
}

/// cos(k pi t).
FactorFn cos_factor(cplx k) {
  const cplx kp = k * kPi;
  return [kp](double t) {
    const auto kpn = powers(kp);
    FactorDerivs d{};
    for (int m = 0; m <= 6; ++m) d[m] = kpn[m] * std::cos(kp * t + 0.5 * m * kPi);
    return d;
  };
}

/// e^{ikt} + e^{-ik(t-1)} - 2: radiating along both z directions, satisfying
/// the homogeneous one-way conditions at t = 0 (d/dt + ik) and t = 1
/// (d/dt - ik) exactly.
FactorFn radiating_factor(cplx k) {
  const cplx ik = cplx(0.0, 1.0) * k;
  return [ik](double t) {
    const auto up = powers(ik);    // (ik)^m
    const auto dn = powers(-ik);   // (-ik)^m
    const cplx eu = std::exp(ik * t);
    const cplx ed = std::exp(-ik * (t - 1.0));
    FactorDerivs d{};
    for (int m = 0; m <= 6; ++m) d[m] = up[m] * eu + dn[m] * ed;
    d[0] -= 2.0;
    return d;
  };
}

/// Per-axis factor evaluation memo: the assembly sweeps coordinates axis by
/// axis, so caching the last argument per axis removes nearly all factor
/// recomputation.  Single-threaded use only.
struct AxisCache {
  double t = std::numeric_limits<double>::quiet_NaN();
  FactorDerivs d{};
};

std::function<cplx(int, int, int, double, double, double)> separable_u(
    FactorFn px, FactorFn qy, FactorFn rz) {
  auto cache = std::make_shared<std::array<AxisCache, 3>>();
  return [px = std::move(px), qy = std::move(qy), rz = std::move(rz), cache](
             int a, int b, int c, double x, double y, double z) -> cplx {
    auto& cx = (*cache)[0];
    auto& cy = (*cache)[1];
    auto& cz = (*cache)[2];
    if (!(cx.t == x)) {
      cx.d = px(x);
      cx.t = x;
    }
    if (!(cy.t == y)) {
      cy.d = qy(y);
      cy.t = y;
    }
    if (!(cz.t == z)) {
      cz.d = rz(z);
      cz.t = z;
    }
    return cx.d[static_cast<std::size_t>(a)] * cy.d[static_cast<std::size_t>(b)] *
           cz.d[static_cast<std::size_t>(c)];
  };
}

}  // namespace

Problem ManufacturedProblem::make(double h) const {
  const auto ud = u_deriv;
  const cplx kk2 = k * k;
  // f = lap u + k^2 u, differentiated (a, b, c) more times per axis.
  auto fd = [ud, kk2](int a, int b, int c, double x, double y, double z) {
    return ud(a + 2, b, c, x, y, z) + ud(a, b + 2, c, x, y, z) +
           ud(a, b, c + 2, x, y, z) + kk2 * ud(a, b, c, x, y, z);
  };

  std::array<FaceBC, 6> faces{};
  for (int f = 0; f < 6; ++f) {
    FaceBC& bc = faces[static_cast<std::size_t>(f)];
    bc.kind = kinds[static_cast<std::size_t>(f)];
    if (bc.kind == BCKind::Dirichlet) {
      bc.g = [ud](double x, double y, double z) { return ud(0, 0, 0, x, y, z); };
    } else if (bc.kind == BCKind::Neumann) {
      const int axis = face_axis(f);
      const int t1 = (axis == 0) ? 1 : 0;
      const int t2 = (axis == 2) ? 1 : 2;
      auto beta_d = [ud, axis, t1, t2](int d1, int d2) {
        return [ud, axis, t1, t2, d1, d2](double x, double y, double z) {
          int o[3] = {0, 0, 0};
          o[axis] += 1;
          o[t1] += d1;
          o[t2] += d2;
          return ud(o[0], o[1], o[2], x, y, z);
        };
      };
      bc.beta = beta_d(0, 0);
      bc.beta_t20 = beta_d(2, 0);
      bc.beta_t02 = beta_d(0, 2);
      bc.beta_t40 = beta_d(4, 0);
      bc.beta_t04 = beta_d(0, 4);
      bc.beta_t22 = beta_d(2, 2);
    }
    // Sommerfeld faces are homogeneous: no data callbacks.
  }

  SourceModel src;
  auto fdc = [fd](int a, int b, int c) {
    return [fd, a, b, c](double x, double y, double z) {
      return fd(a, b, c, x, y, z);
    };
  };
  src.f = fdc(0, 0, 0);
  src.lap_f = [fd](double x, double y, double z) {
    return fd(2, 0, 0, x, y, z) + fd(0, 2, 0, x, y, z) + fd(0, 0, 2, x, y, z);
  };
  src.bilap_f = [fd](double x, double y, double z) {
    return fd(4, 0, 0, x, y, z) + fd(0, 4, 0, x, y, z) + fd(0, 0, 4, x, y, z) +
           2.0 * (fd(2, 2, 0, x, y, z) + fd(2, 0, 2, x, y, z) +
                  fd(0, 2, 2, x, y, z));
  };
  src.f_xxyy = fdc(2, 2, 0);
  src.f_xxzz = fdc(2, 0, 2);
  src.f_yyzz = fdc(0, 2, 2);
  src.f_x = fdc(1, 0, 0);
  src.f_y = fdc(0, 1, 0);
  src.f_z = fdc(0, 0, 1);
  src.f_xx = fdc(2, 0, 0);
  src.f_yy = fdc(0, 2, 0);
  src.f_zz = fdc(0, 0, 2);
  src.f_xxx = fdc(3, 0, 0);
  src.f_yyy = fdc(0, 3, 0);
  src.f_zzz = fdc(0, 0, 3);
  src.f_xyy = fdc(1, 2, 0);
  src.f_xzz = fdc(1, 0, 2);
  src.f_yxx = fdc(2, 1, 0);
  src.f_yzz = fdc(0, 1, 2);
  src.f_zxx = fdc(2, 0, 1);
  src.f_zyy = fdc(0, 2, 1);

  return validate_setup(1.0, h, k, faces, src, dim);
}

ManufacturedProblem make_problem(const std::string& name, cplx k) {
  ManufacturedProblem mp;
  mp.name = name;
  mp.k = k;
  for (auto& kd : mp.kinds) kd = BCKind::Dirichlet;
  if (name == "dirichlet1d") {
    mp.dim = 1;
    mp.u_deriv = separable_u(one_factor(), one_factor(), bump_cos_factor(k));
  } else if (name == "dirichlet3d") {
    mp.u_deriv =
        separable_u(cubic_bump_factor(), bump_cos_factor(k), sin_factor(k));
  } else if (name == "dirichlet_neumann") {
    mp.kinds[ZLo] = BCKind::Neumann;
    mp.u_deriv =
        separable_u(cubic_bump_factor(), bump_cos_factor(k), cos_factor(k));
  } else if (name == "dirichlet_sommerfeld") {
    mp.kinds[ZLo] = BCKind::Sommerfeld;
    mp.kinds[ZHi] = BCKind::Sommerfeld;
    mp.u_deriv = separable_u(cubic_bump_factor(), bump_cos_factor(k),
                             radiating_factor(k));
  } else {
    throw ConfigError("unknown problem family: " + name);
  }
  return mp;
}

std::vector<ManufacturedProblem> problem_catalog() {
  std::vector<ManufacturedProblem> cat;
  const char* families[] = {"dirichlet1d", "dirichlet3d", "dirichlet_neumann",
                            "dirichlet_sommerfeld"};
  for (const char* fam : families) {
    for (double k : {10.0, 20.0, 30.0, 40.0, 50.0}) {
      cat.push_back(make_problem(fam, cplx(k, 0.0)));
    }
  }
  cat.push_back(make_problem("dirichlet_sommerfeld", cplx(35.7, 0.43)));
  return cat;
}

Field sample_exact(const Problem& p, const ManufacturedProblem& mp) {
  Field u = p.make_field();
  for (int i = 0; i < p.grid.nx; ++i) {
    const double x = (p.grid.dim == 1) ? 0.0 : p.x(i);
    for (int j = 0; j < p.grid.ny; ++j) {
      const double y = (p.grid.dim == 1) ? 0.0 : p.y(j);
      for (int l = 0; l < p.grid.nz; ++l) {
        u.at(i, j, l) = mp.u_deriv(0, 0, 0, x, y, p.z(l));
      }
    }
  }
  return u;
}

double exact_error(const Problem& p, const Field& U,
                   const ManufacturedProblem& mp) {
  const Field ex = sample_exact(p, mp);
  double worst = 0.0;
  for (std::size_t n = 0; n < U.v.size(); ++n) {
    worst = std::max(worst, std::abs(U.v[n] - ex.v[n]));
  }
  return worst;
}

}  // namespace helm
