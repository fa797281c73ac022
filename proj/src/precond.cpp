/// \file precond.cpp
/// \brief Fast direct solver for the second-order operator: trigonometric
///        diagonalization of the lateral axes plus complex tridiagonal
///        solves along z.

#include "helm/precond.hpp"

#include <fftw3.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstring>

namespace helm {

std::vector<double> lateral_eigenvalues(BCKind kind, int n) {
  std::vector<double> eig(static_cast<std::size_t>(n));
  if (n == 1) {
    eig[0] = -2.0;
    return eig;
  }
  if (kind == BCKind::Dirichlet) {
    for (int j = 1; j <= n; ++j) {
      eig[static_cast<std::size_t>(j - 1)] =
          2.0 * std::cos(j * kPi / (n + 1)) - 2.0;
    }
  } else if (kind == BCKind::Neumann) {
    for (int j = 0; j < n; ++j) {
      eig[static_cast<std::size_t>(j)] = 2.0 * std::cos(j * kPi / (n - 1)) - 2.0;
    }
  } else {
    throw ConfigError("lateral_eigenvalues: lateral faces cannot be radiating");
  }
  return eig;
}

std::vector<cplx> solve_tridiag(const std::vector<cplx>& lower,
                                const std::vector<cplx>& diag,
                                const std::vector<cplx>& upper,
                                const std::vector<cplx>& rhs,
                                const std::string& tag) {
  const std::size_t n = diag.size();
  if (lower.size() != n || upper.size() != n || rhs.size() != n || n == 0) {
    throw ConfigError("solve_tridiag: band size mismatch");
  }
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    scale = std::max(scale,
                     std::abs(diag[i]) + std::abs(lower[i]) + std::abs(upper[i]));
  }
  const double floor = 1e-12 * scale;
  std::vector<cplx> cp(n), dp(n), x(n);
  bool ok = true;
  cplx piv = diag[0];
  if (std::abs(piv) < floor) {
    ok = false;
  } else {
    cp[0] = upper[0] / piv;
    dp[0] = rhs[0] / piv;
    for (std::size_t i = 1; i < n && ok; ++i) {
      piv = diag[i] - lower[i] * cp[i - 1];
      if (std::abs(piv) < floor) {
        ok = false;
        break;
      }
      cp[i] = upper[i] / piv;
      dp[i] = (rhs[i] - lower[i] * dp[i - 1]) / piv;
    }
  }
  if (ok) {
    x[n - 1] = dp[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = dp[i] - cp[i] * x[i + 1];
    return x;
  }
  // Dense partially-pivoted fallback for this one pencil.
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n),
                                              static_cast<Eigen::Index>(n));
  Eigen::VectorXcd b(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    m(ii, ii) = diag[i];
    if (i > 0) m(ii, ii - 1) = lower[i];
    if (i + 1 < n) m(ii, ii + 1) = upper[i];
    b(ii) = rhs[i];
  }
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(m);
  if (!lu.isInvertible()) {
    throw ResonanceError("singular tridiagonal pencil" +
                         (tag.empty() ? std::string() : " " + tag));
  }
  Eigen::VectorXcd xs = lu.solve(b);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = xs(static_cast<Eigen::Index>(i));
    if (!std::isfinite(x[i].real()) || !std::isfinite(x[i].imag())) {
      throw ResonanceError("singular tridiagonal pencil" +
                           (tag.empty() ? std::string() : " " + tag));
    }
  }
  return x;
}

struct Preconditioner::Impl {
  int nx = 1, ny = 1, nz = 1;
  bool tx = false, ty = false;  ///< transform along x / y
  double scale = 1.0;           ///< uniform inverse-transform normalization
  std::vector<double> eigx, eigy;
  // z-pencil band structure (eig-independent part).
  std::vector<cplx> lower, diagz, upper;
  cplx* ws = nullptr;  ///< fftw-aligned workspace, nx*ny*nz complex values
  fftw_plan plan_x = nullptr;
  fftw_plan plan_y = nullptr;
  // Scratch for the in-place Thomas sweeps.
  std::vector<cplx> cp, dp;

  ~Impl() {
    if (plan_x) fftw_destroy_plan(plan_x);
    if (plan_y) fftw_destroy_plan(plan_y);
    if (ws) fftw_free(ws);
  }
};

Preconditioner::Preconditioner(const Problem& p)
    : impl_(std::make_unique<Impl>()) {
  Impl& im = *impl_;
  im.nx = p.grid.nx;
  im.ny = p.grid.ny;
  im.nz = p.grid.nz;
  const cplx kh2 = p.k2 * p.grid.h * p.grid.h;
  const cplx ikh2 = 2.0 * cplx(0.0, 1.0) * p.k * p.grid.h;

  if (p.grid.dim == 1) {
    im.eigx = {0.0};
    im.eigy = {0.0};
  } else {
    im.eigx = lateral_eigenvalues(p.bc(XLo), im.nx);
    im.eigy = lateral_eigenvalues(p.bc(YLo), im.ny);
  }

  // z band: tridiag(1, -2 + k^2 h^2, 1) plus derivative-face closures.
  const std::size_t nzs = static_cast<std::size_t>(im.nz);
  im.lower.assign(nzs, cplx(1.0));
  im.upper.assign(nzs, cplx(1.0));
  im.diagz.assign(nzs, -2.0 + kh2);
  im.lower[0] = cplx(0.0);
  im.upper[nzs - 1] = cplx(0.0);
  if (p.grid.dim == 3 && im.nz >= 2) {
    const BCKind lo = p.bc(ZLo), hi = p.bc(ZHi);
    if (lo != BCKind::Dirichlet) im.upper[0] = 2.0;
    if (hi != BCKind::Dirichlet) im.lower[nzs - 1] = 2.0;
    if (lo == BCKind::Sommerfeld) im.diagz[0] += ikh2;
    if (hi == BCKind::Sommerfeld) im.diagz[nzs - 1] += ikh2;
  }
  im.cp.resize(nzs);
  im.dp.resize(nzs);

  const std::size_t total =
      static_cast<std::size_t>(im.nx) * im.ny * im.nz;
  im.ws = static_cast<cplx*>(fftw_malloc(sizeof(cplx) * total));
  if (!im.ws) throw ConfigError("preconditioner workspace allocation failed");

  auto make_plan = [&](int axis) -> fftw_plan {
    const int len = (axis == 0) ? im.nx : im.ny;
    const BCKind kind = p.bc(axis == 0 ? XLo : YLo);
    fftw_r2r_kind tk =
        (kind == BCKind::Dirichlet) ? FFTW_RODFT00 : FFTW_REDFT00;
    fftw_iodim64 dims[1];
    dims[0].n = len;
    dims[0].is = dims[0].os =
        (axis == 0) ? static_cast<ptrdiff_t>(2) * im.ny * im.nz
                    : static_cast<ptrdiff_t>(2) * im.nz;
    fftw_iodim64 hm[3];
    if (axis == 0) {
      hm[0] = {im.ny, static_cast<ptrdiff_t>(2) * im.nz,
               static_cast<ptrdiff_t>(2) * im.nz};
    } else {
      hm[0] = {im.nx, static_cast<ptrdiff_t>(2) * im.ny * im.nz,
               static_cast<ptrdiff_t>(2) * im.ny * im.nz};
    }
    hm[1] = {im.nz, 2, 2};
    hm[2] = {2, 1, 1};
    double* d = reinterpret_cast<double*>(im.ws);
    fftw_plan pl =
        fftw_plan_guru64_r2r(1, dims, 3, hm, d, d, &tk, FFTW_ESTIMATE);
    if (!pl) throw ConfigError("trigonometric transform planning failed");
    return pl;
  };

  if (p.grid.dim == 3 && im.nx > 1) {
    im.tx = true;
    im.plan_x = make_plan(0);
    im.scale /= 2.0 * (p.bc(XLo) == BCKind::Dirichlet ? im.nx + 1 : im.nx - 1);
  }
  if (p.grid.dim == 3 && im.ny > 1) {
    im.ty = true;
    im.plan_y = make_plan(1);
    im.scale /= 2.0 * (p.bc(YLo) == BCKind::Dirichlet ? im.ny + 1 : im.ny - 1);
  }
}

Preconditioner::~Preconditioner() = default;

void Preconditioner::apply(const Field& Y, Field& U) const {
  Impl& im = *impl_;
  const std::size_t total = static_cast<std::size_t>(im.nx) * im.ny * im.nz;
  if (Y.v.size() != total || U.v.size() != total) {
    throw ConfigError("preconditioner apply: field shape mismatch");
  }
  std::memcpy(im.ws, Y.v.data(), sizeof(cplx) * total);
  if (im.tx) fftw_execute(im.plan_x);
  if (im.ty) fftw_execute(im.plan_y);

  const std::size_t nz = static_cast<std::size_t>(im.nz);
  for (int m = 0; m < im.nx; ++m) {
    for (int n = 0; n < im.ny; ++n) {
      cplx* pz = im.ws + (static_cast<std::size_t>(m) * im.ny + n) * nz;
      const cplx shift =
          im.eigx[static_cast<std::size_t>(m)] + im.eigy[static_cast<std::size_t>(n)];
      // Guarded in-place Thomas elimination on this pencil.
      double scale = 0.0;
      for (std::size_t l = 0; l < nz; ++l) {
        scale = std::max(scale, std::abs(im.diagz[l] + shift) +
                                    std::abs(im.lower[l]) + std::abs(im.upper[l]));
      }
      const double floor = 1e-12 * scale;
      bool ok = true;
      cplx piv = im.diagz[0] + shift;
      if (std::abs(piv) < floor) {
        ok = false;
      } else {
        im.cp[0] = im.upper[0] / piv;
        im.dp[0] = pz[0] / piv;
        for (std::size_t l = 1; l < nz && ok; ++l) {
          piv = im.diagz[l] + shift - im.lower[l] * im.cp[l - 1];
          if (std::abs(piv) < floor) {
            ok = false;
            break;
          }
          im.cp[l] = im.upper[l] / piv;
          im.dp[l] = (pz[l] - im.lower[l] * im.dp[l - 1]) / piv;
        }
      }
      if (ok) {
        pz[nz - 1] = im.dp[nz - 1];
        for (std::size_t l = nz - 1; l-- > 0;) {
          pz[l] = im.dp[l] - im.cp[l] * pz[l + 1];
        }
      } else {
        // Near-singular pencil: rebuild the bands and use the guarded
        // dense-fallback path, which raises ResonanceError when singular.
        std::vector<cplx> diag(nz), rhs(pz, pz + nz);
        for (std::size_t l = 0; l < nz; ++l) diag[l] = im.diagz[l] + shift;
        const std::string tag =
            "(mode " + std::to_string(m) + "," + std::to_string(n) + ")";
        std::vector<cplx> x = solve_tridiag(im.lower, diag, im.upper, rhs, tag);
        std::copy(x.begin(), x.end(), pz);
      }
    }
  }

  if (im.ty) fftw_execute(im.plan_y);
  if (im.tx) fftw_execute(im.plan_x);
  if (im.scale != 1.0) {
    for (std::size_t i = 0; i < total; ++i) im.ws[i] *= im.scale;
  }
  std::memcpy(U.v.data(), im.ws, sizeof(cplx) * total);
}

Field Preconditioner::apply(const Field& Y) const {
  Field U(Y.nx, Y.ny, Y.nz);
  apply(Y, U);
  return U;
}

Field precondition_solve(const Problem& p, const Field& Y) {
  Preconditioner pc(p);
  return pc.apply(Y);
}

}  // namespace helm
