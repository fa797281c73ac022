/// \file spectra.cpp
/// \brief Closed-form eigenvalues, preconditioned-spectrum scans, and the
///        analytic spectral-gap estimate.

#include "helm/spectra.hpp"

#include <cmath>
#include <vector>

namespace helm {

double eig_1d(int j, int N, double k, double h, Which which) {
  (void)N;
  const double s = std::sin(0.5 * j * kPi * h);
  const double kh2 = k * k * h * h;
  const double lp = -4.0 * s * s + kh2;
  if (which == Which::A2) return lp;
  const double kh4 = kh2 * kh2;
  return lp - kh4 * (14.0 + std::cos(j * kPi * h)) / 180.0;
}

double eig_3d(int m, int n, int s, int N, double k, double h, Which which) {
  (void)N;
  const double sm = std::sin(0.5 * m * kPi * h);
  const double sn = std::sin(0.5 * n * kPi * h);
  const double ss = std::sin(0.5 * s * kPi * h);
  const double a = sm * sm, b = sn * sn, c = ss * ss;
  const double kh2 = k * k * h * h;
  const double lp = -4.0 * (a + b + c) + kh2;
  if (which == Which::A2) return lp;
  const double kh4 = kh2 * kh2;
  return lp + (8.0 / 3.0) * (1.0 + kh2 / 30.0) * (a * b + a * c + b * c) -
         (32.0 / 15.0) * a * b * c - kh4 / 12.0 + kh4 * kh2 / 360.0;
}

namespace {

SpectrumSummary scan(int N, double k, double h, bool reduced) {
  std::vector<double> s2(static_cast<std::size_t>(N) + 1, 0.0);
  for (int j = 1; j <= N; ++j) {
    const double s = std::sin(0.5 * j * kPi * h);
    s2[static_cast<std::size_t>(j)] = s * s;
  }
  const double kh2 = k * k * h * h;
  const double kh4 = kh2 * kh2;
  const double cpair = (8.0 / 3.0) * (1.0 + kh2 / 30.0);
  const double shift = -kh4 / 12.0 + kh4 * kh2 / 360.0;
  SpectrumSummary sum;
  bool first_d = true;
  bool first_p = true;
  for (int m = 1; m <= N; ++m) {
    const double a = s2[static_cast<std::size_t>(m)];
    const int n0 = reduced ? m : 1;
    for (int n = n0; n <= N; ++n) {
      const double b = s2[static_cast<std::size_t>(n)];
      const int s0 = reduced ? n : 1;
      for (int s = s0; s <= N; ++s) {
        const double c = s2[static_cast<std::size_t>(s)];
        const double lp = -4.0 * (a + b + c) + kh2;
        const double l6 = lp + cpair * (a * b + a * c + b * c) -
                          (32.0 / 15.0) * a * b * c + shift;
        const double alp = std::abs(lp);
        if (first_p || alp < std::abs(sum.delta0)) {
          sum.delta0 = alp;
          sum.mode_at_min = {m, n, s};
          first_p = false;
        }
        if (lp != 0.0) {
          const double d = l6 / lp - 1.0;
          if (first_d) {
            sum.d_min = sum.d_max = d;
            first_d = false;
          } else {
            sum.d_min = std::min(sum.d_min, d);
            sum.d_max = std::max(sum.d_max, d);
          }
        }
      }
    }
  }
  sum.delta0 /= h * h;
  return sum;
}

}  // namespace

SpectrumSummary spectrum_summary(int N, double k, double h) {
  return scan(N, k, h, true);
}

SpectrumSummary spectrum_summary_brute(int N, double k, double h) {
  return scan(N, k, h, false);
}

Delta0Estimate estimate_delta0(double k, double h) {
  Delta0Estimate est;
  if (k * k < 9.0) {
    est.value = 1.0 / 3.0;
    return est;
  }
  const double j0 = std::floor(2.0 * std::asin(0.5 * k * h) / (kPi * h));
  const double j1 = j0 + 1.0;
  const double lo = k * k - j0 * j0 * kPi * kPi;
  const double j1p = j1 * kPi;
  const double hi = j1 * j1 * kPi * kPi - k * k -
                    (1.0 / 12.0) * j1p * j1p * j1p * j1p * h * h;
  est.value = std::min(lo, hi);
  est.resonant = est.value <= 0.0;
  return est;
}

}  // namespace helm
