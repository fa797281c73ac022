/// \file spectra.hpp
/// \brief Closed-form eigenvalues of the sixth-order operator A6 and the
///        preconditioner A2 for all-Dirichlet problems, preconditioned
///        spectrum bounds, and the delta0 spectral-gap estimate.
#pragma once

#include <array>

#include "helm/core.hpp"

namespace helm {

enum class Which { A6, A2 };

/// 1D eigenvalue, j = 1..N, h = 1/(N+1):
///   A2: -4 sin^2(j pi h / 2) + h^2 k^2
///   A6: the same minus h^4 k^4 (14 + cos(j pi h)) / 180.
double eig_1d(int j, int N, double k, double h, Which which);

/// 3D all-Dirichlet eigenvalue for mode (m, n, s), each 1..N, h = 1/(N+1),
/// with S_r = sin(r pi h / 2):
///   A2: -4 (S_m^2 + S_n^2 + S_s^2) + h^2 k^2
///   A6: A2 + (8/3)(1 + h^2k^2/30)(S_m^2 S_n^2 + S_m^2 S_s^2 + S_n^2 S_s^2)
///        - (32/15) S_m^2 S_n^2 S_s^2 - h^4k^4/12 + h^6k^6/360.
double eig_3d(int m, int n, int s, int N, double k, double h, Which which);

/// Preconditioned-spectrum summary over all N^3 all-Dirichlet mode triples.
///
/// d = lambda(A6) / lambda(A2) - 1 per mode; d_min/d_max are its extremes.
/// The Chebyshev interval is (m_hat, M_hat) = (d_min, d_max), admissible when
/// 1 + d_min > 0.  The printed-table pair is (-d_max, -d_min), the extremes
/// of 1 - lambda/lambda_p.  delta0 is the spectral gap min |lambda(A2)| / h^2
/// with its attaining mode triple.
struct SpectrumSummary {
  double d_min = 0.0;  ///< min lambda/lambda_p - 1 (Chebyshev m_hat)
  double d_max = 0.0;  ///< max lambda/lambda_p - 1 (Chebyshev M_hat)
  double delta0 = 0.0;  ///< min |lambda_p| / h^2
  std::array<int, 3> mode_at_min{};  ///< mode attaining delta0
};

/// Symmetry-reduced exhaustive scan (m <= n <= s); the eigenvalues are
/// permutation symmetric so the extremes are exact.
SpectrumSummary spectrum_summary(int N, double k, double h);

/// Full-product scan over all N^3 triples; oracle for the reduced scan.
SpectrumSummary spectrum_summary_brute(int N, double k, double h);

/// Analytic spectral-gap estimate:
///   k^2 < 9            -> delta0 = 1/3;
///   otherwise j0 = floor(2 asin(kh/2) / (pi h)), j1 = j0 + 1,
///   delta0 = min(k^2 - j0^2 pi^2,
///                j1^2 pi^2 - k^2 - (1/12)(j1 pi)^4 h^2).
/// A nonpositive bracket means k^2 is too close to the discrete spectrum at
/// this h; `resonant` flags it (value is still returned as computed).
struct Delta0Estimate {
  double value = 0.0;
  bool resonant = false;
};

Delta0Estimate estimate_delta0(double k, double h);

}  // namespace helm
