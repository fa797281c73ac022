/// \file selftest.hpp
/// \brief Oracle-equivalence suite: matrix-free operators vs dense assembly,
///        the fast A2 solver vs dense solves, and closed-form eigenvalues vs
///        dense eigendecompositions, across every boundary combination at
///        per-axis sizes 3..8.
#pragma once

#include <string>
#include <vector>

namespace helm {

struct SelftestResult {
  std::string name;
  bool pass = false;
  double worst = 0.0;  ///< worst relative deviation observed
  std::string detail;
};

/// Runs the whole suite (relative tolerance 1e-11).  Deterministic for a
/// fixed seed.
std::vector<SelftestResult> run_selftest(unsigned seed = 12345);

/// True iff every entry passed.
bool selftest_ok(const std::vector<SelftestResult>& results);

}  // namespace helm
