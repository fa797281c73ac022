/// \file report.hpp
/// \brief Experiment runner and table emitters: benchmark tables over
///        (k, h, method) grids, the eigenvalue-bounds table, and the psi
///        study, written as CSV (machine) plus Markdown (human).
#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "helm/core.hpp"

namespace helm {

struct ExperimentSpec {
  std::string problem;               ///< catalog family name
  std::vector<cplx> ks;              ///< wavenumbers
  std::vector<double> hs;            ///< grid steps, descending
  std::vector<std::string> methods;  ///< subset of {gmres, sks, chebyshev}
  double tol = 1e-10;
  int max_iter = 100;
  std::string format = "csv";  ///< "csv", "markdown", or "both"
  std::string out;             ///< output path stem; empty = stdout
  double mem_budget_gib = 8.0;
  unsigned seed = 12345;
};

/// Parses a flat key = value spec file ("#" comments; lists space-separated;
/// h values may be fractions like 1/64; complex k like 35.7+0.43i).
ExperimentSpec parse_spec_file(const std::string& path);
/// Applies one "key=value" override (same grammar as the file).
void apply_override(ExperimentSpec& spec, const std::string& key,
                    const std::string& value);

/// One emitted table cell row (per k, h): iteration counts per method (or
/// "div" / ">max" / "ppw" / "mem"), sixth- and second-order max errors,
/// observed order, and wall times.
struct TableRow {
  cplx k{};
  double h = 0.0;
  std::vector<std::string> iter_cells;
  std::optional<double> err6, err2, order6;
  double wall_s = 0.0;
};

struct TableResult {
  std::vector<std::string> methods;
  std::vector<TableRow> rows;            ///< grouped by k, h descending
  std::vector<std::pair<cplx, double>> psi_rows;  ///< per-k psi estimates
};

/// Runs a benchmark-table spec.  Resonance errors propagate; per-cell
/// failures (points-per-wavelength guard, memory budget) are reported in the
/// cell, not fatal.
TableResult run_table(const ExperimentSpec& spec);

/// Serializes (6 significant digits, complex as re+imi, fixed headers,
/// deterministic bytes).
std::string table_csv(const TableResult& t);
std::string table_markdown(const TableResult& t);

/// Eigenvalue-bounds table: bound pairs for k in {10..50} x h in
/// {1/64..1/512}, plus the spectral-gap row at the per-column h1 and the h1
/// row itself.
struct SpectrumTable {
  std::vector<double> ks;
  std::vector<double> hs;
  /// pairs[i][j]: (bound_lo, bound_hi) for ks[i], hs[j]
  std::vector<std::vector<std::pair<double, double>>> pairs;
  std::vector<double> h1;      ///< per-k h1
  std::vector<double> delta0;  ///< per-k scan delta0 at h1
};

SpectrumTable run_spectrum_table();
std::string spectrum_csv(const SpectrumTable& t);
std::string spectrum_markdown(const SpectrumTable& t);

/// Formats a double with 6 significant digits (printf %.6g).
std::string fmt_g6(double v);
/// Formats a complex value as re+imi (imaginary part omitted when zero).
std::string fmt_cplx(cplx v);
/// Parses "1/64"-style fractions or plain decimals.
double parse_h(const std::string& s);
/// Parses "re", "re+imi", or "re-imi".
cplx parse_cplx(const std::string& s);

}  // namespace helm
