/// \file oracle.hpp
/// \brief Desk-scale dense ground truth: literal dense assembly of A6 and A2
///        (independent stencil-walk and Kronecker constructions), dense
///        direct solves and eigendecompositions.  Test-only; guarded to 4096
///        unknowns.
#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "helm/core.hpp"

namespace helm {

enum class DenseWhich { A6, A2 };
enum class DenseHow { StencilWalk, Kronecker };

struct DenseOperator {
  Eigen::MatrixXcd m;
  std::string provenance;  ///< "stencil-walk" or "kronecker"
};

/// Dense assembly of the boundary-eliminated operator.  The Kronecker
/// construction is defined for all-Dirichlet problems only; the stencil walk
/// additionally covers Neumann/Sommerfeld rows.  Guard: unknowns <= 4096.
DenseOperator assemble_dense(const Problem& p, DenseWhich which,
                             DenseHow how = DenseHow::StencilWalk);

/// Dense RHS folding oracle: assembles the full right-hand side (volume
/// term, boundary source terms, Dirichlet folding) by literal row-by-row
/// substitution, independently of the pencil-optimized assembler.
Eigen::VectorXcd dense_rhs(const Problem& p, DenseWhich which);

Eigen::VectorXcd to_dense(const Field& f);
Field from_dense(const Eigen::VectorXcd& v, const Problem& p);

/// Partial-pivot dense solve; throws ConfigError for singular systems.
Eigen::VectorXcd dense_solve(const DenseOperator& op,
                             const Eigen::VectorXcd& rhs);

/// Dense eigenvalues sorted by real part (then imaginary part).
std::vector<cplx> dense_eigs(const DenseOperator& op);

}  // namespace helm
