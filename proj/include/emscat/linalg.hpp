#ifndef EMSCAT_LINALG_HPP
#define EMSCAT_LINALG_HPP

#include "emscat/types.hpp"

namespace emscat {

struct DenseSolveOptions {
  double rcond_limit = 1e-13;  // reject factorizations with rcond below this
  bool estimate_condition = true;
};

struct DenseSolution {
  Eigen::VectorXcd x;
  double residual = 0.0;  // ||Ax - b|| / ||b||
  double rcond = 1.0;     // LAPACK 1-norm reciprocal condition estimate
};

/// LU solve with partial pivoting (LAPACK zgetrf/zgecon/zgetrs).
/// Throws NumericalError on singular or out-of-tolerance matrices.
DenseSolution solve_dense(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& b,
                          const DenseSolveOptions& opts = {});

}  // namespace emscat

#endif
