#include "emscat/linalg.hpp"

#include <cstdlib>
#include <vector>

#ifndef lapack_complex_double
#define lapack_complex_double std::complex<double>
#endif
#include <lapacke.h>

namespace emscat {

namespace {

// BLAS threading is pinned before the first factorization so that results
// do not depend on the environment the binary happens to run in.
const bool blas_pinned = [] {
  setenv("OPENBLAS_NUM_THREADS", "1", 0);
  setenv("OMP_NUM_THREADS", "1", 0);
  return true;
}();

}  // namespace

DenseSolution solve_dense(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& b,
                          const DenseSolveOptions& opts) {
  (void)blas_pinned;
  const lapack_int n = static_cast<lapack_int>(a.rows());
  if (a.cols() != n || b.size() != n)
    throw std::invalid_argument("solve_dense: shape mismatch");

  DenseSolution sol;
  if (n == 0) {
    sol.x.resize(0);
    return sol;
  }

  Eigen::MatrixXcd lu = a;  // column-major, LAPACK-compatible
  const double anorm = lu.cwiseAbs().colwise().sum().maxCoeff();
  std::vector<lapack_int> ipiv(n);
  lapack_int info = LAPACKE_zgetrf(LAPACK_COL_MAJOR, n, n, lu.data(), n, ipiv.data());
  if (info > 0) throw NumericalError("solve_dense: matrix is singular (zero pivot)");
  if (info < 0) throw NumericalError("solve_dense: zgetrf invalid argument");

  if (opts.estimate_condition) {
    double rcond = 0.0;
    info = LAPACKE_zgecon(LAPACK_COL_MAJOR, '1', n, lu.data(), n, anorm, &rcond);
    if (info != 0) throw NumericalError("solve_dense: zgecon failed");
    sol.rcond = rcond;
    if (rcond < opts.rcond_limit)
      throw NumericalError("solve_dense: matrix too ill-conditioned (rcond " +
                           std::to_string(rcond) + ")");
  }

  sol.x = b;
  info = LAPACKE_zgetrs(LAPACK_COL_MAJOR, 'N', n, 1, lu.data(), n, ipiv.data(),
                        sol.x.data(), n);
  if (info != 0) throw NumericalError("solve_dense: zgetrs failed");

  const double bnorm = b.norm();
  sol.residual = bnorm > 0.0 ? (a * sol.x - b).norm() / bnorm : 0.0;
  return sol;
}

}  // namespace emscat
