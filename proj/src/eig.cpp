#include "lrf/eig.hpp"

#include <stdexcept>

#include <lapacke.h>

namespace lrf {

void eig_hermitian(Eigen::MatrixXcd& a, Eigen::VectorXd& evals, bool vectors) {
  const lapack_int n = lapack_int(a.rows());
  evals.resize(n);
  if (n == 0) return;
  lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'L', n,
                                   reinterpret_cast<lapack_complex_double*>(a.data()), n, evals.data());
  if (info != 0) throw std::runtime_error("zheevd failed with info " + std::to_string(info));
}

void eig_symmetric(Eigen::MatrixXd& a, Eigen::VectorXd& evals, bool vectors) {
  const lapack_int n = lapack_int(a.rows());
  evals.resize(n);
  if (n == 0) return;
  lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'L', n, a.data(), n, evals.data());
  if (info != 0) throw std::runtime_error("dsyevd failed with info " + std::to_string(info));
}

}  // namespace lrf
