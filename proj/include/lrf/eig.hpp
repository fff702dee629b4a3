#pragma once

#include <Eigen/Dense>

namespace lrf {

// Dense Hermitian eigensolvers. A is overwritten with the eigenvectors when
// vectors are requested; eigenvalues come back ascending.
void eig_hermitian(Eigen::MatrixXcd& a, Eigen::VectorXd& evals, bool vectors);
void eig_symmetric(Eigen::MatrixXd& a, Eigen::VectorXd& evals, bool vectors);

}  // namespace lrf
