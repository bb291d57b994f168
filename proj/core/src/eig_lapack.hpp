#pragma once

#include <Eigen/Dense>

namespace projcool::detail {

struct SymmetricEigen {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // columns
};

/// Eigendecomposition of a real symmetric matrix (LAPACK dsyevd).
SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& m);

}  // namespace projcool::detail
