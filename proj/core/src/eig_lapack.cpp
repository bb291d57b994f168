#include "eig_lapack.hpp"

#include <lapacke.h>

#include <stdexcept>
#include <string>

namespace projcool::detail {

SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("symmetric_eigen: matrix not square");
    const lapack_int n = static_cast<lapack_int>(m.rows());
    SymmetricEigen out;
    out.vectors = m;  // overwritten with eigenvectors
    out.values.resize(n);
    if (n == 0) return out;
    const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, out.vectors.data(), n,
                                           out.values.data());
    if (info != 0)
        throw std::runtime_error("eigendecomposition failed: dsyevd info=" + std::to_string(info));
    return out;
}

}  // namespace projcool::detail
