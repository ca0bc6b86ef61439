#include "jetflow/linalg.hpp"

#include <Eigen/Dense>

namespace jetflow {

static Eigen::MatrixXd to_eigen(const Mat& m) {
    Eigen::MatrixXd e(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
    return e;
}

Vec symmetric_eigenvalues(const Mat& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(to_eigen(m));
    if (solver.info() != Eigen::Success)
        throw GeometryError("symmetric eigenvalue solve failed");
    Vec out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) out[i] = solver.eigenvalues()(i);
    return out;
}

std::pair<int, int> symmetric_eigen_signs(const Mat& m, double tol) {
    int pos = 0, neg = 0;
    for (double ev : symmetric_eigenvalues(m)) {
        if (ev > tol) ++pos;
        else if (ev < -tol) ++neg;
    }
    return {pos, neg};
}

} // namespace jetflow
