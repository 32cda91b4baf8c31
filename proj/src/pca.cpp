#include "topo/pca.hpp"

#include <Eigen/Dense>

namespace topo {

Matrix pca_project_2d(const PointCloud& cloud)
{
    const auto n = static_cast<Eigen::Index>(cloud.size());
    const auto d = static_cast<Eigen::Index>(cloud.dim());
    Eigen::MatrixXd x(n, d);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            x(i, j) = cloud(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        }
    }
    x.rowwise() -= x.colwise().mean();
    const Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(n - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);

    Matrix out(cloud.size(), 2, 0.0);
    const Eigen::Index components = std::min<Eigen::Index>(2, d);
    for (Eigen::Index c = 0; c < components; ++c) {
        // eigenvalues ascend, so the leading axes are at the back
        Eigen::VectorXd axis = solver.eigenvectors().col(d - 1 - c);
        Eigen::Index largest = 0;
        axis.cwiseAbs().maxCoeff(&largest);
        if (axis(largest) < 0) {
            axis = -axis;
        }
        const Eigen::VectorXd projected = x * axis;
        for (Eigen::Index i = 0; i < n; ++i) {
            out(static_cast<std::size_t>(i), static_cast<std::size_t>(c)) = projected(i);
        }
    }
    return out;
}

} // namespace topo
