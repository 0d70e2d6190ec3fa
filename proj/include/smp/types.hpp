// Common dense/sparse linear algebra aliases.

#ifndef SMP_TYPES_HPP
#define SMP_TYPES_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace smp {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat9 = Eigen::Matrix<double, 9, 9>;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

}  // namespace smp

#endif
