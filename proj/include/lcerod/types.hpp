#ifndef LCEROD_TYPES_HPP
#define LCEROD_TYPES_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace lcerod {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec5 = Eigen::Matrix<double, 5, 1>;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat35 = Eigen::Matrix<double, 3, 5>;
using Mat5 = Eigen::Matrix<double, 5, 5>;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;
using SparseMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

} // namespace lcerod

#endif
