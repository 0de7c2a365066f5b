#ifndef LCEROD_TENSOR_BASES_HPP
#define LCEROD_TENSOR_BASES_HPP

#include "lcerod/types.hpp"

#include <array>

namespace lcerod {

// Orthonormal bases (Frobenius) of the skew-symmetric and the trace-free
// symmetric (deviatoric) 3x3 matrices, and the coordinate maps between
// matrices and their basis coefficients.

/// Coordinates u_j = (1/2) U : U_j of a deviatoric matrix.
struct DevVector {
  Vec5 u;
};

/// Coordinates k_i = K : K_i of a skew matrix.
struct SkewVector {
  Vec3 k;
};

const std::array<Mat3, 3>& skew_basis();
const std::array<Mat3, 5>& dev_basis();

/// U(n) = I/3 - n (x) n for a unit director n. Throws if |n| != 1 (tol 1e-12).
Mat3 dev_of_director(const Vec3& nhat);

/// Coordinates of a symmetric trace-free matrix. Throws on asymmetric or
/// traced input (tol 1e-12).
DevVector dev_coords(const Mat3& U);

/// Inverse of dev_coords: sum_j 2 u_j U_j.
Mat3 dev_reconstruct(const DevVector& u);

/// Coordinates of a skew matrix (tol 1e-12) and its inverse.
SkewVector skew_coords(const Mat3& K);
Mat3 skew_reconstruct(const SkewVector& k);

/// dev_coords(dev_of_director(nhat)) without building the matrix; u_j = -n.U_j n / 2.
Vec5 dev_coords_of_director(const Vec3& nhat);

/// Gradient of u_j(nhat) with respect to nhat: column j is -U_j nhat.
Eigen::Matrix<double, 3, 5> dev_coords_gradient(const Vec3& nhat);

} // namespace lcerod

#endif
