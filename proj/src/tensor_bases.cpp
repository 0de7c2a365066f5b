#include "lcerod/tensor_bases.hpp"

#include <cmath>
#include <stdexcept>

namespace lcerod {

namespace {
constexpr double kTol = 1e-12;

Mat3 outer(int i, int j) {
  Mat3 m = Mat3::Zero();
  m(i, j) = 1.0;
  return m;
}

std::array<Mat3, 3> make_skew_basis() {
  const double s = 1.0 / std::sqrt(2.0);
  std::array<Mat3, 3> K;
  K[0] = s * (outer(1, 2) - outer(2, 1));
  K[1] = s * (outer(0, 1) - outer(1, 0));
  K[2] = s * (outer(0, 2) - outer(2, 0));
  return K;
}

std::array<Mat3, 5> make_dev_basis() {
  const double s2 = std::sqrt(2.0);
  std::array<Mat3, 5> U;
  U[0] = s2 * 0.5 * (outer(2, 1) + outer(1, 2));
  U[1] = s2 * 0.5 * (outer(1, 0) + outer(0, 1));
  U[2] = s2 * 0.5 * (outer(2, 0) + outer(0, 2));
  U[3] = std::sqrt(2.0 / 3.0) * (outer(0, 0) - 0.5 * outer(1, 1) - 0.5 * outer(2, 2));
  U[4] = (1.0 / s2) * (outer(1, 1) - outer(2, 2));
  return U;
}
} // namespace

const std::array<Mat3, 3>& skew_basis() {
  static const std::array<Mat3, 3> K = make_skew_basis();
  return K;
}

const std::array<Mat3, 5>& dev_basis() {
  static const std::array<Mat3, 5> U = make_dev_basis();
  return U;
}

Mat3 dev_of_director(const Vec3& nhat) {
  if (std::abs(nhat.norm() - 1.0) > kTol)
    throw std::invalid_argument("dev_of_director: director is not unit length");
  return Mat3::Identity() / 3.0 - nhat * nhat.transpose();
}

DevVector dev_coords(const Mat3& U) {
  if ((U - U.transpose()).norm() > kTol)
    throw std::invalid_argument("dev_coords: matrix is not symmetric");
  if (std::abs(U.trace()) > kTol)
    throw std::invalid_argument("dev_coords: matrix has nonzero trace");
  const auto& B = dev_basis();
  DevVector out;
  for (int j = 0; j < 5; ++j) out.u[j] = 0.5 * U.cwiseProduct(B[j]).sum();
  return out;
}

Mat3 dev_reconstruct(const DevVector& u) {
  const auto& B = dev_basis();
  Mat3 U = Mat3::Zero();
  for (int j = 0; j < 5; ++j) U += 2.0 * u.u[j] * B[j];
  return U;
}

SkewVector skew_coords(const Mat3& K) {
  if ((K + K.transpose()).norm() > kTol)
    throw std::invalid_argument("skew_coords: matrix is not skew-symmetric");
  const auto& B = skew_basis();
  SkewVector out;
  for (int i = 0; i < 3; ++i) out.k[i] = K.cwiseProduct(B[i]).sum();
  return out;
}

Mat3 skew_reconstruct(const SkewVector& k) {
  const auto& B = skew_basis();
  Mat3 K = Mat3::Zero();
  for (int i = 0; i < 3; ++i) K += k.k[i] * B[i];
  return K;
}

Vec5 dev_coords_of_director(const Vec3& nhat) {
  const auto& B = dev_basis();
  Vec5 u;
  for (int j = 0; j < 5; ++j) u[j] = -0.5 * nhat.dot(B[j] * nhat);
  return u;
}

Eigen::Matrix<double, 3, 5> dev_coords_gradient(const Vec3& nhat) {
  const auto& B = dev_basis();
  Eigen::Matrix<double, 3, 5> g;
  for (int j = 0; j < 5; ++j) g.col(j) = -B[j] * nhat;
  return g;
}

} // namespace lcerod
