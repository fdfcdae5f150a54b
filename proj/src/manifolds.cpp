#include "rpd/manifolds.hpp"

#include <Eigen/SVD>

namespace rpd {
namespace so3 {

Eigen::Matrix3d project_to_rotation(const Eigen::Matrix3d& M) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(
      M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d U = svd.matrixU();
  const Eigen::Matrix3d V = svd.matrixV();
  if (U.determinant() * V.determinant() < 0.0) {
    U.col(2) *= -1.0;  // flip the smallest singular direction to reach det +1
  }
  return U * V.transpose();
}

}  // namespace so3
}  // namespace rpd
