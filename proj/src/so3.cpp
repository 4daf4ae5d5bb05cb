#include "l1quad/so3.hpp"

#include <cmath>

#include "l1quad/errors.hpp"

namespace l1quad {

Mat3 hat(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return m;
}

Vec3 vee(const Mat3& m) {
  if ((m + m.transpose()).norm() > 1e-9) {
    throw Error(ErrorCode::NotSkew, "matrix is not skew-symmetric");
  }
  return {m(2, 1), m(0, 2), m(1, 0)};
}

double attitude_error_psi(const Mat3& r, const Mat3& rd) {
  return 0.5 * (Mat3::Identity() - rd.transpose() * r).trace();
}

Vec3 rotation_error(const Mat3& r, const Mat3& rd) {
  const Mat3 rel = rd.transpose() * r;
  return 0.5 * vee(rel - rel.transpose());
}

Vec3 angular_velocity_error(const Vec3& omega, const Mat3& r, const Mat3& rd, const Vec3& omega_d) {
  return omega - r.transpose() * rd * omega_d;
}

Mat3 orthonormalize(const Mat3& m) {
  const Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.singularValues().minCoeff() < 1e-6) {
    throw Error(ErrorCode::Degenerate, "near-singular matrix cannot be projected onto SO(3)");
  }
  Mat3 u = svd.matrixU();
  const Mat3& v = svd.matrixV();
  if ((u * v.transpose()).determinant() < 0.0) {
    u.col(2) *= -1.0;
  }
  return u * v.transpose();
}

Mat3 exp_map(const Vec3& phi) {
  const double theta = phi.norm();
  const Mat3 k = hat(phi);
  if (theta < 1e-8) {
    // Second-order Taylor expansion; the truncation error is below machine precision here.
    return Mat3::Identity() + k + 0.5 * k * k;
  }
  const double a = std::sin(theta) / theta;
  const double b = (1.0 - std::cos(theta)) / (theta * theta);
  return Mat3::Identity() + a * k + b * k * k;
}

Mat3 rotation_about(const Vec3& axis, double angle) {
  return exp_map(axis.normalized() * angle);
}

bool is_rotation(const Mat3& r, double tol) {
  return (r.transpose() * r - Mat3::Identity()).norm() <= tol &&
         std::abs(r.determinant() - 1.0) <= tol;
}

}  // namespace l1quad
