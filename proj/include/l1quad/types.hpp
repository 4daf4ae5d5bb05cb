#pragma once

#include <Eigen/Dense>

namespace l1quad {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat64 = Eigen::Matrix<double, 6, 4>;
using Mat62 = Eigen::Matrix<double, 6, 2>;

inline const Vec3 kE1 = Vec3::UnitX();
inline const Vec3 kE2 = Vec3::UnitY();
inline const Vec3 kE3 = Vec3::UnitZ();

}  // namespace l1quad
