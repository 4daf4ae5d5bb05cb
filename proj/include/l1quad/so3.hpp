#pragma once

#include "l1quad/types.hpp"

namespace l1quad {

/// Skew-symmetric (cross-product) matrix of v, so that hat(v) * w == v.cross(w).
Mat3 hat(const Vec3& v);

/// Inverse of hat. Throws Error(NotSkew) when ||M + M^T||_F exceeds 1e-9.
Vec3 vee(const Mat3& m);

/// Rotation error function tr(I - Rd^T R) / 2, in [0, 2].
double attitude_error_psi(const Mat3& r, const Mat3& rd);

/// e_R = (Rd^T R - R^T Rd)^vee / 2.
Vec3 rotation_error(const Mat3& r, const Mat3& rd);

/// e_Omega = Omega - R^T Rd Omega_d.
Vec3 angular_velocity_error(const Vec3& omega, const Mat3& r, const Mat3& rd, const Vec3& omega_d);

/// Nearest rotation in Frobenius norm (polar factor). Throws Error(Degenerate)
/// if any singular value of the input is below 1e-6.
Mat3 orthonormalize(const Mat3& m);

/// Closed-form rotation exponential (Rodrigues) of the rotation vector phi.
Mat3 exp_map(const Vec3& phi);

/// Rotation by `angle` radians about `axis` (normalized internally).
Mat3 rotation_about(const Vec3& axis, double angle);

/// True when ||R^T R - I||_F <= tol and |det R - 1| <= tol.
bool is_rotation(const Mat3& r, double tol = 1e-9);

}  // namespace l1quad
