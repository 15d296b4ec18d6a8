#pragma once

#include <Eigen/Dense>

namespace gsc {

/**
 * Rotation-group primitives and attitude-error geometry.
 *
 * Attitudes are full 3x3 rotation matrices (orthonormal, det +1); no
 * quaternion or Euler-angle representation is exposed. The error
 * quantities follow the standard geometric-control definitions:
 *
 *   psi(R, Rd)  = 1/2 tr[I - Rd^T R]            scalar attitude error
 *   e_R(R, Rd)  = 1/2 vee(Rd^T R - R^T Rd)      attitude error vector
 *   e_w         = w - R^T Rd w_d                angular velocity error
 *
 * with the identity ||e_R||^2 = (2 - psi) psi and 0 <= psi <= 4.
 */

/// Cross-product (hat) map: hat(v) w = v x w.
Eigen::Matrix3d hat(const Eigen::Vector3d& v);

/// Inverse of hat(). Throws NonSkew if ||M + M^T||_F > 1e-9.
Eigen::Vector3d vee(const Eigen::Matrix3d& m);

/// vee of the skew-symmetric part (M - M^T)/2; never throws.
Eigen::Vector3d vee_skew_part(const Eigen::Matrix3d& m);

/// Attitude error function 1/2 tr[I - Rd^T R], in [0, 4].
double psi_error(const Eigen::Matrix3d& r, const Eigen::Matrix3d& r_d);

/// Attitude error vector 1/2 vee(Rd^T R - R^T Rd).
Eigen::Vector3d attitude_error_vector(const Eigen::Matrix3d& r,
                                      const Eigen::Matrix3d& r_d);

/// Angular velocity error w - R^T Rd w_d (body frame).
Eigen::Vector3d angular_velocity_error(const Eigen::Matrix3d& r,
                                       const Eigen::Vector3d& omega,
                                       const Eigen::Matrix3d& r_d,
                                       const Eigen::Vector3d& omega_d);

/// Error Jacobian E(R, Rd) = 1/2 { tr[R^T Rd] I - R^T Rd }.
/// Satisfies d/dt e_R = E e_w and ||E||_2 <= 1.
Eigen::Matrix3d error_jacobian(const Eigen::Matrix3d& r,
                               const Eigen::Matrix3d& r_d);

/// Feedforward term a_d = hat(w) R^T Rd w_d - R^T Rd dw_d.
Eigen::Vector3d feedforward_ad(const Eigen::Matrix3d& r,
                               const Eigen::Vector3d& omega,
                               const Eigen::Matrix3d& r_d,
                               const Eigen::Vector3d& omega_d,
                               const Eigen::Vector3d& omega_d_dot);

/// Checks the two-sided psi bound
///   1/2 ||e_R||^2 <= psi <= ||e_R||^2 / (2 - psi_cap)
/// within 1e-9, valid while psi < psi_cap < 2.
/// Throws DomainViolation if psi >= psi_cap or psi_cap is not in (0, 2).
bool psi_bounds_check(double psi, const Eigen::Vector3d& e_r, double psi_cap);

/// Rodrigues exponential of hat(v).
Eigen::Matrix3d exp_hat(const Eigen::Vector3d& v);

/// Rotation about a (normalized) axis by the given angle in radians.
Eigen::Matrix3d axis_angle(const Eigen::Vector3d& axis, double angle);

/// Closest rotation matrix in the Frobenius norm (polar projection).
Eigen::Matrix3d project_to_so3(const Eigen::Matrix3d& m);

/// True when R^T R = I and det R = 1 within tol (Frobenius norm).
bool is_rotation(const Eigen::Matrix3d& r, double tol = 1e-9);

}  // namespace gsc
