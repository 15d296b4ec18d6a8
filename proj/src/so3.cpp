#include "gsc/so3.hpp"

#include <cmath>

#include "gsc/errors.hpp"

namespace gsc {

Eigen::Matrix3d hat(const Eigen::Vector3d& v) {
    Eigen::Matrix3d m;
    m << 0.0, -v.z(), v.y(),
         v.z(), 0.0, -v.x(),
        -v.y(), v.x(), 0.0;
    return m;
}

Eigen::Vector3d vee(const Eigen::Matrix3d& m) {
    const double skew_defect = (m + m.transpose()).norm();
    if (skew_defect > 1e-9) {
        throw NonSkew("vee: matrix is not skew-symmetric, ||M+M^T|| = " +
                      std::to_string(skew_defect));
    }
    return {m(2, 1), m(0, 2), m(1, 0)};
}

Eigen::Vector3d vee_skew_part(const Eigen::Matrix3d& m) {
    const Eigen::Matrix3d s = 0.5 * (m - m.transpose());
    return {s(2, 1), s(0, 2), s(1, 0)};
}

double psi_error(const Eigen::Matrix3d& r, const Eigen::Matrix3d& r_d) {
    return 0.5 * (Eigen::Matrix3d::Identity() - r_d.transpose() * r).trace();
}

Eigen::Vector3d attitude_error_vector(const Eigen::Matrix3d& r,
                                      const Eigen::Matrix3d& r_d) {
    const Eigen::Matrix3d q = r_d.transpose() * r;
    return 0.5 * vee_skew_part(q - q.transpose());
}

Eigen::Vector3d angular_velocity_error(const Eigen::Matrix3d& r,
                                       const Eigen::Vector3d& omega,
                                       const Eigen::Matrix3d& r_d,
                                       const Eigen::Vector3d& omega_d) {
    return omega - r.transpose() * r_d * omega_d;
}

Eigen::Matrix3d error_jacobian(const Eigen::Matrix3d& r,
                               const Eigen::Matrix3d& r_d) {
    const Eigen::Matrix3d q = r.transpose() * r_d;
    return 0.5 * (q.trace() * Eigen::Matrix3d::Identity() - q);
}

Eigen::Vector3d feedforward_ad(const Eigen::Matrix3d& r,
                               const Eigen::Vector3d& omega,
                               const Eigen::Matrix3d& r_d,
                               const Eigen::Vector3d& omega_d,
                               const Eigen::Vector3d& omega_d_dot) {
    const Eigen::Matrix3d q = r.transpose() * r_d;
    return hat(omega) * q * omega_d - q * omega_d_dot;
}

bool psi_bounds_check(double psi, const Eigen::Vector3d& e_r, double psi_cap) {
    if (!(psi_cap > 0.0 && psi_cap < 2.0)) {
        throw DomainViolation("psi_bounds_check: cap must lie in (0, 2)");
    }
    if (psi >= psi_cap) {
        throw DomainViolation("psi_bounds_check: psi = " + std::to_string(psi) +
                              " >= cap " + std::to_string(psi_cap));
    }
    const double n2 = e_r.squaredNorm();
    const double tol = 1e-9;
    return 0.5 * n2 <= psi + tol && psi <= n2 / (2.0 - psi_cap) + tol;
}

Eigen::Matrix3d exp_hat(const Eigen::Vector3d& v) {
    const double angle = v.norm();
    if (angle < 1e-12) {
        return Eigen::Matrix3d::Identity() + hat(v);
    }
    const Eigen::Matrix3d k = hat(v / angle);
    return Eigen::Matrix3d::Identity() + std::sin(angle) * k +
           (1.0 - std::cos(angle)) * k * k;
}

Eigen::Matrix3d axis_angle(const Eigen::Vector3d& axis, double angle) {
    return exp_hat(axis.normalized() * angle);
}

Eigen::Matrix3d project_to_so3(const Eigen::Matrix3d& m) {
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(
        m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix3d r = svd.matrixU() * svd.matrixV().transpose();
    if (r.determinant() < 0.0) {
        // Reflection: flip the axis of the smallest singular value.
        Eigen::Matrix3d flip = Eigen::Matrix3d::Identity();
        flip(2, 2) = -1.0;
        r = svd.matrixU() * flip * svd.matrixV().transpose();
    }
    return r;
}

bool is_rotation(const Eigen::Matrix3d& r, double tol) {
    const double ortho =
        (r.transpose() * r - Eigen::Matrix3d::Identity()).norm();
    return ortho <= tol && std::abs(r.determinant() - 1.0) <= tol;
}

}  // namespace gsc
