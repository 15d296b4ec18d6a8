#include "gsc/dynamics.hpp"

#include <cmath>

#include "gsc/errors.hpp"
#include "gsc/so3.hpp"

namespace gsc {

void QuadParams::validate() const {
    if (!(m > 0.0) || !(arm > 0.0) || !(b_t > 0.0)) {
        throw ConfigError("QuadParams: m, arm, b_t must be positive");
    }
    if ((inertia - inertia.transpose()).norm() > 1e-12) {
        throw ConfigError("QuadParams: inertia matrix must be symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(inertia);
    if (eig.eigenvalues().minCoeff() <= 0.0) {
        throw ConfigError("QuadParams: inertia matrix must be positive-definite");
    }
}

StateDerivative state_derivative(const RigidBodyState& s,
                                 const ControlOutput& c,
                                 const QuadParams& p) {
    if (std::abs(p.inertia.determinant()) < 1e-15) {
        throw SingularInertia("state_derivative: inertia matrix not invertible");
    }
    StateDerivative d;
    d.x_dot = s.v;
    d.v_dot = (-p.m * p.g * Eigen::Vector3d::UnitZ() +
               c.f * s.r * Eigen::Vector3d::UnitZ()) /
              p.m;
    d.omega_dot =
        p.inertia.inverse() * (c.u - s.omega.cross(p.inertia * s.omega));
    d.r_dot = s.r * hat(s.omega);
    return d;
}

namespace {

RigidBodyState axpy(const RigidBodyState& s, double h, const StateDerivative& d) {
    RigidBodyState out;
    out.x = s.x + h * d.x_dot;
    out.v = s.v + h * d.v_dot;
    out.r = s.r + h * d.r_dot;  // off-manifold intermediate, projected later
    out.omega = s.omega + h * d.omega_dot;
    return out;
}

bool exceeds_guard(const RigidBodyState& s) {
    const double guard = 1e9;
    return !s.x.allFinite() || !s.v.allFinite() || !s.omega.allFinite() ||
           !s.r.allFinite() || s.x.cwiseAbs().maxCoeff() > guard ||
           s.v.cwiseAbs().maxCoeff() > guard ||
           s.omega.cwiseAbs().maxCoeff() > guard;
}

}  // namespace

RigidBodyState step(const RigidBodyState& s, const ControlOutput& c,
                    const QuadParams& p, double dt) {
    const StateDerivative k1 = state_derivative(s, c, p);
    const StateDerivative k2 = state_derivative(axpy(s, 0.5 * dt, k1), c, p);
    const StateDerivative k3 = state_derivative(axpy(s, 0.5 * dt, k2), c, p);
    const StateDerivative k4 = state_derivative(axpy(s, dt, k3), c, p);

    RigidBodyState out;
    out.x = s.x + dt / 6.0 * (k1.x_dot + 2.0 * k2.x_dot + 2.0 * k3.x_dot + k4.x_dot);
    out.v = s.v + dt / 6.0 * (k1.v_dot + 2.0 * k2.v_dot + 2.0 * k3.v_dot + k4.v_dot);
    out.omega = s.omega + dt / 6.0 * (k1.omega_dot + 2.0 * k2.omega_dot +
                                      2.0 * k3.omega_dot + k4.omega_dot);
    out.r = project_to_so3(
        s.r + dt / 6.0 * (k1.r_dot + 2.0 * k2.r_dot + 2.0 * k3.r_dot + k4.r_dot));

    if (exceeds_guard(out)) {
        throw NumericalBlowup("step: state component exceeded 1e9");
    }
    return out;
}

}  // namespace gsc
