#pragma once

#include <Eigen/Dense>

namespace gsc {

/// Physical parameters of the vehicle.
struct QuadParams {
    double m = 1.34;                 ///< total mass [kg]
    Eigen::Matrix3d inertia =        ///< inertia matrix in the body frame [kg m^2]
        (Eigen::Matrix3d() << 0.072, 0, 0, 0, 0.0734, 0, 0, 0, 0.1477)
            .finished();
    double arm = 0.30;               ///< CM-to-motor-axis distance [m]
    double b_t = 9.001e-3;           ///< torque coefficient [m]
    double g = 9.81;                 ///< gravity [m/s^2]

    /// Throws ConfigError unless m, arm, b_t > 0 and the inertia matrix is
    /// symmetric positive-definite.
    void validate() const;
};

/// Rigid-body state: the tuple (x, v, R, omega).
struct RigidBodyState {
    Eigen::Vector3d x = Eigen::Vector3d::Zero();     ///< position, inertial [m]
    Eigen::Vector3d v = Eigen::Vector3d::Zero();     ///< velocity, inertial [m/s]
    Eigen::Matrix3d r = Eigen::Matrix3d::Identity(); ///< body-to-inertial rotation
    Eigen::Vector3d omega = Eigen::Vector3d::Zero(); ///< angular velocity, body [rad/s]
};

/// Realized control: total thrust, body moment, and per-rotor thrusts,
/// related by (f; u) = M F with M the thrust distribution matrix.
struct ControlOutput {
    double f = 0.0;                                   ///< total thrust [N]
    Eigen::Vector3d u = Eigen::Vector3d::Zero();      ///< body moment [N m]
    Eigen::Vector4d thrusts = Eigen::Vector4d::Zero();///< per-rotor thrusts [N]
};

struct StateDerivative {
    Eigen::Vector3d x_dot;
    Eigen::Vector3d v_dot;
    Eigen::Matrix3d r_dot;
    Eigen::Vector3d omega_dot;
};

/// Equations of motion:
///   x_dot = v
///   m v_dot = -m g E3 + f R e3
///   J w_dot = u - w x J w
///   R_dot = R hat(w)
/// Throws SingularInertia if the inertia matrix is not invertible.
StateDerivative state_derivative(const RigidBodyState& s,
                                 const ControlOutput& c,
                                 const QuadParams& p);

/// Advances the state one fixed step with classical 4th-order
/// Runge-Kutta (control held constant over the step), then projects R
/// back onto the rotation group. Throws NumericalBlowup if any state
/// component exceeds 1e9 in magnitude.
RigidBodyState step(const RigidBodyState& s, const ControlOutput& c,
                    const QuadParams& p, double dt);

}  // namespace gsc
