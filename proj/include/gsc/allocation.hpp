#pragma once

#include <Eigen/Dense>

#include "gsc/controllers.hpp"
#include "gsc/dynamics.hpp"

namespace gsc {

/// Per-rotor thrust limits, barrier shape, and secondary-task weights.
struct AllocationConfig {
    double f_min = 0.0;    ///< lower thrust limit [N]
    double f_idl = 0.0;    ///< idle setpoint, 0 selects hover share m g / 4 [N]
    double f_max = 20.0;   ///< upper thrust limit [N]
    double k_h1 = 2.0;     ///< barrier gain below idle
    double k_h2 = 3.0;     ///< barrier gain above idle
    double k_xi = 0.0028;  ///< secondary-task surface gain
    Eigen::Vector3d iota = {1.0, 1.0, 2.3};  ///< secondary-task axis weights
    double gradient_step = 0.0;   ///< barrier accumulation step, 0 selects dt [s]
    double gradient_clamp = 1e4;  ///< limit on barrier gradient components

    /// Throws ConfigError unless 0 <= f_min < f_idl < f_max (after
    /// resolving the idle default against p).
    void validate(const QuadParams& p) const;

    double idle(const QuadParams& p) const {
        return f_idl > 0.0 ? f_idl : p.m * p.g / 4.0;
    }
};

/// Running state of the constrained allocator; reset on flight-mode entry.
struct AllocatorState {
    Eigen::Vector4d xi_accum = Eigen::Vector4d::Zero();  ///< barrier integral
    Eigen::Vector4d last_thrusts = Eigen::Vector4d::Zero();

    void reset(const AllocationConfig& cfg, const QuadParams& p);
};

/// Thrust distribution matrix of the plus-configuration rotor layout,
///   (f; u) = M F,  rows: total thrust, roll, pitch, yaw,
/// and its inverse.
struct Mixer {
    Eigen::Matrix4d forward;
    Eigen::Matrix4d inverse;
};

Mixer mixer_matrix(const QuadParams& p);

/// Moment rows of the distribution matrix (3x4), full row rank.
Eigen::Matrix<double, 3, 4> moment_rows(const QuadParams& p);

/// Moore-Penrose right inverse A^T (A A^T)^-1 of the moment rows.
Eigen::Matrix<double, 4, 3> moment_pseudoinverse(const QuadParams& p);

/// Barrier cost for one rotor: zero at the idle setpoint, diverging at
/// both thrust limits; evaluated on |f| (tangent-squared branch below
/// idle, quadratic-plus-pole branch above). Throws OutOfBarrierDomain
/// outside f_min < |f| < f_max.
double barrier_value(double f, const AllocationConfig& cfg,
                     const QuadParams& p);

/// Total barrier cost H(F) = sum_i h(f_i).
double barrier_cost(const Eigen::Vector4d& thrusts,
                    const AllocationConfig& cfg, const QuadParams& p);

/// Component-wise gradient dH/df_i. Throws OutOfBarrierDomain if any
/// component is outside the open interval.
Eigen::Vector4d barrier_gradient(const Eigen::Vector4d& thrusts,
                                 const AllocationConfig& cfg,
                                 const QuadParams& p);

/// Secondary-task thrust magnitude
///   f_p = (diag(iota) (m g E3 - m (k_x/k_v) e_v - k_xi s_x + m xddot_d))^T R e3.
double secondary_thrust_fp(const RigidBodyState& s,
                           const PositionErrorState& e,
                           const Eigen::Vector3d& xddot_d,
                           const GainSet& gains, const QuadParams& p);

/**
 * Constraint-aware thrust allocation for the attitude-controlled mode:
 *
 *   F = A# u + (I - A# A) xi
 *
 * The null-space term cannot perturb the commanded moment (A F = u holds
 * for any xi). xi combines the accumulated barrier descent with the
 * secondary-task thrust routed through the mixer inverse:
 *
 *   xi = xi_accum + M^-1 (f_p; 0; 0; 0)
 *
 * xi_accum integrates -grad H at the previous step's realized thrusts
 * (rectangle rule, one-step lag); components outside the barrier domain
 * contribute the clamp value with the sign that steers the thrust back
 * inside. Advances st.
 */
Eigen::Vector4d allocate_with_constraints(
    const Eigen::Vector3d& moment, const RigidBodyState& s,
    const Eigen::Vector3d& x_d, const Eigen::Vector3d& xdot_d,
    const Eigen::Vector3d& xddot_d, const GainSet& gains, const QuadParams& p,
    const AllocationConfig& cfg, AllocatorState& st, double dt,
    bool with_fp = true);

/// Direct distribution F = M^-1 (f; u) used in the position mode.
Eigen::Vector4d position_mode_thrusts(double f, const Eigen::Vector3d& moment,
                                      const Mixer& mixer);

}  // namespace gsc
