#pragma once

#include <Eigen/Dense>
#include <functional>

#include "gsc/dynamics.hpp"

namespace gsc {

/// Gains of the surface-based controllers and the null-space strategy.
struct GainSet {
    double eta = 0.809261;   ///< surface convergence gain
    double k_r = 5625.0;     ///< attitude error gain
    double k_omega = 150.0;  ///< angular velocity error gain

    double a = 0.5540514;    ///< position surface gain
    double k_x = 900.0;      ///< position error gain
    double k_v = 60.0;       ///< velocity error gain

    double k_xi = 0.0028;    ///< secondary-task surface gain
    Eigen::Vector3d iota = {1.0, 1.0, 2.3};  ///< per-axis secondary-task weights
    double k_h1 = 2.0;       ///< barrier gain, lower branch
    double k_h2 = 3.0;       ///< barrier gain, upper branch

    /// Throws ConfigError unless every gain is strictly positive.
    void validate() const;
};

/// Gains of the benchmark geometric tracking controller (matrix attitude
/// gains, scalar position gains).
struct BenchmarkGains {
    Eigen::Matrix3d k_r =
        Eigen::Vector3d(259.2, 264.24, 531.72).asDiagonal();
    Eigen::Matrix3d k_omega =
        Eigen::Vector3d(8.64, 8.808, 17.724).asDiagonal();
    double k_x = 501.977;
    double k_v = 51.871;

    void validate() const;
};

/// Smooth attitude reference: R_d(t) with consistent body rates,
/// d/dt R_d = R_d hat(omega_d).
struct AttitudeCommand {
    std::function<Eigen::Matrix3d(double)> r_d;
    std::function<Eigen::Vector3d(double)> omega_d;
    std::function<Eigen::Vector3d(double)> omega_d_dot;

    static AttitudeCommand constant(const Eigen::Matrix3d& r);
};

/// Smooth position reference with derivatives and a unit heading e_1d(t).
/// The heading is treated as constant in time by the induced-attitude
/// rate computation; xdddot_d (jerk) may be null, which reads as zero.
struct PositionCommand {
    std::function<Eigen::Vector3d(double)> x_d;
    std::function<Eigen::Vector3d(double)> xdot_d;
    std::function<Eigen::Vector3d(double)> xddot_d;
    std::function<Eigen::Vector3d(double)> xdddot_d;
    std::function<Eigen::Vector3d(double)> e_1d;

    Eigen::Vector3d jerk(double t) const {
        return xdddot_d ? xdddot_d(t) : Eigen::Vector3d::Zero();
    }

    static PositionCommand waypoint(const Eigen::Vector3d& x,
                                    const Eigen::Vector3d& heading = {1, 0, 0});
};

/// Position tracking errors and the sliding surface s_x = k_x e_x + k_v e_v.
struct PositionErrorState {
    Eigen::Vector3d e_x;
    Eigen::Vector3d e_v;
    Eigen::Vector3d s_x;
};

PositionErrorState position_errors(const RigidBodyState& s,
                                   const Eigen::Vector3d& x_d,
                                   const Eigen::Vector3d& xdot_d,
                                   const GainSet& gains);

/// Attitude sliding surface s_R = k_R e_R + k_omega e_w.
Eigen::Vector3d attitude_surface(const Eigen::Vector3d& e_r,
                                 const Eigen::Vector3d& e_omega,
                                 const GainSet& gains);

struct AttitudeControlResult {
    Eigen::Vector3d moment;  ///< commanded body moment [N m]
    double psi;              ///< attitude error Psi(R, R_d)
    bool outside_l2;         ///< Psi >= 2: outside the nominal domain (warning,
                             ///< the controller keeps running)
};

/// Surface-based attitude moment
///   u = w x J w - J( (k_R/k_omega) E e_w + a_d + eta s_R ).
AttitudeControlResult attitude_control(const RigidBodyState& s,
                                       const Eigen::Matrix3d& r_d,
                                       const Eigen::Vector3d& omega_d,
                                       const Eigen::Vector3d& omega_d_dot,
                                       const GainSet& gains,
                                       const QuadParams& p);

/// Position-induced attitude: the rotation whose third column is the unit
/// direction of the required force
///   U = m g E3 - m (k_x/k_v) e_v - a s_x + m xddot_d,
/// with the first column built from the commanded heading.
struct InducedAttitude {
    Eigen::Matrix3d r_x;
    Eigen::Vector3d e_3x;          ///< unit thrust direction
    Eigen::Vector3d force_demand;  ///< U, before normalization [N]
};

/// Throws DegenerateThrustDirection when ||U|| < eps_den and
/// HeadingParallel when e_1d is within eps_par radians of e_3x.
InducedAttitude position_induced_attitude(const RigidBodyState& s,
                                          const Eigen::Vector3d& x_d,
                                          const Eigen::Vector3d& xdot_d,
                                          const Eigen::Vector3d& xddot_d,
                                          const Eigen::Vector3d& e_1d,
                                          const GainSet& gains,
                                          const QuadParams& p,
                                          double eps_den = 1e-6,
                                          double eps_par = 1e-4);

/// Exact rate of the induced attitude, omega_x = vee(R_x^T d/dt R_x).
/// U depends on the tracking errors, so its rate needs the vehicle
/// acceleration; v_dot comes from the model with the projected thrust
/// (perfect parameter knowledge), jerk_d from the command, and the
/// heading is taken as constant.
struct InducedAttitudeRates {
    InducedAttitude attitude;
    Eigen::Vector3d omega_x;
};

InducedAttitudeRates position_induced_attitude_rates(
    const RigidBodyState& s, const Eigen::Vector3d& v_dot,
    const Eigen::Vector3d& x_d, const Eigen::Vector3d& xdot_d,
    const Eigen::Vector3d& xddot_d, const Eigen::Vector3d& jerk_d,
    const Eigen::Vector3d& e_1d, const GainSet& gains, const QuadParams& p);

/**
 * Position-mode tracking controller.
 *
 * Thrust is the projection of the force demand on the body vertical,
 * f = U^T R e3; the moment is the surface-based attitude law driven by
 * the position-induced attitude R_x. The command rate omega_x is
 * evaluated in closed form (see position_induced_attitude_rates); its
 * derivative would require differentiating the closed loop, so omega_x_dot
 * is estimated by second-order backward differences of omega_x across
 * controller steps, with the first two steps after construction or
 * reset() using zero.
 *
 * update() must be called exactly once per control step at the fixed dt
 * given at construction; instances are single-owner.
 */
class PositionController {
  public:
    PositionController(const GainSet& gains, const QuadParams& p, double dt);

    struct Output {
        double thrust;
        Eigen::Vector3d moment;
        Eigen::Matrix3d r_x;
        Eigen::Vector3d omega_x;
        Eigen::Vector3d omega_x_dot;
        double psi;
        bool outside_l2;
    };

    Output update(const RigidBodyState& s, const PositionCommand& cmd, double t);

    /// Clears the finite-difference history (call on flight-mode entry).
    void reset();

    const GainSet& gains() const { return gains_; }

  private:
    GainSet gains_;
    QuadParams params_;
    double dt_;
    int steps_ = 0;
    Eigen::Vector3d w_hist_[3];
};

/**
 * Benchmark geometric tracking controller (standard PD-on-SO(3) form with
 * matrix gains; see Lee, Leok, McClamroch, "Geometric tracking control of
 * a quadrotor UAV on SE(3)", CDC 2010). Used as a comparison baseline.
 */
class BenchmarkController {
  public:
    BenchmarkController(const BenchmarkGains& gains, const QuadParams& p,
                        double dt);

    struct Output {
        double thrust;
        Eigen::Vector3d moment;
        Eigen::Matrix3d r_c;  ///< commanded attitude used by the moment law
        double psi;
    };

    /// Position mode: thrust and moment from the commanded trajectory.
    Output track_position(const RigidBodyState& s, const PositionCommand& cmd,
                          double t);

    /// Attitude mode: moment from the attitude command, thrust from the
    /// position law against the held position command.
    Output track_attitude(const RigidBodyState& s, const AttitudeCommand& att,
                          const PositionCommand& held, double t);

    void reset();

  private:
    BenchmarkGains gains_;
    QuadParams params_;
    double dt_;
    int steps_ = 0;
    Eigen::Matrix3d r_hist_[3];
    Eigen::Vector3d w_hist_[3];

    Eigen::Vector3d moment_law(const RigidBodyState& s,
                               const Eigen::Matrix3d& r_c,
                               const Eigen::Vector3d& w_c,
                               const Eigen::Vector3d& w_c_dot) const;
};

}  // namespace gsc
