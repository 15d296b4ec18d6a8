#include "gsc/controllers.hpp"

#include <cmath>

#include "gsc/errors.hpp"
#include "gsc/so3.hpp"

namespace gsc {

void GainSet::validate() const {
    const bool ok = eta > 0 && k_r > 0 && k_omega > 0 && a > 0 && k_x > 0 &&
                    k_v > 0 && k_xi > 0 && k_h1 > 0 && k_h2 > 0 &&
                    iota.minCoeff() > 0;
    if (!ok) {
        throw ConfigError("GainSet: all gains must be strictly positive");
    }
}

void BenchmarkGains::validate() const {
    if (!(k_x > 0) || !(k_v > 0) || k_r.diagonal().minCoeff() <= 0 ||
        k_omega.diagonal().minCoeff() <= 0) {
        throw ConfigError("BenchmarkGains: all gains must be strictly positive");
    }
}

AttitudeCommand AttitudeCommand::constant(const Eigen::Matrix3d& r) {
    AttitudeCommand cmd;
    cmd.r_d = [r](double) { return r; };
    cmd.omega_d = [](double) { return Eigen::Vector3d::Zero().eval(); };
    cmd.omega_d_dot = [](double) { return Eigen::Vector3d::Zero().eval(); };
    return cmd;
}

PositionCommand PositionCommand::waypoint(const Eigen::Vector3d& x,
                                          const Eigen::Vector3d& heading) {
    PositionCommand cmd;
    cmd.x_d = [x](double) { return x; };
    cmd.xdot_d = [](double) { return Eigen::Vector3d::Zero().eval(); };
    cmd.xddot_d = [](double) { return Eigen::Vector3d::Zero().eval(); };
    cmd.xdddot_d = [](double) { return Eigen::Vector3d::Zero().eval(); };
    const Eigen::Vector3d e1 = heading.normalized();
    cmd.e_1d = [e1](double) { return e1; };
    return cmd;
}

PositionErrorState position_errors(const RigidBodyState& s,
                                   const Eigen::Vector3d& x_d,
                                   const Eigen::Vector3d& xdot_d,
                                   const GainSet& gains) {
    PositionErrorState e;
    e.e_x = s.x - x_d;
    e.e_v = s.v - xdot_d;
    e.s_x = gains.k_x * e.e_x + gains.k_v * e.e_v;
    return e;
}

Eigen::Vector3d attitude_surface(const Eigen::Vector3d& e_r,
                                 const Eigen::Vector3d& e_omega,
                                 const GainSet& gains) {
    return gains.k_r * e_r + gains.k_omega * e_omega;
}

AttitudeControlResult attitude_control(const RigidBodyState& s,
                                       const Eigen::Matrix3d& r_d,
                                       const Eigen::Vector3d& omega_d,
                                       const Eigen::Vector3d& omega_d_dot,
                                       const GainSet& gains,
                                       const QuadParams& p) {
    const Eigen::Vector3d e_r = attitude_error_vector(s.r, r_d);
    const Eigen::Vector3d e_w = angular_velocity_error(s.r, s.omega, r_d, omega_d);
    const Eigen::Vector3d e_r_dot = error_jacobian(s.r, r_d) * e_w;
    const Eigen::Vector3d a_d = feedforward_ad(s.r, s.omega, r_d, omega_d,
                                               omega_d_dot);
    const Eigen::Vector3d s_r = attitude_surface(e_r, e_w, gains);

    AttitudeControlResult out;
    out.moment = s.omega.cross(p.inertia * s.omega) -
                 p.inertia * ((gains.k_r / gains.k_omega) * e_r_dot + a_d +
                              gains.eta * s_r);
    out.psi = psi_error(s.r, r_d);
    out.outside_l2 = out.psi >= 2.0;
    return out;
}

InducedAttitude position_induced_attitude(const RigidBodyState& s,
                                          const Eigen::Vector3d& x_d,
                                          const Eigen::Vector3d& xdot_d,
                                          const Eigen::Vector3d& xddot_d,
                                          const Eigen::Vector3d& e_1d,
                                          const GainSet& gains,
                                          const QuadParams& p,
                                          double eps_den, double eps_par) {
    const PositionErrorState e = position_errors(s, x_d, xdot_d, gains);
    InducedAttitude out;
    out.force_demand = p.m * p.g * Eigen::Vector3d::UnitZ() -
                       p.m * (gains.k_x / gains.k_v) * e.e_v -
                       gains.a * e.s_x + p.m * xddot_d;
    const double demand = out.force_demand.norm();
    if (demand < eps_den) {
        throw DegenerateThrustDirection(
            "position_induced_attitude: force demand " + std::to_string(demand) +
            " N below " + std::to_string(eps_den));
    }
    out.e_3x = out.force_demand / demand;

    const Eigen::Vector3d c = out.e_3x.cross(e_1d);
    if (c.norm() < eps_par) {
        throw HeadingParallel(
            "position_induced_attitude: heading parallel to thrust direction");
    }
    const Eigen::Vector3d e_1h = c.cross(out.e_3x).normalized();
    out.r_x.col(0) = e_1h;
    out.r_x.col(1) = out.e_3x.cross(e_1h);
    out.r_x.col(2) = out.e_3x;
    return out;
}

namespace {

// Derivative of the normalization map a -> a/||a||.
Eigen::Vector3d unit_rate(const Eigen::Vector3d& a, const Eigen::Vector3d& a_dot) {
    const double n = a.norm();
    const Eigen::Vector3d u = a / n;
    return (a_dot - u * u.dot(a_dot)) / n;
}

}  // namespace

InducedAttitudeRates position_induced_attitude_rates(
    const RigidBodyState& s, const Eigen::Vector3d& v_dot,
    const Eigen::Vector3d& x_d, const Eigen::Vector3d& xdot_d,
    const Eigen::Vector3d& xddot_d, const Eigen::Vector3d& jerk_d,
    const Eigen::Vector3d& e_1d, const GainSet& gains, const QuadParams& p) {
    InducedAttitudeRates out;
    out.attitude = position_induced_attitude(s, x_d, xdot_d, xddot_d, e_1d,
                                             gains, p);

    // U = m g E3 - m (k_x/k_v) e_v - a s_x + m xddot_d evolves with the
    // tracking errors: e_v' = v_dot - xddot_d, s_x' = k_x e_v + k_v e_v'.
    const Eigen::Vector3d e_v = s.v - xdot_d;
    const Eigen::Vector3d e_v_dot = v_dot - xddot_d;
    const Eigen::Vector3d s_x_dot = gains.k_x * e_v + gains.k_v * e_v_dot;
    const Eigen::Vector3d u_dot = -p.m * (gains.k_x / gains.k_v) * e_v_dot -
                                  gains.a * s_x_dot + p.m * jerk_d;

    const Eigen::Vector3d e3x = out.attitude.e_3x;
    const Eigen::Vector3d e3x_dot = unit_rate(out.attitude.force_demand, u_dot);

    const Eigen::Vector3d c = e3x.cross(e_1d);
    const Eigen::Vector3d c_dot = e3x_dot.cross(e_1d);
    const Eigen::Vector3d w = c.cross(e3x);
    const Eigen::Vector3d w_dot = c_dot.cross(e3x) + c.cross(e3x_dot);
    const Eigen::Vector3d e1h = out.attitude.r_x.col(0);
    const Eigen::Vector3d e1h_dot = unit_rate(w, w_dot);

    Eigen::Matrix3d r_x_dot;
    r_x_dot.col(0) = e1h_dot;
    r_x_dot.col(1) = e3x_dot.cross(e1h) + e3x.cross(e1h_dot);
    r_x_dot.col(2) = e3x_dot;
    out.omega_x = vee_skew_part(out.attitude.r_x.transpose() * r_x_dot);
    return out;
}

PositionController::PositionController(const GainSet& gains,
                                       const QuadParams& p, double dt)
    : gains_(gains), params_(p), dt_(dt) {
    gains_.validate();
    reset();
}

void PositionController::reset() {
    steps_ = 0;
    for (auto& w : w_hist_) w.setZero();
}

PositionController::Output PositionController::update(const RigidBodyState& s,
                                                      const PositionCommand& cmd,
                                                      double t) {
    const Eigen::Vector3d x_d = cmd.x_d(t);
    const Eigen::Vector3d xdot_d = cmd.xdot_d(t);
    const Eigen::Vector3d xddot_d = cmd.xddot_d(t);

    // Thrust first: the model acceleration under it feeds the command rate.
    const InducedAttitude ind = position_induced_attitude(
        s, x_d, xdot_d, xddot_d, cmd.e_1d(t), gains_, params_);
    const double thrust = ind.force_demand.dot(s.r * Eigen::Vector3d::UnitZ());
    const Eigen::Vector3d v_dot =
        (-params_.m * params_.g * Eigen::Vector3d::UnitZ() +
         thrust * s.r * Eigen::Vector3d::UnitZ()) /
        params_.m;

    const InducedAttitudeRates rates = position_induced_attitude_rates(
        s, v_dot, x_d, xdot_d, xddot_d, cmd.jerk(t), cmd.e_1d(t), gains_,
        params_);

    w_hist_[0] = w_hist_[1];
    w_hist_[1] = w_hist_[2];
    w_hist_[2] = rates.omega_x;

    Eigen::Vector3d omega_x_dot = Eigen::Vector3d::Zero();
    if (steps_ >= 2) {
        omega_x_dot =
            (3.0 * w_hist_[2] - 4.0 * w_hist_[1] + w_hist_[0]) / (2.0 * dt_);
    }
    ++steps_;

    const AttitudeControlResult att = attitude_control(
        s, rates.attitude.r_x, rates.omega_x, omega_x_dot, gains_, params_);

    Output out;
    out.thrust = thrust;
    out.moment = att.moment;
    out.r_x = rates.attitude.r_x;
    out.omega_x = rates.omega_x;
    out.omega_x_dot = omega_x_dot;
    out.psi = att.psi;
    out.outside_l2 = att.outside_l2;
    return out;
}

BenchmarkController::BenchmarkController(const BenchmarkGains& gains,
                                         const QuadParams& p, double dt)
    : gains_(gains), params_(p), dt_(dt) {
    gains_.validate();
    reset();
}

void BenchmarkController::reset() {
    steps_ = 0;
    for (auto& r : r_hist_) r.setIdentity();
    for (auto& w : w_hist_) w.setZero();
}

Eigen::Vector3d BenchmarkController::moment_law(const RigidBodyState& s,
                                                const Eigen::Matrix3d& r_c,
                                                const Eigen::Vector3d& w_c,
                                                const Eigen::Vector3d& w_c_dot)
    const {
    const Eigen::Vector3d e_r = attitude_error_vector(s.r, r_c);
    const Eigen::Vector3d e_w = angular_velocity_error(s.r, s.omega, r_c, w_c);
    return -gains_.k_r * e_r - gains_.k_omega * e_w +
           s.omega.cross(params_.inertia * s.omega) -
           params_.inertia *
               feedforward_ad(s.r, s.omega, r_c, w_c, w_c_dot);
}

BenchmarkController::Output BenchmarkController::track_position(
    const RigidBodyState& s, const PositionCommand& cmd, double t) {
    const Eigen::Vector3d e_x = s.x - cmd.x_d(t);
    const Eigen::Vector3d e_v = s.v - cmd.xdot_d(t);
    const Eigen::Vector3d force = params_.m * params_.g * Eigen::Vector3d::UnitZ() -
                                  gains_.k_x * e_x - gains_.k_v * e_v +
                                  params_.m * cmd.xddot_d(t);
    const double fnorm = force.norm();
    if (fnorm < 1e-6) {
        throw DegenerateThrustDirection("benchmark: force demand near zero");
    }
    const Eigen::Vector3d b3 = force / fnorm;
    const Eigen::Vector3d c = b3.cross(cmd.e_1d(t));
    if (c.norm() < 1e-4) {
        throw HeadingParallel("benchmark: heading parallel to thrust direction");
    }
    Eigen::Matrix3d r_c;
    r_c.col(0) = c.cross(b3).normalized();
    r_c.col(1) = b3.cross(r_c.col(0));
    r_c.col(2) = b3;

    r_hist_[0] = r_hist_[1];
    r_hist_[1] = r_hist_[2];
    r_hist_[2] = r_c;
    Eigen::Vector3d w_c = Eigen::Vector3d::Zero();
    if (steps_ >= 2) {
        const Eigen::Matrix3d r_dot =
            (3.0 * r_hist_[2] - 4.0 * r_hist_[1] + r_hist_[0]) / (2.0 * dt_);
        w_c = vee_skew_part(r_c.transpose() * r_dot);
    }
    w_hist_[0] = w_hist_[1];
    w_hist_[1] = w_hist_[2];
    w_hist_[2] = w_c;
    Eigen::Vector3d w_c_dot = Eigen::Vector3d::Zero();
    if (steps_ >= 2) {
        w_c_dot = (3.0 * w_hist_[2] - 4.0 * w_hist_[1] + w_hist_[0]) / (2.0 * dt_);
    }
    ++steps_;

    Output out;
    out.thrust = force.dot(s.r * Eigen::Vector3d::UnitZ());
    out.moment = moment_law(s, r_c, w_c, w_c_dot);
    out.r_c = r_c;
    out.psi = psi_error(s.r, r_c);
    return out;
}

BenchmarkController::Output BenchmarkController::track_attitude(
    const RigidBodyState& s, const AttitudeCommand& att,
    const PositionCommand& held, double t) {
    const Eigen::Matrix3d r_d = att.r_d(t);
    const Eigen::Vector3d e_x = s.x - held.x_d(t);
    const Eigen::Vector3d e_v = s.v - held.xdot_d(t);
    const Eigen::Vector3d force = params_.m * params_.g * Eigen::Vector3d::UnitZ() -
                                  gains_.k_x * e_x - gains_.k_v * e_v +
                                  params_.m * held.xddot_d(t);
    Output out;
    out.thrust = force.dot(s.r * Eigen::Vector3d::UnitZ());
    out.moment = moment_law(s, r_d, att.omega_d(t), att.omega_d_dot(t));
    out.r_c = r_d;
    out.psi = psi_error(s.r, r_d);
    return out;
}

}  // namespace gsc
