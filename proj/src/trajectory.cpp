#include "gsc/trajectory.hpp"

#include <cmath>

#include "gsc/errors.hpp"
#include "gsc/so3.hpp"

namespace gsc {

namespace {

// Row of the boundary system: k-th derivative of the monomial basis at s,
// divided by T^k so the unknowns are normalized-time coefficients while
// the right-hand side stays in physical units.
Eigen::Matrix<double, 1, 9> basis_row(double s, int k, double t_scale) {
    Eigen::Matrix<double, 1, 9> row = Eigen::Matrix<double, 1, 9>::Zero();
    for (int j = k; j < 9; ++j) {
        double c = 1.0;
        for (int q = 0; q < k; ++q) c *= static_cast<double>(j - q);
        row(j) = c * std::pow(s, j - k) / std::pow(t_scale, k);
    }
    return row;
}

// k-th time derivative at normalized s, Horner over the falling-factorial
// weighted coefficients.
double eval_deriv(const std::array<double, 9>& c, double s, int k,
                  double t_scale) {
    double acc = 0.0;
    for (int j = 8; j >= k; --j) {
        double fall = 1.0;
        for (int q = 0; q < k; ++q) fall *= static_cast<double>(j - q);
        acc = acc * s + c[j] * fall;
    }
    return acc / std::pow(t_scale, k);
}

}  // namespace

Eigen::Vector3d PolynomialSegment::position(double t) const {
    const double tt = t_end - t_start;
    const double s = (t - t_start) / tt;
    return {eval_deriv(coeffs[0], s, 0, tt), eval_deriv(coeffs[1], s, 0, tt),
            eval_deriv(coeffs[2], s, 0, tt)};
}

Eigen::Vector3d PolynomialSegment::velocity(double t) const {
    const double tt = t_end - t_start;
    const double s = (t - t_start) / tt;
    return {eval_deriv(coeffs[0], s, 1, tt), eval_deriv(coeffs[1], s, 1, tt),
            eval_deriv(coeffs[2], s, 1, tt)};
}

Eigen::Vector3d PolynomialSegment::acceleration(double t) const {
    const double tt = t_end - t_start;
    const double s = (t - t_start) / tt;
    return {eval_deriv(coeffs[0], s, 2, tt), eval_deriv(coeffs[1], s, 2, tt),
            eval_deriv(coeffs[2], s, 2, tt)};
}

Eigen::Vector3d PolynomialSegment::jerk(double t) const {
    const double tt = t_end - t_start;
    const double s = (t - t_start) / tt;
    return {eval_deriv(coeffs[0], s, 3, tt), eval_deriv(coeffs[1], s, 3, tt),
            eval_deriv(coeffs[2], s, 3, tt)};
}

Eigen::Vector3d PolynomialSegment::snap(double t) const {
    const double tt = t_end - t_start;
    const double s = (t - t_start) / tt;
    return {eval_deriv(coeffs[0], s, 4, tt), eval_deriv(coeffs[1], s, 4, tt),
            eval_deriv(coeffs[2], s, 4, tt)};
}

PolynomialSegment fit_segment(const BoundaryState& start,
                              const BoundaryState& end, double t0, double t1) {
    if (!(t1 > t0)) {
        throw ConfigError("fit_segment: t1 must exceed t0");
    }
    const double tt = t1 - t0;

    Eigen::Matrix<double, 9, 9> a;
    Eigen::Matrix<double, 9, 3> b;
    int row = 0;
    const auto put = [&](double s, int k, const Eigen::Vector3d& value) {
        a.row(row) = basis_row(s, k, tt);
        b.row(row) = value.transpose();
        ++row;
    };
    put(0.0, 0, start.pos);
    put(0.0, 1, start.vel);
    put(0.0, 2, start.acc);
    put(0.0, 3, start.jerk);
    put(0.0, 4, start.snap);
    put(1.0, 0, end.pos);
    put(1.0, 1, end.vel);
    put(1.0, 2, end.acc);
    put(1.0, 3, end.jerk);

    Eigen::JacobiSVD<Eigen::Matrix<double, 9, 9>> svd(
        a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::VectorXd sigma = svd.singularValues();
    const double cond = sigma(0) / sigma(sigma.size() - 1);
    if (!(cond < 1e12)) {
        throw IllConditioned("fit_segment: boundary system condition number " +
                             std::to_string(cond));
    }
    const Eigen::Matrix<double, 9, 3> coeff = svd.solve(b);

    PolynomialSegment seg;
    seg.t_start = t0;
    seg.t_end = t1;
    for (int axis = 0; axis < 3; ++axis) {
        for (int j = 0; j < 9; ++j) seg.coeffs[axis][j] = coeff(j, axis);
    }
    return seg;
}

AttitudeCommand flip_command(const Eigen::Vector3d& axis, double total_angle,
                             double t0, double t1) {
    BoundaryState start, end;
    end.pos = {total_angle, 0.0, 0.0};
    const PolynomialSegment seg = fit_segment(start, end, t0, t1);
    const Eigen::Vector3d n = axis.normalized();

    const auto clamp_t = [t0, t1](double t) {
        return t < t0 ? t0 : (t > t1 ? t1 : t);
    };
    AttitudeCommand cmd;
    cmd.r_d = [seg, n, clamp_t](double t) {
        return exp_hat(n * seg.position(clamp_t(t)).x());
    };
    cmd.omega_d = [seg, n, t0, t1](double t) -> Eigen::Vector3d {
        if (t < t0 || t > t1) return Eigen::Vector3d::Zero();
        return n * seg.velocity(t).x();
    };
    cmd.omega_d_dot = [seg, n, t0, t1](double t) -> Eigen::Vector3d {
        if (t < t0 || t > t1) return Eigen::Vector3d::Zero();
        return n * seg.acceleration(t).x();
    };
    return cmd;
}

PositionCommand segment_command(const PolynomialSegment& seg,
                                const Eigen::Vector3d& heading) {
    const double t0 = seg.t_start;
    const double t1 = seg.t_end;
    PositionCommand cmd;
    cmd.x_d = [seg, t0, t1](double t) {
        return seg.position(t < t0 ? t0 : (t > t1 ? t1 : t));
    };
    cmd.xdot_d = [seg, t0, t1](double t) -> Eigen::Vector3d {
        if (t < t0 || t > t1) return Eigen::Vector3d::Zero();
        return seg.velocity(t);
    };
    cmd.xddot_d = [seg, t0, t1](double t) -> Eigen::Vector3d {
        if (t < t0 || t > t1) return Eigen::Vector3d::Zero();
        return seg.acceleration(t);
    };
    cmd.xdddot_d = [seg, t0, t1](double t) -> Eigen::Vector3d {
        if (t < t0 || t > t1) return Eigen::Vector3d::Zero();
        return seg.jerk(t);
    };
    const Eigen::Vector3d e1 = heading.normalized();
    cmd.e_1d = [e1](double) { return e1; };
    return cmd;
}

void FlightSchedule::validate() const {
    if (entries.empty()) {
        throw ConfigError("FlightSchedule: no entries");
    }
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (!(entries[i].t_end > entries[i].t_start)) {
            throw ConfigError("FlightSchedule: entry with non-positive span");
        }
        if (i > 0 &&
            std::abs(entries[i].t_start - entries[i - 1].t_end) > 1e-12) {
            throw ConfigError("FlightSchedule: entries must be contiguous");
        }
    }
}

std::size_t FlightSchedule::index_at(double t) const {
    for (std::size_t i = 0; i + 1 < entries.size(); ++i) {
        if (t < entries[i].t_end) return i;
    }
    return entries.size() - 1;
}

FlightSchedule flip_full_schedule(const Eigen::Vector3d& waypoint,
                                  const Eigen::Vector3d& heading) {
    FlightSchedule sched;

    // (a) translate to the waypoint; motion on [0.5, 5.5], holds elsewhere.
    BoundaryState origin, target;
    target.pos = waypoint;
    const PolynomialSegment climb = fit_segment(origin, target, 0.5, 5.5);
    ScheduleEntry phase_a;
    phase_a.mode = FlightMode::Position;
    phase_a.t_start = 0.0;
    phase_a.t_end = 6.0;
    phase_a.position = segment_command(climb, heading);
    phase_a.waypoint = waypoint;
    phase_a.heading = heading;
    sched.entries.push_back(phase_a);

    // (b) full-turn pitch flip; the position command holds the waypoint for
    // the secondary objective.
    ScheduleEntry phase_b;
    phase_b.mode = FlightMode::Attitude;
    phase_b.t_start = 6.0;
    phase_b.t_end = 7.0;
    phase_b.attitude =
        flip_command(Eigen::Vector3d::UnitY(), 2.0 * M_PI, 6.0, 7.0);
    phase_b.position = PositionCommand::waypoint(waypoint, heading);
    phase_b.waypoint = waypoint;
    phase_b.heading = heading;
    sched.entries.push_back(phase_b);

    // (c) return to the waypoint, segment fitted at runtime from the
    // post-flip state.
    ScheduleEntry phase_c;
    phase_c.mode = FlightMode::Position;
    phase_c.t_start = 7.0;
    phase_c.t_end = 10.0;
    phase_c.refit_on_entry = true;
    phase_c.waypoint = waypoint;
    phase_c.heading = heading;
    phase_c.position = PositionCommand::waypoint(waypoint, heading);
    sched.entries.push_back(phase_c);

    sched.validate();
    return sched;
}

}  // namespace gsc
