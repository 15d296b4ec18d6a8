#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "gsc/controllers.hpp"

namespace gsc {

/// Boundary data for one end of a polynomial segment.
struct BoundaryState {
    Eigen::Vector3d pos = Eigen::Vector3d::Zero();
    Eigen::Vector3d vel = Eigen::Vector3d::Zero();
    Eigen::Vector3d acc = Eigen::Vector3d::Zero();
    Eigen::Vector3d jerk = Eigen::Vector3d::Zero();
    Eigen::Vector3d snap = Eigen::Vector3d::Zero();
};

/**
 * Degree-8 polynomial segment per axis, stored in normalized time
 * s = (t - t_start)/(t_end - t_start). Derivatives are exact derivatives
 * of the coefficients. Valid on [t_start, t_end]; evaluation outside the
 * interval extrapolates.
 */
struct PolynomialSegment {
    std::array<std::array<double, 9>, 3> coeffs{};  // [axis][power]
    double t_start = 0.0;
    double t_end = 1.0;

    Eigen::Vector3d position(double t) const;
    Eigen::Vector3d velocity(double t) const;
    Eigen::Vector3d acceleration(double t) const;
    Eigen::Vector3d jerk(double t) const;
    Eigen::Vector3d snap(double t) const;
};

/// Fits a degree-8 segment imposing position, velocity, acceleration and
/// jerk at both ends plus the start snap (9 conditions for 9 coefficients;
/// the end snap is left free). Throws IllConditioned when the boundary
/// system's condition number exceeds 1e12.
PolynomialSegment fit_segment(const BoundaryState& start,
                              const BoundaryState& end, double t0, double t1);

/// Rest-to-rest rotation by total_angle about a fixed body axis, with the
/// angle profile a degree-8 rest-to-rest polynomial on [t0, t1]. Outside
/// the interval the command holds the nearer endpoint with zero rates.
AttitudeCommand flip_command(const Eigen::Vector3d& axis, double total_angle,
                             double t0, double t1);

/// Position command that follows a fitted segment and holds the segment
/// endpoints (zero derivatives) outside [t_start, t_end].
PositionCommand segment_command(const PolynomialSegment& seg,
                                const Eigen::Vector3d& heading);

enum class FlightMode { Position, Attitude };

/// One phase of a flight: the active mode plus the commands it tracks.
/// Attitude phases also carry the position command used by the
/// secondary-objective thrust. When refit_on_entry is set, the position
/// command is materialized at runtime from the state at phase entry
/// (segment to `waypoint` over the phase duration).
struct ScheduleEntry {
    FlightMode mode = FlightMode::Position;
    double t_start = 0.0;
    double t_end = 0.0;
    AttitudeCommand attitude;
    PositionCommand position;
    bool refit_on_entry = false;
    Eigen::Vector3d waypoint = Eigen::Vector3d::Zero();
    Eigen::Vector3d heading = {1, 0, 0};
};

/// Contiguous, non-overlapping sequence of flight phases.
struct FlightSchedule {
    std::vector<ScheduleEntry> entries;

    /// Throws ConfigError if the entries are empty, overlap, or leave gaps.
    void validate() const;

    /// Index of the entry active at time t (last entry is inclusive at its end).
    std::size_t index_at(double t) const;
};

/// Translate-flip-return maneuver: position mode to the waypoint until
/// t=6 (translation over [0.5, 5.5], holds elsewhere), a full-turn pitch
/// flip on [6, 7), then a position-mode return segment on [7, 10] refit
/// from the post-flip state.
FlightSchedule flip_full_schedule(const Eigen::Vector3d& waypoint = {2, 0, 5},
                                  const Eigen::Vector3d& heading = {1, 0, 0});

}  // namespace gsc
