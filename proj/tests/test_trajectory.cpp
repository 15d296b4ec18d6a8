#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gsc/errors.hpp"
#include "gsc/so3.hpp"
#include "gsc/trajectory.hpp"

using namespace gsc;
using Eigen::Matrix3d;
using Eigen::Vector3d;

TEST_CASE("rest-to-rest with identical endpoints is constant") {
    BoundaryState b;
    b.pos = {1.0, -2.0, 3.0};
    const PolynomialSegment seg = fit_segment(b, b, 0.0, 2.0);
    for (double t = 0.0; t <= 2.0; t += 0.1) {
        CHECK((seg.position(t) - b.pos).norm() < 1e-9);
        CHECK(seg.velocity(t).norm() < 1e-9);
    }
}

TEST_CASE("rest-to-rest climb hits its boundary data") {
    BoundaryState start, end;
    end.pos = {0.0, 0.0, 2.0};
    const PolynomialSegment seg = fit_segment(start, end, 0.5, 6.0);

    CHECK((seg.position(0.5) - start.pos).norm() < 1e-9);
    CHECK((seg.position(6.0) - end.pos).norm() < 1e-9);
    CHECK(seg.velocity(0.5).norm() < 1e-9);
    CHECK(seg.velocity(6.0).norm() < 1e-9);
    CHECK(seg.acceleration(0.5).norm() < 1e-9);
    CHECK(seg.acceleration(6.0).norm() < 1e-9);
    CHECK(seg.jerk(0.5).norm() < 1e-9);
    CHECK(seg.jerk(6.0).norm() < 1e-9);
    CHECK(seg.snap(0.5).norm() < 1e-9);

    // No interior overshoot beyond 5% of the travel.
    double peak = 0.0;
    for (double t = 0.5; t <= 6.0; t += 1e-3) {
        peak = std::max(peak, seg.position(t).z());
    }
    CHECK(peak < 2.0 * 1.05);
}

TEST_CASE("fitted rest-to-rest shape matches the closed form") {
    // With pos/vel/acc/jerk pinned at both ends and zero start snap, the
    // unit rest-to-rest profile is 56 s^5 - 140 s^6 + 120 s^7 - 35 s^8.
    BoundaryState start, end;
    end.pos = {1.0, 0.0, 0.0};
    const PolynomialSegment seg = fit_segment(start, end, 0.0, 1.0);
    const auto shape = [](double s) {
        return ((-35.0 * s + 120.0) * s - 140.0) * s * s * s * s * s * s +
               56.0 * std::pow(s, 5);
    };
    for (double s = 0.0; s <= 1.0; s += 0.05) {
        CHECK(seg.position(s).x() == doctest::Approx(shape(s)).epsilon(1e-9));
    }
}

TEST_CASE("analytic derivatives agree with finite differences") {
    BoundaryState start, end;
    start.vel = {0.3, 0.0, -0.1};
    start.acc = {0.0, 0.2, 0.0};
    end.pos = {2.0, -1.0, 4.0};
    const PolynomialSegment seg = fit_segment(start, end, 1.0, 4.0);
    const double dt = 1e-5;
    for (double t = 1.1; t < 4.0; t += 0.35) {
        const Vector3d fd_v =
            (seg.position(t + dt) - seg.position(t - dt)) / (2 * dt);
        CHECK((fd_v - seg.velocity(t)).norm() < 1e-6);
        const Vector3d fd_a =
            (seg.velocity(t + dt) - seg.velocity(t - dt)) / (2 * dt);
        CHECK((fd_a - seg.acceleration(t)).norm() < 1e-6);
    }
}

TEST_CASE("degenerate durations are rejected") {
    BoundaryState start, end;
    end.pos = {1, 0, 0};
    CHECK_THROWS_AS(fit_segment(start, end, 1.0, 1.0), ConfigError);
    CHECK_THROWS_AS(fit_segment(start, end, 0.0, 5e4), IllConditioned);
}

TEST_CASE("flip command is rest-to-rest and kinematically consistent") {
    const AttitudeCommand cmd =
        flip_command(Vector3d::UnitY(), 2 * M_PI, 6.0, 7.0);

    CHECK((cmd.r_d(6.0) - Matrix3d::Identity()).norm() < 1e-9);
    CHECK((cmd.r_d(7.0) - Matrix3d::Identity()).norm() < 1e-9);  // full turn
    CHECK(cmd.omega_d(6.0).norm() < 1e-9);
    CHECK(cmd.omega_d(7.0).norm() < 1e-9);

    // d/dt R_d = R_d hat(omega_d), checked by central differences.
    const double dt = 1e-6;
    for (double t = 6.1; t < 7.0; t += 0.17) {
        const Matrix3d fd = (cmd.r_d(t + dt) - cmd.r_d(t - dt)) / (2 * dt);
        const Matrix3d predicted = cmd.r_d(t) * hat(cmd.omega_d(t));
        CHECK((fd - predicted).norm() < 1e-6);
    }

    // Peak rate of the degree-8 rest-to-rest profile: 2 pi * 280 (4/7)^4 (3/7)^3.
    double peak = 0.0;
    for (double t = 6.0; t <= 7.0; t += 1e-4) {
        peak = std::max(peak, cmd.omega_d(t).norm());
    }
    const double expected_peak =
        2 * M_PI * 280.0 * std::pow(4.0 / 7.0, 4) * std::pow(3.0 / 7.0, 3);
    CHECK(peak == doctest::Approx(expected_peak).epsilon(1e-4));
    CHECK(peak < 20.0);  // low tens of rad/s
}

TEST_CASE("flip schedule phases") {
    const FlightSchedule sched = flip_full_schedule();
    REQUIRE(sched.entries.size() == 3);
    CHECK(sched.entries[0].t_start == 0.0);
    CHECK(sched.entries[0].t_end == 6.0);
    CHECK(sched.entries[1].t_start == 6.0);
    CHECK(sched.entries[1].t_end == 7.0);
    CHECK(sched.entries[2].t_start == 7.0);
    CHECK(sched.entries[2].t_end == 10.0);
    CHECK(sched.entries[0].mode == FlightMode::Position);
    CHECK(sched.entries[1].mode == FlightMode::Attitude);
    CHECK(sched.entries[2].mode == FlightMode::Position);
    CHECK(sched.entries[2].refit_on_entry);

    // The translation settles on the waypoint before the flip.
    const Vector3d wp(2, 0, 5);
    CHECK((sched.entries[0].position.x_d(6.0 - 1e-9) - wp).norm() < 1e-6);
    CHECK((sched.entries[0].position.x_d(5.5) - wp).norm() < 1e-9);
    // Continuity across the position->attitude switch.
    CHECK((sched.entries[1].position.x_d(6.0) - wp).norm() < 1e-9);
    CHECK((sched.entries[1].attitude.r_d(6.0) - Matrix3d::Identity()).norm() <
          1e-9);

    CHECK(sched.index_at(0.0) == 0);
    CHECK(sched.index_at(5.999) == 0);
    CHECK(sched.index_at(6.0) == 1);
    CHECK(sched.index_at(6.999) == 1);
    CHECK(sched.index_at(7.0) == 2);
    CHECK(sched.index_at(10.0) == 2);
}

TEST_CASE("schedule validation") {
    FlightSchedule bad;
    ScheduleEntry e;
    e.t_start = 0.0;
    e.t_end = 1.0;
    bad.entries.push_back(e);
    e.t_start = 1.5;  // gap
    e.t_end = 2.0;
    bad.entries.push_back(e);
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("commanded acceleration stays under the scenario bound") {
    const FlightSchedule sched = flip_full_schedule();
    const double m = 1.34;
    const double g = 9.81;
    double peak = 0.0;
    for (const auto& entry : sched.entries) {
        if (entry.refit_on_entry) continue;  // materialized at runtime
        for (double t = entry.t_start; t < entry.t_end; t += 1e-3) {
            peak = std::max(peak, (m * g * Vector3d::UnitZ() +
                                   m * entry.position.xddot_d(t))
                                      .norm());
        }
    }
    // Travel of ~5.4 m in 5 s with the degree-8 profile keeps the demand
    // well under twice the hover load.
    CHECK(peak < 2.0 * m * g);
}
