#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gsc/allocation.hpp"
#include "gsc/controllers.hpp"
#include "gsc/dynamics.hpp"
#include "gsc/roa.hpp"
#include "gsc/trajectory.hpp"

namespace gsc {

enum class ControllerKind { Proposed, Benchmark };

/// Complete description of one simulation run. Loaded from flat
/// `section.key = value` text; unknown keys are rejected.
struct ScenarioConfig {
    std::string scenario = "hover";  ///< hover | step90 | step_position_1cm | flip_full

    QuadParams params;
    GainSet gains;
    BenchmarkGains bench;
    AllocationConfig alloc;

    double dt = 1e-3;
    double t_final = 2.0;
    ControllerKind controller = ControllerKind::Proposed;
    bool strategy_enabled = false;  ///< constraint-aware allocation in attitude mode
    bool fp_enabled = true;         ///< secondary-task thrust inside the strategy
    std::uint64_t seed = 0;

    // Initial state (rotation given as axis + angle).
    Eigen::Vector3d init_x = Eigen::Vector3d::Zero();
    Eigen::Vector3d init_v = Eigen::Vector3d::Zero();
    Eigen::Vector3d init_omega = Eigen::Vector3d::Zero();
    Eigen::Vector3d init_axis = {0, 0, 1};
    double init_angle = 0.0;

    // Basin-report settings.
    double basin_b = 0.0;  ///< 0 derives the bound from the command
    BasinVariant basin_variant = BasinVariant::PositionFree;
    double basin_e_bound = 0.0;

    /// Throws ConfigError on inconsistent values.
    void validate() const;

    RigidBodyState initial_state() const;
};

/// Built-in defaults for a named scenario. Throws ConfigError for an
/// unknown name.
ScenarioConfig scenario_defaults(const std::string& name);

/// Loads a config file (key = value lines, '#' comments). The `scenario`
/// key selects the defaults; remaining keys override them.
ScenarioConfig load_scenario(const std::string& path);

/// Applies one `key=value` override.
void apply_override(ScenarioConfig& cfg, const std::string& assignment);

/// Builds the flight schedule for the config's scenario.
FlightSchedule build_schedule(const ScenarioConfig& cfg);

/// Gain-grid sweep axes: values per swept gain, Cartesian product order.
struct SweepSpec {
    std::vector<std::pair<std::string, std::vector<double>>> axes;
    int workers = 0;      ///< 0 selects hardware concurrency
    double psi_a = 1.0;   ///< cap used for the attitude certificate
};

/// Reads sweep.* keys from a config file (missing keys leave defaults).
SweepSpec load_sweep(const std::string& path,
                     const std::vector<std::string>& overrides = {});

}  // namespace gsc
