#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gsc/roa.hpp"
#include "gsc/scenario.hpp"

namespace gsc {

/// One integration step of a run. Error quantities are taken against the
/// command active at that step (the tracked attitude command in attitude
/// mode, the position-induced attitude in position mode).
struct LogRow {
    double t;
    Eigen::Vector3d x;
    Eigen::Vector3d v;
    Eigen::Matrix3d r;
    Eigen::Vector3d omega;
    double f;
    Eigen::Vector3d u;
    Eigen::Vector4d thrusts;
    double psi;
    double e_r_norm;
    double e_omega_norm;
    double e_x_norm;
    double e_v_norm;
    double v_lyap;
    double v_psi;
    double v_x;
    double v_g;
    int mode;       ///< 0 position, 1 attitude
    int saturated;  ///< any rotor thrust outside [f_min, f_max]
};

struct RunLog {
    ScenarioConfig cfg;
    std::vector<LogRow> rows;
    std::vector<ErrorSample> errors;  ///< per-step error vectors

    static const char* csv_header();
};

/// Deterministic closed-loop rollout of the configured scenario.
/// Throws ConfigError on invalid configs and NumericalBlowup (annotated
/// with the failing timestep) on divergence.
RunLog run(const ScenarioConfig& cfg);

/// CSV serialization, one row per step, floats at 17 significant digits.
void write_csv(const RunLog& log, std::ostream& out);
std::string csv_string(const RunLog& log);

/// Root-mean-square control effort over [0, t] (rectangle rule):
///   sqrt( (1/t) integral sum_i f_i^2 )
double rms_effort(const RunLog& log, double t);

/// Summary metrics of one run.
struct RunMetrics {
    double rms_final = 0.0;
    double psi_max = 0.0;
    double psi_final = 0.0;
    double e_x_max = 0.0;
    double e_x_final = 0.0;
    double settle_time = 0.0;  ///< 5%-band settling time of psi
    double mean_psi = 0.0;
    long sat_count = 0;
    double thrust_min = 0.0;
    double thrust_max = 0.0;
};

RunMetrics metrics(const RunLog& log);

/// First time psi enters and stays below `fraction` of its initial value;
/// returns the horizon length if it never settles.
double settle_time_psi(const RunLog& log, double fraction = 0.05);

struct ComparisonReport {
    RunMetrics a;
    RunMetrics b;
    std::string a_name;
    std::string b_name;
    std::string faster_settling;       ///< name of the faster-settling run
    std::string lower_attitude_error;  ///< smaller mean psi
    std::string lower_position_error;  ///< smaller max position error
};

/// Runs both configs (identical schedules assumed) and compares them.
ComparisonReport compare(const ScenarioConfig& a, const ScenarioConfig& b);

std::string format_report(const ComparisonReport& rep);

/// Basin evaluation at the initial condition and at every mode switch of
/// the scenario (the switch states are produced by running the scenario).
struct BasinSnapshot {
    double t = 0.0;
    FlightMode mode = FlightMode::Position;
    AttitudeBasinReport attitude;
    PositionBasinReport position;
};

std::vector<BasinSnapshot> basin_report(const ScenarioConfig& cfg);

std::string format_basin(const std::vector<BasinSnapshot>& snaps);

/// One row of a gain-grid sweep over the basin certificates.
struct SweepRow {
    GainSet gains;
    double theta_max_free = 0.0;
    double theta_max_bounded = 0.0;
    double psi_p = 0.0;
    double tau = 0.0;
    double lambda_min_w1 = 0.0;
    double lambda_min_pi1 = 0.0;
    bool w3_ok = false;
};

/// Evaluates the certificate grid across a worker pool; rows come back in
/// deterministic (grid-index) order.
std::vector<SweepRow> sweep(const ScenarioConfig& base, const SweepSpec& spec);

std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace gsc
