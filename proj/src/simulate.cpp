#include "gsc/simulate.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <thread>

#include "gsc/errors.hpp"
#include "gsc/so3.hpp"

namespace gsc {

const char* RunLog::csv_header() {
    return "t,x0,x1,x2,v0,v1,v2,"
           "r00,r01,r02,r10,r11,r12,r20,r21,r22,"
           "w0,w1,w2,f,u0,u1,u2,F0,F1,F2,F3,"
           "psi,e_R,e_w,e_x,e_v,V,V_psi,V_x,V_g,mode,sat";
}

namespace {

struct StepCommand {
    double f = 0.0;
    Eigen::Vector3d u = Eigen::Vector3d::Zero();
    Eigen::Vector4d thrusts = Eigen::Vector4d::Zero();
    Eigen::Matrix3d r_ref = Eigen::Matrix3d::Identity();
    Eigen::Vector3d omega_ref = Eigen::Vector3d::Zero();
    double psi = 0.0;
};

}  // namespace

RunLog run(const ScenarioConfig& cfg) {
    cfg.validate();
    FlightSchedule schedule = build_schedule(cfg);

    const Mixer mixer = mixer_matrix(cfg.params);
    PositionController pos_ctrl(cfg.gains, cfg.params, cfg.dt);
    BenchmarkController bench_ctrl(cfg.bench, cfg.params, cfg.dt);
    AllocatorState alloc_state;
    alloc_state.reset(cfg.alloc, cfg.params);

    RunLog log;
    log.cfg = cfg;
    const long n_steps = std::lround(cfg.t_final / cfg.dt);
    log.rows.reserve(n_steps);
    log.errors.reserve(n_steps);

    RigidBodyState state = cfg.initial_state();
    std::size_t active = schedule.entries.size();  // forces entry setup at t=0

    for (long i = 0; i < n_steps; ++i) {
        const double t = i * cfg.dt;
        const std::size_t idx = schedule.index_at(t);
        if (idx != active) {
            active = idx;
            ScheduleEntry& entry = schedule.entries[idx];
            if (entry.refit_on_entry) {
                // The segment picks up the flight where the previous phase
                // left it: position and velocity from the state, higher
                // derivatives free (zero).
                BoundaryState from;
                from.pos = state.x;
                from.vel = state.v;
                BoundaryState to;
                to.pos = entry.waypoint;
                entry.position = segment_command(
                    fit_segment(from, to, entry.t_start, entry.t_end),
                    entry.heading);
            }
            pos_ctrl.reset();
            bench_ctrl.reset();
            alloc_state.reset(cfg.alloc, cfg.params);
        }
        const ScheduleEntry& entry = schedule.entries[active];

        StepCommand cmd;
        ErrorSample err;
        err.t = t;

        if (entry.mode == FlightMode::Position) {
            if (cfg.controller == ControllerKind::Proposed) {
                const auto out = pos_ctrl.update(state, entry.position, t);
                cmd.f = out.thrust;
                cmd.u = out.moment;
                cmd.r_ref = out.r_x;
                cmd.omega_ref = out.omega_x;
                cmd.psi = out.psi;
            } else {
                const auto out = bench_ctrl.track_position(state, entry.position, t);
                cmd.f = out.thrust;
                cmd.u = out.moment;
                cmd.r_ref = out.r_c;
                cmd.omega_ref.setZero();
                cmd.psi = out.psi;
            }
            cmd.thrusts = position_mode_thrusts(cmd.f, cmd.u, mixer);
        } else {
            if (cfg.controller == ControllerKind::Proposed) {
                const Eigen::Matrix3d r_d = entry.attitude.r_d(t);
                const Eigen::Vector3d w_d = entry.attitude.omega_d(t);
                const auto att = attitude_control(state, r_d, w_d,
                                                  entry.attitude.omega_d_dot(t),
                                                  cfg.gains, cfg.params);
                cmd.u = att.moment;
                cmd.r_ref = r_d;
                cmd.omega_ref = w_d;
                cmd.psi = att.psi;
                if (cfg.strategy_enabled) {
                    cmd.thrusts = allocate_with_constraints(
                        cmd.u, state, entry.position.x_d(t),
                        entry.position.xdot_d(t), entry.position.xddot_d(t),
                        cfg.gains, cfg.params, cfg.alloc, alloc_state, cfg.dt,
                        cfg.fp_enabled);
                    cmd.f = cmd.thrusts.sum();
                } else {
                    // Fall back to the position-mode distribution with the
                    // projection thrust law against the held waypoint.
                    const PositionErrorState e = position_errors(
                        state, entry.position.x_d(t), entry.position.xdot_d(t),
                        cfg.gains);
                    const Eigen::Vector3d demand =
                        cfg.params.m * cfg.params.g * Eigen::Vector3d::UnitZ() -
                        cfg.params.m * (cfg.gains.k_x / cfg.gains.k_v) * e.e_v -
                        cfg.gains.a * e.s_x +
                        cfg.params.m * entry.position.xddot_d(t);
                    cmd.f = demand.dot(state.r * Eigen::Vector3d::UnitZ());
                    cmd.thrusts = position_mode_thrusts(cmd.f, cmd.u, mixer);
                }
            } else {
                const auto out = bench_ctrl.track_attitude(state, entry.attitude,
                                                           entry.position, t);
                cmd.f = out.thrust;
                cmd.u = out.moment;
                cmd.r_ref = out.r_c;
                cmd.omega_ref = entry.attitude.omega_d(t);
                cmd.psi = out.psi;
                cmd.thrusts = position_mode_thrusts(cmd.f, cmd.u, mixer);
            }
        }

        err.e_r = attitude_error_vector(state.r, cmd.r_ref);
        err.e_omega = angular_velocity_error(state.r, state.omega, cmd.r_ref,
                                             cmd.omega_ref);
        err.e_x = state.x - entry.position.x_d(t);
        err.e_v = state.v - entry.position.xdot_d(t);
        err.psi = cmd.psi;

        const LyapunovValues lyap =
            lyapunov_candidates(err, cfg.gains, cfg.params);

        LogRow row;
        row.t = t;
        row.x = state.x;
        row.v = state.v;
        row.r = state.r;
        row.omega = state.omega;
        row.f = cmd.f;
        row.u = cmd.u;
        row.thrusts = cmd.thrusts;
        row.psi = cmd.psi;
        row.e_r_norm = err.e_r.norm();
        row.e_omega_norm = err.e_omega.norm();
        row.e_x_norm = err.e_x.norm();
        row.e_v_norm = err.e_v.norm();
        row.v_lyap = lyap.v;
        row.v_psi = lyap.v_psi;
        row.v_x = lyap.v_x;
        row.v_g = lyap.v_g;
        row.mode = entry.mode == FlightMode::Attitude ? 1 : 0;
        row.saturated = (cmd.thrusts.minCoeff() < cfg.alloc.f_min ||
                         cmd.thrusts.maxCoeff() > cfg.alloc.f_max)
                            ? 1
                            : 0;
        log.rows.push_back(row);
        log.errors.push_back(err);

        try {
            ControlOutput applied;
            applied.f = cmd.f;
            applied.u = cmd.u;
            applied.thrusts = cmd.thrusts;
            state = step(state, applied, cfg.params, cfg.dt);
        } catch (const NumericalBlowup& e) {
            throw NumericalBlowup(std::string(e.what()) + " at t = " +
                                  std::to_string(t + cfg.dt));
        }
    }
    return log;
}

namespace {

void append_double(std::string& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

}  // namespace

std::string csv_string(const RunLog& log) {
    std::string out = RunLog::csv_header();
    out += '\n';
    for (const LogRow& r : log.rows) {
        append_double(out, r.t);
        const auto push = [&out](double v) {
            out += ',';
            append_double(out, v);
        };
        for (int i = 0; i < 3; ++i) push(r.x(i));
        for (int i = 0; i < 3; ++i) push(r.v(i));
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) push(r.r(i, j));
        for (int i = 0; i < 3; ++i) push(r.omega(i));
        push(r.f);
        for (int i = 0; i < 3; ++i) push(r.u(i));
        for (int i = 0; i < 4; ++i) push(r.thrusts(i));
        push(r.psi);
        push(r.e_r_norm);
        push(r.e_omega_norm);
        push(r.e_x_norm);
        push(r.e_v_norm);
        push(r.v_lyap);
        push(r.v_psi);
        push(r.v_x);
        push(r.v_g);
        out += ',' + std::to_string(r.mode);
        out += ',' + std::to_string(r.saturated);
        out += '\n';
    }
    return out;
}

void write_csv(const RunLog& log, std::ostream& out) { out << csv_string(log); }

double rms_effort(const RunLog& log, double t) {
    if (!(t > 0.0)) throw ConfigError("rms_effort: t must be positive");
    const double dt = log.cfg.dt;
    const long n = std::min<long>(std::lround(t / dt),
                                  static_cast<long>(log.rows.size()));
    if (n <= 0) throw ConfigError("rms_effort: no samples before t");
    double acc = 0.0;
    for (long i = 0; i < n; ++i) {
        acc += log.rows[i].thrusts.squaredNorm() * dt;
    }
    return std::sqrt(acc / (n * dt));
}

double settle_time_psi(const RunLog& log, double fraction) {
    if (log.rows.empty()) return 0.0;
    const double psi0 = log.rows.front().psi;
    if (psi0 < 1e-12) return 0.0;
    const double threshold = fraction * psi0;
    // Scan backward for the last sample above the band.
    for (std::size_t i = log.rows.size(); i-- > 0;) {
        if (log.rows[i].psi >= threshold) {
            return i + 1 < log.rows.size() ? log.rows[i + 1].t
                                           : log.cfg.t_final;
        }
    }
    return 0.0;
}

RunMetrics metrics(const RunLog& log) {
    RunMetrics m;
    if (log.rows.empty()) return m;
    m.rms_final = rms_effort(log, log.cfg.t_final);
    m.thrust_min = log.rows.front().thrusts.minCoeff();
    m.thrust_max = log.rows.front().thrusts.maxCoeff();
    double psi_acc = 0.0;
    for (const LogRow& r : log.rows) {
        m.psi_max = std::max(m.psi_max, r.psi);
        m.e_x_max = std::max(m.e_x_max, r.e_x_norm);
        m.sat_count += r.saturated;
        psi_acc += r.psi;
        m.thrust_min = std::min(m.thrust_min, r.thrusts.minCoeff());
        m.thrust_max = std::max(m.thrust_max, r.thrusts.maxCoeff());
    }
    m.psi_final = log.rows.back().psi;
    m.e_x_final = log.rows.back().e_x_norm;
    m.mean_psi = psi_acc / static_cast<double>(log.rows.size());
    m.settle_time = settle_time_psi(log);
    return m;
}

ComparisonReport compare(const ScenarioConfig& a, const ScenarioConfig& b) {
    if (a.scenario != b.scenario) {
        throw ConfigError("compare: scenarios must match");
    }
    ComparisonReport rep;
    rep.a_name = a.controller == ControllerKind::Proposed ? "proposed"
                                                          : "benchmark";
    rep.b_name = b.controller == ControllerKind::Proposed ? "proposed"
                                                          : "benchmark";
    if (rep.a_name == rep.b_name) {
        rep.a_name += "_a";
        rep.b_name += "_b";
    }
    const RunLog log_a = run(a);
    const RunLog log_b = run(b);
    rep.a = metrics(log_a);
    rep.b = metrics(log_b);
    const auto flag = [&](double va, double vb) {
        if (va == vb) return std::string("tie");
        return va < vb ? rep.a_name : rep.b_name;
    };
    rep.faster_settling = flag(rep.a.settle_time, rep.b.settle_time);
    rep.lower_attitude_error = flag(rep.a.mean_psi, rep.b.mean_psi);
    rep.lower_position_error = flag(rep.a.e_x_max, rep.b.e_x_max);
    return rep;
}

namespace {

void append_metric(std::ostringstream& out, const std::string& prefix,
                   const RunMetrics& m) {
    out << prefix << ".rms_final = " << m.rms_final << '\n'
        << prefix << ".psi_max = " << m.psi_max << '\n'
        << prefix << ".psi_final = " << m.psi_final << '\n'
        << prefix << ".e_x_max = " << m.e_x_max << '\n'
        << prefix << ".e_x_final = " << m.e_x_final << '\n'
        << prefix << ".settle_time = " << m.settle_time << '\n'
        << prefix << ".mean_psi = " << m.mean_psi << '\n'
        << prefix << ".sat_count = " << m.sat_count << '\n'
        << prefix << ".thrust_min = " << m.thrust_min << '\n'
        << prefix << ".thrust_max = " << m.thrust_max << '\n';
}

}  // namespace

std::string format_report(const ComparisonReport& rep) {
    std::ostringstream out;
    out.precision(12);
    append_metric(out, rep.a_name, rep.a);
    append_metric(out, rep.b_name, rep.b);
    out << "faster_settling = " << rep.faster_settling << '\n'
        << "lower_attitude_error = " << rep.lower_attitude_error << '\n'
        << "lower_position_error = " << rep.lower_position_error << '\n';
    return out.str();
}

std::vector<BasinSnapshot> basin_report(const ScenarioConfig& cfg) {
    cfg.validate();
    FlightSchedule schedule = build_schedule(cfg);

    // Collect the states at t = 0 and at every mode switch by rolling the
    // scenario out once.
    std::vector<std::pair<double, RigidBodyState>> switch_states;
    switch_states.emplace_back(0.0, cfg.initial_state());
    if (schedule.entries.size() > 1) {
        const RunLog log = run(cfg);
        for (std::size_t e = 1; e < schedule.entries.size(); ++e) {
            const double t_switch = schedule.entries[e].t_start;
            const long i = std::lround(t_switch / cfg.dt);
            if (i >= 0 && i < static_cast<long>(log.rows.size())) {
                RigidBodyState s;
                s.x = log.rows[i].x;
                s.v = log.rows[i].v;
                s.r = log.rows[i].r;
                s.omega = log.rows[i].omega;
                switch_states.emplace_back(t_switch, s);
            }
        }
    }

    std::vector<BasinSnapshot> snaps;
    for (const auto& [t, s] : switch_states) {
        const ScheduleEntry& entry = schedule.entries[schedule.index_at(t)];
        BasinSnapshot snap;
        snap.t = t;
        snap.mode = entry.mode;
        if (entry.mode == FlightMode::Attitude) {
            snap.attitude = attitude_basin(s, entry.attitude.r_d(t),
                                           entry.attitude.omega_d(t), cfg.gains);
        } else {
            snap.attitude =
                attitude_basin(s, Eigen::Matrix3d::Identity(),
                               Eigen::Vector3d::Zero(), cfg.gains);
        }
        // Evaluate the position basin against the entry's position command
        // shifted to the snapshot time.
        PositionCommand shifted = entry.position;
        const double t0 = t;
        PositionCommand base = entry.position;
        shifted.x_d = [base, t0](double tau) { return base.x_d(t0 + tau); };
        shifted.xdot_d = [base, t0](double tau) { return base.xdot_d(t0 + tau); };
        shifted.xddot_d = [base, t0](double tau) {
            return base.xddot_d(t0 + tau);
        };
        shifted.xdddot_d = [base, t0](double tau) { return base.jerk(t0 + tau); };
        shifted.e_1d = [base, t0](double tau) { return base.e_1d(t0 + tau); };
        std::optional<double> e_bound;
        if (cfg.basin_variant != BasinVariant::PositionFree) {
            e_bound = cfg.basin_e_bound;
        }
        snap.position = position_basin(s, shifted, cfg.gains, cfg.params,
                                       cfg.basin_b, cfg.basin_variant, e_bound,
                                       cfg.t_final - t);
        snaps.push_back(snap);
    }
    return snaps;
}

std::string format_basin(const std::vector<BasinSnapshot>& snaps) {
    std::ostringstream out;
    out.precision(12);
    for (std::size_t i = 0; i < snaps.size(); ++i) {
        const BasinSnapshot& s = snaps[i];
        const std::string p = "switch" + std::to_string(i);
        out << p << ".t = " << s.t << '\n'
            << p << ".mode = "
            << (s.mode == FlightMode::Attitude ? "attitude" : "position") << '\n'
            << p << ".attitude.psi0 = " << s.attitude.psi0 << '\n'
            << p << ".attitude.e_omega0_normsq = " << s.attitude.e_omega0_normsq
            << '\n'
            << p << ".attitude.bound = " << s.attitude.bound << '\n'
            << p << ".attitude.inside = " << (s.attitude.inside ? 1 : 0) << '\n'
            << p << ".position.psi0 = " << s.position.psi0 << '\n'
            << p << ".position.psi_p = " << s.position.psi_p << '\n'
            << p << ".position.theta = " << s.position.theta << '\n'
            << p << ".position.theta_max = " << s.position.theta_max << '\n'
            << p << ".position.b = " << s.position.b << '\n'
            << p << ".position.w3_ok = " << (s.position.w3_ok ? 1 : 0) << '\n'
            << p << ".position.e_omega_bound_ok = "
            << (s.position.e_omega_bound_ok ? 1 : 0) << '\n'
            << p << ".position.inside = " << (s.position.inside ? 1 : 0) << '\n'
            << p << ".position.prop5_attractive = "
            << (s.position.prop5_attractive ? 1 : 0) << '\n';
    }
    return out.str();
}

std::vector<SweepRow> sweep(const ScenarioConfig& base, const SweepSpec& spec) {
    // Cartesian grid in axis order; index decomposes most-significant-first.
    std::size_t total = 1;
    for (const auto& [name, values] : spec.axes) total *= values.size();

    std::vector<SweepRow> rows(total);
    const auto eval_point = [&](std::size_t index) {
        GainSet g = base.gains;
        std::size_t rem = index;
        for (std::size_t a = spec.axes.size(); a-- > 0;) {
            const auto& [name, values] = spec.axes[a];
            const double v = values[rem % values.size()];
            rem /= values.size();
            if (name == "eta") g.eta = v;
            else if (name == "k_r") g.k_r = v;
            else if (name == "k_omega") g.k_omega = v;
            else if (name == "a") g.a = v;
            else if (name == "k_x") g.k_x = v;
            else if (name == "k_v") g.k_v = v;
        }
        SweepRow row;
        row.gains = g;
        row.theta_max_free = theta_max_position_free(g, base.params);
        row.theta_max_bounded = theta_max_bounded(g, base.params);
        row.psi_p = psi_p_from_theta(row.theta_max_free);
        const CertificateMatrices att =
            certificate_matrices_attitude(g, spec.psi_a);
        row.tau = att.tau;
        row.lambda_min_w1 = lambda_min(att.w1);
        const double b = base.basin_b > 0.0
                             ? base.basin_b
                             : base.params.m * base.params.g * 1.01;
        const double theta = std::max(row.theta_max_free * 0.5, 1e-6);
        const CertificateMatrices pos = position_certificate(
            g, base.params, b, theta, BasinVariant::PositionFree);
        row.lambda_min_pi1 = lambda_min(pos.pi1);
        row.w3_ok = pos.w3_ok;
        return row;
    };

    unsigned workers = spec.workers > 0
                           ? static_cast<unsigned>(spec.workers)
                           : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, total == 0 ? 1 : total);
    if (workers <= 1) {
        for (std::size_t i = 0; i < total; ++i) rows[i] = eval_point(i);
        return rows;
    }
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            for (std::size_t i = w; i < total; i += workers) {
                rows[i] = eval_point(i);
            }
        });
    }
    for (auto& th : pool) th.join();
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out =
        "eta,k_r,k_omega,a,k_x,k_v,theta_max_free,theta_max_bounded,psi_p,tau,"
        "lambda_min_w1,lambda_min_pi1,w3_ok\n";
    for (const SweepRow& r : rows) {
        const auto push = [&out](double v, char sep) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g%c", v, sep);
            out += buf;
        };
        push(r.gains.eta, ',');
        push(r.gains.k_r, ',');
        push(r.gains.k_omega, ',');
        push(r.gains.a, ',');
        push(r.gains.k_x, ',');
        push(r.gains.k_v, ',');
        push(r.theta_max_free, ',');
        push(r.theta_max_bounded, ',');
        push(r.psi_p, ',');
        push(r.tau, ',');
        push(r.lambda_min_w1, ',');
        push(r.lambda_min_pi1, ',');
        out += r.w3_ok ? "1\n" : "0\n";
    }
    return out;
}

}  // namespace gsc
