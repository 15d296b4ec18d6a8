#include "gsc/scenario.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "gsc/errors.hpp"
#include "gsc/so3.hpp"

namespace gsc {

void ScenarioConfig::validate() const {
    if (!(dt > 0.0)) throw ConfigError("sim.dt must be positive");
    if (!(t_final >= dt)) throw ConfigError("sim.t_final must be at least dt");
    params.validate();
    gains.validate();
    bench.validate();
    alloc.validate(params);
    if (std::abs(init_axis.norm() - 0.0) < 1e-12 && init_angle != 0.0) {
        throw ConfigError("init.attitude axis must be nonzero");
    }
}

RigidBodyState ScenarioConfig::initial_state() const {
    RigidBodyState s;
    s.x = init_x;
    s.v = init_v;
    s.omega = init_omega;
    s.r = init_angle == 0.0 ? Eigen::Matrix3d::Identity()
                            : axis_angle(init_axis, init_angle);
    return s;
}

ScenarioConfig scenario_defaults(const std::string& name) {
    ScenarioConfig cfg;
    cfg.scenario = name;
    if (name == "hover") {
        cfg.t_final = 2.0;
    } else if (name == "step90") {
        cfg.t_final = 3.0;
    } else if (name == "step_position_1cm") {
        cfg.t_final = 3.0;
    } else if (name == "flip_full") {
        cfg.t_final = 10.0;
        cfg.strategy_enabled = true;
    } else {
        throw ConfigError("unknown scenario '" + name + "'");
    }
    return cfg;
}

FlightSchedule build_schedule(const ScenarioConfig& cfg) {
    FlightSchedule sched;
    if (cfg.scenario == "hover") {
        ScheduleEntry e;
        e.mode = FlightMode::Position;
        e.t_start = 0.0;
        e.t_end = cfg.t_final;
        e.position = PositionCommand::waypoint(cfg.init_x);
        e.waypoint = cfg.init_x;
        sched.entries.push_back(e);
    } else if (cfg.scenario == "step90") {
        ScheduleEntry e;
        e.mode = FlightMode::Attitude;
        e.t_start = 0.0;
        e.t_end = cfg.t_final;
        e.attitude = AttitudeCommand::constant(
            axis_angle(Eigen::Vector3d::UnitY(), M_PI / 2.0));
        e.position = PositionCommand::waypoint(cfg.init_x);
        e.waypoint = cfg.init_x;
        sched.entries.push_back(e);
    } else if (cfg.scenario == "step_position_1cm") {
        ScheduleEntry e;
        e.mode = FlightMode::Position;
        e.t_start = 0.0;
        e.t_end = cfg.t_final;
        const Eigen::Vector3d target(0.01, 0.01, 0.01);
        e.position = PositionCommand::waypoint(target);
        e.waypoint = target;
        sched.entries.push_back(e);
    } else if (cfg.scenario == "flip_full") {
        sched = flip_full_schedule();
        if (cfg.t_final != 10.0) {
            throw ConfigError("flip_full runs on a fixed 10 s schedule");
        }
    } else {
        throw ConfigError("unknown scenario '" + cfg.scenario + "'");
    }
    sched.validate();
    return sched;
}

namespace {

std::vector<double> parse_numbers(const std::string& value,
                                  const std::string& key, std::size_t count) {
    std::istringstream in(value);
    std::vector<double> out;
    double x;
    while (in >> x) out.push_back(x);
    if (out.size() != count) {
        throw ConfigError("key '" + key + "' expects " + std::to_string(count) +
                          " numbers, got '" + value + "'");
    }
    return out;
}

double parse_double(const std::string& value, const std::string& key) {
    return parse_numbers(value, key, 1)[0];
}

bool parse_bool(const std::string& value, const std::string& key) {
    if (value == "true" || value == "1" || value == "on") return true;
    if (value == "false" || value == "0" || value == "off") return false;
    throw ConfigError("key '" + key + "' expects a boolean, got '" + value +
                      "'");
}

Eigen::Vector3d parse_vec3(const std::string& value, const std::string& key) {
    const auto v = parse_numbers(value, key, 3);
    return {v[0], v[1], v[2]};
}

void apply_key(ScenarioConfig& cfg, const std::string& key,
               const std::string& value) {
    if (key == "scenario") {
        // Handled by the loader; accept silently so overrides round-trip.
        if (value != cfg.scenario) {
            throw ConfigError("scenario cannot be changed by an override");
        }
    } else if (key == "sim.dt") {
        cfg.dt = parse_double(value, key);
    } else if (key == "sim.t_final") {
        cfg.t_final = parse_double(value, key);
    } else if (key == "sim.controller") {
        if (value == "proposed") {
            cfg.controller = ControllerKind::Proposed;
        } else if (value == "benchmark") {
            cfg.controller = ControllerKind::Benchmark;
        } else {
            throw ConfigError("sim.controller must be proposed or benchmark");
        }
    } else if (key == "sim.strategy") {
        cfg.strategy_enabled = parse_bool(value, key);
    } else if (key == "sim.fp") {
        cfg.fp_enabled = parse_bool(value, key);
    } else if (key == "sim.seed") {
        cfg.seed = static_cast<std::uint64_t>(parse_double(value, key));
    } else if (key == "init.x") {
        cfg.init_x = parse_vec3(value, key);
    } else if (key == "init.v") {
        cfg.init_v = parse_vec3(value, key);
    } else if (key == "init.omega") {
        cfg.init_omega = parse_vec3(value, key);
    } else if (key == "init.attitude") {
        const auto v = parse_numbers(value, key, 4);
        cfg.init_axis = {v[0], v[1], v[2]};
        cfg.init_angle = v[3];
    } else if (key == "params.m") {
        cfg.params.m = parse_double(value, key);
    } else if (key == "params.g") {
        cfg.params.g = parse_double(value, key);
    } else if (key == "params.arm") {
        cfg.params.arm = parse_double(value, key);
    } else if (key == "params.b_t") {
        cfg.params.b_t = parse_double(value, key);
    } else if (key == "params.inertia_diag") {
        cfg.params.inertia = parse_vec3(value, key).asDiagonal();
    } else if (key == "gains.eta") {
        cfg.gains.eta = parse_double(value, key);
    } else if (key == "gains.k_r") {
        cfg.gains.k_r = parse_double(value, key);
    } else if (key == "gains.k_omega") {
        cfg.gains.k_omega = parse_double(value, key);
    } else if (key == "gains.a") {
        cfg.gains.a = parse_double(value, key);
    } else if (key == "gains.k_x") {
        cfg.gains.k_x = parse_double(value, key);
    } else if (key == "gains.k_v") {
        cfg.gains.k_v = parse_double(value, key);
    } else if (key == "gains.k_xi") {
        cfg.gains.k_xi = parse_double(value, key);
        cfg.alloc.k_xi = cfg.gains.k_xi;
    } else if (key == "gains.iota") {
        cfg.gains.iota = parse_vec3(value, key);
        cfg.alloc.iota = cfg.gains.iota;
    } else if (key == "gains.k_h1") {
        cfg.gains.k_h1 = parse_double(value, key);
        cfg.alloc.k_h1 = cfg.gains.k_h1;
    } else if (key == "gains.k_h2") {
        cfg.gains.k_h2 = parse_double(value, key);
        cfg.alloc.k_h2 = cfg.gains.k_h2;
    } else if (key == "bench.k_r_diag") {
        cfg.bench.k_r = parse_vec3(value, key).asDiagonal();
    } else if (key == "bench.k_omega_diag") {
        cfg.bench.k_omega = parse_vec3(value, key).asDiagonal();
    } else if (key == "bench.k_x") {
        cfg.bench.k_x = parse_double(value, key);
    } else if (key == "bench.k_v") {
        cfg.bench.k_v = parse_double(value, key);
    } else if (key == "alloc.f_min") {
        cfg.alloc.f_min = parse_double(value, key);
    } else if (key == "alloc.f_idl") {
        cfg.alloc.f_idl = parse_double(value, key);
    } else if (key == "alloc.f_max") {
        cfg.alloc.f_max = parse_double(value, key);
    } else if (key == "alloc.gradient_step") {
        cfg.alloc.gradient_step = parse_double(value, key);
    } else if (key == "alloc.gradient_clamp") {
        cfg.alloc.gradient_clamp = parse_double(value, key);
    } else if (key == "basin.b") {
        cfg.basin_b = parse_double(value, key);
    } else if (key == "basin.variant") {
        if (value == "position_free") {
            cfg.basin_variant = BasinVariant::PositionFree;
        } else if (value == "position_bounded") {
            cfg.basin_variant = BasinVariant::PositionBounded;
        } else if (value == "velocity_bounded") {
            cfg.basin_variant = BasinVariant::VelocityBounded;
        } else {
            throw ConfigError("basin.variant must be position_free, "
                              "position_bounded or velocity_bounded");
        }
    } else if (key == "basin.e_bound") {
        cfg.basin_e_bound = parse_double(value, key);
    } else if (key.rfind("sweep.", 0) == 0) {
        // Sweep keys are consumed by load_sweep; ignore here.
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

struct ParsedLine {
    std::string key;
    std::string value;
};

std::vector<ParsedLine> parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    std::vector<ParsedLine> lines;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": expected 'key = value'");
        }
        const auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{}
                                          : s.substr(b, e - b + 1);
        };
        lines.push_back({trim(line.substr(0, eq)), trim(line.substr(eq + 1))});
        if (lines.back().key.empty()) {
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": empty key");
        }
    }
    return lines;
}

}  // namespace

ScenarioConfig load_scenario(const std::string& path) {
    const auto lines = parse_file(path);
    std::string name = "hover";
    for (const auto& l : lines) {
        if (l.key == "scenario") name = l.value;
    }
    ScenarioConfig cfg = scenario_defaults(name);
    for (const auto& l : lines) {
        if (l.key == "scenario") continue;
        apply_key(cfg, l.key, l.value);
    }
    return cfg;
}

void apply_override(ScenarioConfig& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) {
        throw ConfigError("override '" + assignment + "' must be key=value");
    }
    apply_key(cfg, assignment.substr(0, eq), assignment.substr(eq + 1));
}

SweepSpec load_sweep(const std::string& path,
                     const std::vector<std::string>& overrides) {
    std::vector<ParsedLine> lines = parse_file(path);
    for (const auto& o : overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("override '" + o + "' must be key=value");
        }
        lines.push_back({o.substr(0, eq), o.substr(eq + 1)});
    }

    static const std::map<std::string, int> axis_names = {
        {"eta", 0}, {"k_r", 1}, {"k_omega", 2}, {"a", 3}, {"k_x", 4}, {"k_v", 5}};

    SweepSpec spec;
    for (const auto& l : lines) {
        if (l.key.rfind("sweep.", 0) != 0) continue;
        const std::string sub = l.key.substr(6);
        if (sub == "workers") {
            spec.workers = static_cast<int>(parse_double(l.value, l.key));
        } else if (sub == "psi_a") {
            spec.psi_a = parse_double(l.value, l.key);
        } else if (axis_names.count(sub) != 0) {
            std::vector<double> values;
            std::string token;
            std::istringstream in(l.value);
            while (std::getline(in, token, ',')) {
                values.push_back(parse_double(token, l.key));
            }
            if (values.empty()) {
                throw ConfigError("empty sweep axis '" + l.key + "'");
            }
            spec.axes.emplace_back(sub, std::move(values));
        } else {
            throw ConfigError("unknown sweep key '" + l.key + "'");
        }
    }
    return spec;
}

}  // namespace gsc
