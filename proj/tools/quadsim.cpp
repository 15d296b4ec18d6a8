// Scenario runner for the geometric surface-based flight controller:
// closed-loop rollouts, controller comparisons, basin-of-attraction
// reports, and gain-grid certificate sweeps. Outputs are offline
// artifacts (CSV logs and key=value reports).

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "gsc/errors.hpp"
#include "gsc/simulate.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitBlowup = 3;

gsc::ScenarioConfig load_with_overrides(const std::string& path,
                                        const std::vector<std::string>& sets) {
    gsc::ScenarioConfig cfg = gsc::load_scenario(path);
    for (const std::string& s : sets) {
        gsc::apply_override(cfg, s);
    }
    return cfg;
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw gsc::ConfigError("cannot open output file '" + path + "'");
    }
    out << content;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quadrotor geometric-control simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string config_b_path;
    std::string out_path;
    std::vector<std::string> sets;
    std::vector<std::string> sets_b;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "scenario config file")
            ->required();
        cmd->add_option("--out", out_path, "output path ('-' for stdout)");
        cmd->add_option("--set", sets, "override, key=value (repeatable)");
    };

    CLI::App* cmd_run = app.add_subcommand("run", "roll out one scenario to CSV");
    add_common(cmd_run);

    CLI::App* cmd_compare =
        app.add_subcommand("compare", "proposed vs benchmark on one scenario");
    add_common(cmd_compare);
    cmd_compare->add_option("--config-b", config_b_path,
                            "explicit second config (default: same scenario "
                            "with the other controller)");
    cmd_compare->add_option("--set-b", sets_b,
                            "override for the second run (repeatable)");

    CLI::App* cmd_basin = app.add_subcommand(
        "basin", "basin reports at the initial condition and mode switches");
    add_common(cmd_basin);

    CLI::App* cmd_sweep =
        app.add_subcommand("sweep", "gain-grid sweep over the certificates");
    add_common(cmd_sweep);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_run->parsed()) {
            const gsc::RunLog log = gsc::run(load_with_overrides(config_path, sets));
            write_output(out_path, gsc::csv_string(log));
        } else if (cmd_compare->parsed()) {
            gsc::ScenarioConfig a = load_with_overrides(config_path, sets);
            gsc::ScenarioConfig b;
            if (!config_b_path.empty()) {
                b = load_with_overrides(config_b_path, sets_b);
            } else {
                b = a;
                b.controller = a.controller == gsc::ControllerKind::Proposed
                                   ? gsc::ControllerKind::Benchmark
                                   : gsc::ControllerKind::Proposed;
                for (const std::string& s : sets_b) gsc::apply_override(b, s);
            }
            write_output(out_path, gsc::format_report(gsc::compare(a, b)));
        } else if (cmd_basin->parsed()) {
            const auto snaps =
                gsc::basin_report(load_with_overrides(config_path, sets));
            write_output(out_path, gsc::format_basin(snaps));
        } else if (cmd_sweep->parsed()) {
            const gsc::ScenarioConfig base = load_with_overrides(config_path, sets);
            const gsc::SweepSpec spec = gsc::load_sweep(config_path, sets);
            write_output(out_path, gsc::sweep_csv(gsc::sweep(base, spec)));
        }
    } catch (const gsc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const gsc::NumericalBlowup& e) {
        std::cerr << "numerical blowup: " << e.what() << '\n';
        return kExitBlowup;
    } catch (const gsc::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
