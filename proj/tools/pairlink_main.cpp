#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "pairlink/oracle.hpp"
#include "pairlink/tables.hpp"

using namespace pairlink;

namespace {

enum ExitCode { kOk = 0, kValidation = 1, kNumericGuard = 2, kThreshold = 3 };

Scenario parse_scenario(const std::string& s) {
    if (s == "global") return Scenario::GlobalRef;
    if (s == "mutual") return Scenario::MutualRefOnly;
    throw validation_error("scenario: must be 'global' or 'mutual'");
}

AxisSpec parse_axis_spec(const std::string& text) {
    // name:min:max:count:lin|log
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 5)
        throw validation_error("axis spec '" + text + "': expected name:min:max:count:lin|log");
    AxisSpec ax;
    ax.name = parts[0];
    try {
        ax.min = std::stod(parts[1]);
        ax.max = std::stod(parts[2]);
        ax.count = static_cast<size_t>(std::stoull(parts[3]));
    } catch (const std::exception&) {
        throw validation_error("axis spec '" + text + "': cannot parse numbers");
    }
    if (parts[4] == "lin") ax.log_scale = false;
    else if (parts[4] == "log") ax.log_scale = true;
    else throw validation_error("axis spec '" + text + "': scale must be lin or log");
    return ax;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw validation_error("cannot open output file: " + out_path);
    out << text;
}

void emit_table(const Table& table, const std::string& format, const std::string& out_path) {
    std::ostringstream buf;
    if (format == "csv") write_table_csv(table, buf);
    else if (format == "json") write_table_json(table, buf);
    else throw validation_error("format: must be csv or json");
    emit(buf.str(), out_path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Photon-pair fiber link timing and key-rate model"};
    app.require_subcommand(1);

    std::string config_path, out_path, format = "csv", scenario_str = "global";
    uint64_t seed = 1, trials = 1000000;
    unsigned workers = 0;
    double threshold = 1e-6;

    // stats
    auto* stats_cmd = app.add_subcommand("stats", "Temporal statistics along one axis");
    std::string stats_axis = "length_m";
    double stats_min = 0.0, stats_max = 100e3;
    size_t stats_count = 101;
    bool stats_log = false;
    stats_cmd->add_option("--config", config_path, "Config file")->required();
    stats_cmd->add_option("--axis", stats_axis, "Axis: length_m or sigma_rad_s");
    stats_cmd->add_option("--min", stats_min, "Axis minimum");
    stats_cmd->add_option("--max", stats_max, "Axis maximum");
    stats_cmd->add_option("--count", stats_count, "Axis point count");
    stats_cmd->add_flag("--log", stats_log, "Logarithmic axis");
    stats_cmd->add_option("--out", out_path, "Output path (default stdout)");
    stats_cmd->add_option("--format", format, "csv or json");

    // keyrate
    auto* keyrate_cmd = app.add_subcommand("keyrate", "Key rate over fiber length");
    double kr_min = 0.0, kr_max = 300e3;
    size_t kr_count = 301;
    bool kr_log = false;
    std::vector<double> kr_rhos;
    keyrate_cmd->add_option("--config", config_path, "Config file")->required();
    keyrate_cmd->add_option("--scenario", scenario_str, "global or mutual");
    keyrate_cmd->add_option("--min", kr_min, "Length minimum [m]");
    keyrate_cmd->add_option("--max", kr_max, "Length maximum [m]");
    keyrate_cmd->add_option("--count", kr_count, "Point count");
    keyrate_cmd->add_flag("--log", kr_log, "Logarithmic axis");
    keyrate_cmd->add_option("--rho", kr_rhos, "Column block per rho (repeatable)");
    keyrate_cmd->add_option("--out", out_path, "Output path");
    keyrate_cmd->add_option("--format", format, "csv or json");

    // oracle
    auto* oracle_cmd = app.add_subcommand("oracle", "Numeric vs analytic propagation check");
    size_t oracle_n = 512;
    double oracle_span = 9.0;
    oracle_cmd->add_option("--config", config_path, "Config file")->required();
    oracle_cmd->add_option("--grid", oracle_n, "Grid points per axis (power of two)");
    oracle_cmd->add_option("--span-sigmas", oracle_span, "Spectral half-span in marginal sigmas");
    oracle_cmd->add_option("--threshold", threshold, "Max accepted relative L2 error");
    oracle_cmd->add_option("--out", out_path, "Output path");

    // montecarlo
    auto* mc_cmd = app.add_subcommand("montecarlo", "Event-level protocol simulation");
    mc_cmd->add_option("--config", config_path, "Config file")->required();
    mc_cmd->add_option("--scenario", scenario_str, "global or mutual");
    mc_cmd->add_option("--trials", trials, "Number of emitted pairs");
    mc_cmd->add_option("--seed", seed, "RNG seed");
    mc_cmd->add_option("--workers", workers, "Worker threads (0 = all cores)");
    mc_cmd->add_option("--out", out_path, "Output path");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "Cartesian parameter sweep");
    std::vector<std::string> sweep_axes;
    sweep_cmd->add_option("--config", config_path, "Config file")->required();
    sweep_cmd->add_option("--axis", sweep_axes, "name:min:max:count:lin|log (repeatable)")
        ->required();
    sweep_cmd->add_option("--scenario", scenario_str, "global or mutual");
    sweep_cmd->add_option("--out", out_path, "Output path");
    sweep_cmd->add_option("--format", format, "csv or json");

    // grid
    auto* grid_cmd = app.add_subcommand("grid", "Time-domain pair amplitude on a grid");
    size_t grid_points = 512;
    double grid_span = 6.0;
    std::string grid_format = "csv";
    grid_cmd->add_option("--config", config_path, "Config file")->required();
    grid_cmd->add_option("--points", grid_points, "Points per axis");
    grid_cmd->add_option("--span-sigmas", grid_span, "Half-span in marginal temporal sigmas");
    grid_cmd->add_option("--format", grid_format, "csv or bin");
    grid_cmd->add_option("--out", out_path, "Output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kValidation;
    }

    try {
        const LinkConfig config = load_config(config_path);

        if (*stats_cmd) {
            AxisSpec ax{stats_axis, stats_min, stats_max, stats_count, stats_log};
            emit_table(stats_table(config, ax), format, out_path);
        } else if (*keyrate_cmd) {
            AxisSpec ax{"length_m", kr_min, kr_max, kr_count, kr_log};
            emit_table(keyrate_table(config, parse_scenario(scenario_str), ax, kr_rhos),
                       format, out_path);
        } else if (*oracle_cmd) {
            OracleGridParams params{oracle_n, oracle_span};
            const OracleReport report =
                oracle_report(config.source, config.fiber.beta, config.fiber.length_m, params);
            emit(report.to_json() + "\n", out_path);
            if (report.rel_l2_error > threshold) {
                std::cerr << "oracle: rel_l2_error " << report.rel_l2_error
                          << " exceeds threshold " << threshold << "\n";
                return kThreshold;
            }
        } else if (*mc_cmd) {
            emit(mc_comparison_json(config, parse_scenario(scenario_str), trials, seed, workers) + "\n",
                 out_path);
        } else if (*sweep_cmd) {
            std::vector<AxisSpec> axes;
            for (const auto& spec : sweep_axes) axes.push_back(parse_axis_spec(spec));
            emit_table(sweep_table(config, parse_scenario(scenario_str), axes), format, out_path);
        } else if (*grid_cmd) {
            const BiphotonState state = make_state(config);
            const auto t1 = default_time_axis(state, 1, grid_points, grid_span);
            const auto t2 = default_time_axis(state, 2, grid_points, grid_span);
            const ComplexGrid grid = evaluate_grid(state, t1, t2);
            std::ostringstream buf(std::ios::binary);
            if (grid_format == "csv") write_grid_csv(grid, buf);
            else if (grid_format == "bin") write_grid_binary(grid, buf);
            else throw validation_error("grid format: must be csv or bin");
            emit(buf.str(), out_path);
        }
    } catch (const numeric_guard_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumericGuard;
    } catch (const validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidation;
    }
    return kOk;
}
