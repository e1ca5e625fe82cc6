#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "gridsync/gridsync.hpp"

namespace {

// Exit codes: 0 ok, 1 config error, 2 safety violation during a run.
constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitSafetyViolation = 2;

std::optional<std::string> slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::optional<gridsync::ScenarioConfig> load_scenario(const std::string& path) {
    auto text = slurp(path);
    if (!text) {
        std::cerr << "error: cannot read scenario file: " << path << "\n";
        return std::nullopt;
    }
    std::string base_dir = std::filesystem::path(path).parent_path().string();
    auto parsed = gridsync::parse_scenario(*text, base_dir);
    if (!parsed.ok()) {
        for (const auto& e : parsed.errors) {
            if (e.line > 0) std::cerr << path << ":" << e.line << ": " << e.message << "\n";
            else std::cerr << path << ": " << e.message << "\n";
        }
        return std::nullopt;
    }
    return parsed.config;
}

int cmd_run(const std::string& scenario_path, const std::string& out_path,
            std::optional<std::uint64_t> seed_override) {
    auto cfg = load_scenario(scenario_path);
    if (!cfg) return kExitConfigError;
    if (seed_override) cfg->seed = *seed_override;

    gridsync::RunResult result = gridsync::run_scenario(*cfg);
    std::string csv = gridsync::export_trace(result.records);

    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot write " << out_path << "\n";
            return kExitConfigError;
        }
        out << csv;
    } else {
        std::cout << csv;
    }

    const auto& last = result.records.back();
    std::cerr << "ticks: " << result.records.size() << ", final gen speed: " << last.gen_speed_rpm
              << " rpm, active source: " << gridsync::source_name(last.active_source) << "\n";
    if (!result.safety_events.empty()) {
        std::cerr << "SAFETY: " << result.safety_events.size()
                  << " refused breaker operation(s) during run\n";
        return kExitSafetyViolation;
    }
    return kExitOk;
}

int cmd_dispatch(const std::string& grid_path, const std::string& gen_path,
                 const std::string& load_path, double startup, double hysteresis,
                 bool power_saver) {
    auto grid_text = slurp(grid_path);
    auto gen_text = slurp(gen_path);
    auto load_text = slurp(load_path);
    if (!grid_text || !gen_text || !load_text) {
        std::cerr << "error: cannot read tariff/load file\n";
        return kExitConfigError;
    }
    try {
        auto grid = gridsync::parse_tariff(*grid_text, gridsync::Source::Grid);
        auto gen = gridsync::parse_tariff(*gen_text, gridsync::Source::Generator);
        auto load = gridsync::parse_load(*load_text);
        gridsync::DispatchOptions opts;
        opts.startup_cost_rupees = startup;
        opts.hysteresis_margin = hysteresis;
        opts.power_saver = power_saver;
        auto schedule = gridsync::build_schedule(grid, gen, load, opts);
        for (int h = 0; h < 24; ++h) {
            std::printf("%02d:00-%02d:00  %-9s  grid %.2f  gen %.2f  load %.2f kW\n", h, h + 1,
                        gridsync::source_name(schedule.assignment[static_cast<std::size_t>(h)]),
                        gridsync::tariff_at(grid, h), gridsync::tariff_at(gen, h),
                        load.demand_kW[static_cast<std::size_t>(h)]);
        }
        std::printf("total cost: %.4f rupees\n", schedule.total_cost_rupees);
        std::printf("switches: %d\n", schedule.switch_count);
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    }
}

int cmd_check(const std::string& scenario_path) {
    auto cfg = load_scenario(scenario_path);
    if (!cfg) return kExitConfigError;
    std::cout << "ok\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DG-to-grid synchronization simulator and tariff dispatcher"};
    app.require_subcommand(1);

    std::string scenario_path, out_path;
    std::uint64_t seed = 0;
    bool seed_set = false;

    auto* run = app.add_subcommand("run", "Run a scenario and export the trace");
    run->add_option("scenario", scenario_path, "Scenario file")->required();
    run->add_option("--out", out_path, "Write CSV trace to this file (default stdout)");
    run->add_option("--seed", seed, "Override the scenario seed")->each([&](const std::string&) {
        seed_set = true;
    });

    std::string grid_path, gen_path, load_path;
    double startup = 2.0, hysteresis = 0.0;
    bool power_saver = false;
    auto* dispatch = app.add_subcommand("dispatch", "Print the 24-hour source schedule");
    dispatch->add_option("--grid", grid_path, "Grid tariff file")->required();
    dispatch->add_option("--gen", gen_path, "Generator tariff file")->required();
    dispatch->add_option("--load", load_path, "Load profile file")->required();
    dispatch->add_option("--startup", startup, "Generator startup cost, rupees");
    dispatch->add_option("--hysteresis", hysteresis, "Switch hysteresis, rupees/kWh");
    dispatch->add_flag("--power-saver", power_saver, "Idle the set between runs");

    std::string check_path;
    auto* check = app.add_subcommand("check", "Validate a scenario file");
    check->add_option("scenario", check_path, "Scenario file")->required();

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        return cmd_run(scenario_path, out_path,
                       seed_set ? std::optional<std::uint64_t>(seed) : std::nullopt);
    }
    if (dispatch->parsed()) {
        return cmd_dispatch(grid_path, gen_path, load_path, startup, hysteresis, power_saver);
    }
    if (check->parsed()) return cmd_check(check_path);
    return kExitConfigError;
}
