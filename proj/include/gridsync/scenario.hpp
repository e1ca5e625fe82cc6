#pragma once

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gridsync/clock.hpp"
#include "gridsync/dispatch.hpp"
#include "gridsync/plant.hpp"
#include "gridsync/rng.hpp"
#include "gridsync/sensing.hpp"
#include "gridsync/switchgear.hpp"
#include "gridsync/synchronizer.hpp"
#include "gridsync/trace.hpp"

namespace gridsync {

struct ScenarioConfig {
    std::uint64_t seed = 1;
    double duration_s = 30.0;
    std::int64_t dt_ms = 100;

    int poles = 4;
    double speed_tau_s = 0.5;
    double emf_gain_VperV = 10.0;
    double exc_ramp_Vps = 5.0;
    double initial_gen_speed_rpm = 0.0;
    double initial_gen_setpoint_rpm = 0.0;
    double initial_excitation_V = 0.0;

    double grid_freq_Hz = 50.0;
    double grid_voltage_V = 230.0;
    double grid_freq_jitter_Hz = 0.0;
    double grid_voltage_jitter_V = 0.0;
    // When set, the grid's frequency is derived so 120 f / P equals this,
    // letting scenarios state a speed target directly.
    std::optional<double> grid_equiv_speed_rpm;

    SyncTolerances tolerances;
    SpeedTierTable tiers = SpeedTierTable::standard();

    std::string grid_tariff_file;
    std::string gen_tariff_file;
    std::string load_file;
    std::optional<TariffCurve> grid_tariff;
    std::optional<TariffCurve> gen_tariff;
    std::optional<LoadProfile> load;
    DispatchOptions dispatch;

    bool breaker_grid_closed_initially = true;
    bool breaker_dg_closed_initially = false;
};

struct ParseError {
    int line;  // 0 when not tied to a line
    std::string message;
};

struct ScenarioParseResult {
    std::optional<ScenarioConfig> config;
    std::vector<ParseError> errors;

    bool ok() const { return config.has_value(); }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline bool parse_double(const std::string& s, double& out) {
    std::istringstream in(s);
    in >> out;
    return static_cast<bool>(in) && in.eof();
}

inline bool parse_int(const std::string& s, std::int64_t& out) {
    std::istringstream in(s);
    in >> out;
    return static_cast<bool>(in) && in.eof();
}

inline std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// "500:50,100:10,2:2" -- lower bounds descending, increments per tier.
inline bool parse_tiers(const std::string& s, double tolerance, SpeedTierTable& out,
                        std::string& err) {
    SpeedTierTable table;
    table.tolerance_rpm = tolerance;
    double upper = std::numeric_limits<double>::infinity();
    std::istringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        auto colon = item.find(':');
        if (colon == std::string::npos) {
            err = "expected lower:increment pairs";
            return false;
        }
        double lower, inc;
        if (!parse_double(trim(item.substr(0, colon)), lower) ||
            !parse_double(trim(item.substr(colon + 1)), inc)) {
            err = "malformed tier number";
            return false;
        }
        if (inc <= 0.0) {
            err = "tier increment must be > 0";
            return false;
        }
        if (lower >= upper) {
            err = "tier lower bounds must be strictly descending";
            return false;
        }
        table.tiers.push_back({lower, upper, inc});
        upper = lower;
    }
    if (table.tiers.empty()) {
        err = "empty tier table";
        return false;
    }
    if (table.tiers.back().lower_rpm > tolerance) {
        err = "lowest tier must reach down to the speed tolerance";
        return false;
    }
    for (std::size_t i = 1; i < table.tiers.size(); ++i) {
        if (table.tiers[i].increment_rpm > table.tiers[i - 1].increment_rpm) {
            err = "tier increments must not increase toward smaller differences";
            return false;
        }
    }
    out = table;
    return true;
}

}  // namespace detail

/// Parse a `key = value` scenario file. Unknown keys, malformed numbers and
/// out-of-range values are all collected with their line numbers; a config
/// is returned only when there are no errors. Referenced tariff/load files
/// are resolved against base_dir and must parse.
inline ScenarioParseResult parse_scenario(const std::string& text,
                                          const std::string& base_dir = "") {
    ScenarioParseResult result;
    ScenarioConfig cfg;
    std::vector<ParseError>& errors = result.errors;

    std::optional<std::string> tiers_raw;
    int tiers_line = 0;

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::string t = detail::trim(line);
        if (t.empty()) continue;
        auto eq = t.find('=');
        if (eq == std::string::npos) {
            errors.push_back({lineno, "expected `key = value`"});
            continue;
        }
        std::string key = detail::trim(t.substr(0, eq));
        std::string value = detail::trim(t.substr(eq + 1));
        if (key.empty() || value.empty()) {
            errors.push_back({lineno, "empty key or value"});
            continue;
        }

        auto bad_number = [&] { errors.push_back({lineno, "malformed number for `" + key + "`"}); };
        auto bad_range = [&](const std::string& why) {
            errors.push_back({lineno, "`" + key + "` " + why});
        };

        auto set_double = [&](double& target, auto range_check, const char* why) {
            double v;
            if (!detail::parse_double(value, v)) { bad_number(); return; }
            if (!range_check(v)) { bad_range(why); return; }
            target = v;
        };
        auto positive = [](double v) { return v > 0.0; };
        auto non_negative = [](double v) { return v >= 0.0; };

        if (key == "seed") {
            std::int64_t v;
            if (!detail::parse_int(value, v) || v < 0) bad_number();
            else cfg.seed = static_cast<std::uint64_t>(v);
        } else if (key == "duration_s") {
            set_double(cfg.duration_s, positive, "must be > 0");
        } else if (key == "dt_ms") {
            std::int64_t v;
            if (!detail::parse_int(value, v)) bad_number();
            else if (v <= 0) bad_range("must be > 0");
            else cfg.dt_ms = v;
        } else if (key == "poles") {
            std::int64_t v;
            if (!detail::parse_int(value, v)) bad_number();
            else if (v < 2 || v % 2 != 0) bad_range("must be even and >= 2");
            else cfg.poles = static_cast<int>(v);
        } else if (key == "speed_tau_s") {
            set_double(cfg.speed_tau_s, positive, "must be > 0");
        } else if (key == "emf_gain_VperV") {
            set_double(cfg.emf_gain_VperV, positive, "must be > 0");
        } else if (key == "exc_ramp_Vps") {
            set_double(cfg.exc_ramp_Vps, positive, "must be > 0");
        } else if (key == "initial_gen_speed_rpm") {
            set_double(cfg.initial_gen_speed_rpm, non_negative, "must be >= 0");
        } else if (key == "initial_gen_setpoint_rpm") {
            set_double(cfg.initial_gen_setpoint_rpm, non_negative, "must be >= 0");
        } else if (key == "initial_excitation_V") {
            set_double(cfg.initial_excitation_V, non_negative, "must be >= 0");
        } else if (key == "grid_freq_Hz") {
            set_double(cfg.grid_freq_Hz, positive, "must be > 0");
        } else if (key == "grid_voltage_V") {
            set_double(cfg.grid_voltage_V, positive, "must be > 0");
        } else if (key == "grid_freq_jitter_Hz") {
            set_double(cfg.grid_freq_jitter_Hz, non_negative, "must be >= 0");
        } else if (key == "grid_voltage_jitter_V") {
            set_double(cfg.grid_voltage_jitter_V, non_negative, "must be >= 0");
        } else if (key == "grid_equiv_speed_rpm") {
            double v;
            if (!detail::parse_double(value, v)) bad_number();
            else if (v <= 0.0) bad_range("must be > 0");
            else cfg.grid_equiv_speed_rpm = v;
        } else if (key == "speed_tol_rpm") {
            set_double(cfg.tolerances.speed_tol_rpm, positive, "must be > 0");
        } else if (key == "voltage_deadband_V") {
            set_double(cfg.tolerances.voltage_deadband_V, positive, "must be > 0");
        } else if (key == "phase_window_deg") {
            set_double(cfg.tolerances.phase_window_deg, positive, "must be > 0");
        } else if (key == "slip_max_Hz") {
            set_double(cfg.tolerances.slip_max_Hz, positive, "must be > 0");
        } else if (key == "speed_tiers") {
            tiers_raw = value;
            tiers_line = lineno;
        } else if (key == "grid_tariff_file") {
            cfg.grid_tariff_file = value;
        } else if (key == "gen_tariff_file") {
            cfg.gen_tariff_file = value;
        } else if (key == "load_file") {
            cfg.load_file = value;
        } else if (key == "startup_cost_rupees") {
            set_double(cfg.dispatch.startup_cost_rupees, non_negative, "must be >= 0");
        } else if (key == "hysteresis_margin") {
            set_double(cfg.dispatch.hysteresis_margin, non_negative, "must be >= 0");
        } else if (key == "power_saver") {
            if (value == "true" || value == "1") cfg.dispatch.power_saver = true;
            else if (value == "false" || value == "0") cfg.dispatch.power_saver = false;
            else bad_range("must be true or false");
        } else if (key == "breaker_grid_initial") {
            if (value == "closed") cfg.breaker_grid_closed_initially = true;
            else if (value == "open") cfg.breaker_grid_closed_initially = false;
            else bad_range("must be open or closed");
        } else if (key == "breaker_dg_initial") {
            if (value == "closed") cfg.breaker_dg_closed_initially = true;
            else if (value == "open") cfg.breaker_dg_closed_initially = false;
            else bad_range("must be open or closed");
        } else {
            errors.push_back({lineno, "unknown key `" + key + "`"});
        }
    }

    if (tiers_raw) {
        std::string err;
        if (!detail::parse_tiers(*tiers_raw, cfg.tolerances.speed_tol_rpm, cfg.tiers, err)) {
            errors.push_back({tiers_line, "`speed_tiers` " + err});
        }
    } else {
        cfg.tiers.tolerance_rpm = cfg.tolerances.speed_tol_rpm;
    }

    if (cfg.duration_s * 1000.0 < static_cast<double>(cfg.dt_ms)) {
        errors.push_back({0, "duration_s must cover at least one dt_ms step"});
    }

    auto load_aux = [&](const std::string& rel, auto parse_fn, auto& slot, const char* what) {
        if (rel.empty()) return;
        std::filesystem::path p = rel;
        if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
        auto text_or = detail::read_file(p.string());
        if (!text_or) {
            errors.push_back({0, std::string(what) + " file not found: " + p.string()});
            return;
        }
        try {
            slot = parse_fn(*text_or);
        } catch (const std::exception& e) {
            errors.push_back({0, std::string(what) + " (" + p.string() + "): " + e.what()});
        }
    };
    load_aux(cfg.grid_tariff_file,
             [](const std::string& t) { return parse_tariff(t, Source::Grid); },
             cfg.grid_tariff, "grid tariff");
    load_aux(cfg.gen_tariff_file,
             [](const std::string& t) { return parse_tariff(t, Source::Generator); },
             cfg.gen_tariff, "generator tariff");
    load_aux(cfg.load_file, [](const std::string& t) { return parse_load(t); }, cfg.load,
             "load profile");

    if (errors.empty()) result.config = cfg;
    return result;
}

struct RunResult {
    std::vector<TraceRecord> records;
    std::vector<SafetyEvent> safety_events;
    SyncPhase final_phase = SyncPhase::Idle;
};

/// Run a full scenario: per tick, sense -> control -> actuate -> plant ->
/// record. This ordering is part of the contract; golden traces pin it.
inline RunResult run_scenario(const ScenarioConfig& cfg) {
    RunResult result;

    SimClock clock{0, cfg.dt_ms};
    Rng rng(cfg.seed);
    double dt_s = clock.dt_s();

    GeneratorState gen;
    gen.poles = cfg.poles;
    gen.speed_tau_s = cfg.speed_tau_s;
    gen.emf_gain_VperV = cfg.emf_gain_VperV;
    gen.speed_rpm = cfg.initial_gen_speed_rpm;
    gen.setpoint_rpm = cfg.initial_gen_setpoint_rpm;
    gen.excitation_V = cfg.initial_excitation_V;
    gen.terminal_V = gen.emf_gain_VperV * gen.excitation_V;

    GridState grid;
    grid.nominal_freq_Hz = cfg.grid_equiv_speed_rpm
                               ? *cfg.grid_equiv_speed_rpm * cfg.poles / 120.0
                               : cfg.grid_freq_Hz;
    grid.voltage_V = cfg.grid_voltage_V;
    grid.freq_jitter_Hz = cfg.grid_freq_jitter_Hz;
    grid.voltage_jitter_V = cfg.grid_voltage_jitter_V;
    grid.measured_freq_Hz = grid.nominal_freq_Hz;
    grid.measured_voltage_V = grid.voltage_V;

    ExcitationModule exc;
    exc.ramp_Vps = cfg.exc_ramp_Vps;
    exc.output_V = cfg.initial_excitation_V;
    exc.enabled = false;

    SwitchgearBank bank;
    Breaker breaker_dg{BreakerId::DG,
                       cfg.breaker_dg_closed_initially ? BreakerState::Closed : BreakerState::Open};
    Breaker breaker_grid{BreakerId::Grid, cfg.breaker_grid_closed_initially
                                              ? BreakerState::Closed
                                              : BreakerState::Open};

    FilterWindow freq_filter;
    SyncSupervisorState supervisor;

    std::int64_t total_ticks =
        static_cast<std::int64_t>(cfg.duration_s * 1000.0 / static_cast<double>(cfg.dt_ms));
    double cumulative_cost = 0.0;

    for (std::int64_t t = 0; t < total_ticks; ++t) {
        // sense
        MeterReading reading = meter_read(grid);
        std::optional<double> filtered_freq = freq_filter.push(reading.frequency_Hz);

        // control: permissives use the filtered grid frequency once available.
        GridState control_view = grid;
        if (filtered_freq) control_view.measured_freq_Hz = *filtered_freq;
        SyncPermissive permissive = evaluate_permissives(gen, control_view, cfg.tolerances);
        SupervisorActions actions = supervisor_step(supervisor, permissive, true, clock.tick);

        if (actions.run_speed_loop && filtered_freq) {
            double grid_speed = speed_from_frequency(*filtered_freq, gen.poles);
            gen.setpoint_rpm = speed_sync_step(gen.setpoint_rpm, grid_speed, cfg.tiers);
        }
        VoltageCommand vcmd = VoltageCommand::Hold;
        if (actions.run_voltage_loop) {
            vcmd = voltage_sync_step(gen.terminal_V, grid.measured_voltage_V,
                                     cfg.tolerances.voltage_deadband_V, exc.enabled);
        }

        // actuate: commands travel through the relay bank, nothing bypasses it.
        bank.drive(relay_channel::kExcitationOn, vcmd == VoltageCommand::SwitchOn);
        bank.drive(relay_channel::kExcitationOff, vcmd == VoltageCommand::SwitchOff);
        bank.drive(relay_channel::kExcitationUp, vcmd == VoltageCommand::Up);
        bank.drive(relay_channel::kExcitationDown, vcmd == VoltageCommand::Down);
        bank.drive(relay_channel::kPowerSwitchOn, actions.request_close);

        exc.pin_on = bank.energized(relay_channel::kExcitationOn) ? LogicLevel::Low : LogicLevel::High;
        exc.pin_off = bank.energized(relay_channel::kExcitationOff) ? LogicLevel::Low : LogicLevel::High;
        exc.pin_up = bank.energized(relay_channel::kExcitationUp) ? LogicLevel::Low : LogicLevel::High;
        exc.pin_down = bank.energized(relay_channel::kExcitationDown) ? LogicLevel::Low : LogicLevel::High;

        bool transfer_window = supervisor.phase == SyncPhase::Closing ||
                               supervisor.phase == SyncPhase::Synced;
        BreakerStepResult br = breaker_step(breaker_dg, bank.energized(relay_channel::kPowerSwitchOn),
                                            permissive.overall, breaker_grid.closed(),
                                            transfer_window);
        breaker_dg = br.breaker;
        if (br.refused) result.safety_events.push_back({br.refusal_kind, BreakerId::DG});

        // Transfer completes once the DG carries the bus: drop the grid side.
        if (supervisor.phase == SyncPhase::Synced && breaker_dg.closed() && breaker_grid.closed()) {
            bank.drive(relay_channel::kPowerSwitchOff, true);
            breaker_grid = breaker_step(breaker_grid, false, true, breaker_dg.closed(), false, true)
                               .breaker;
        } else {
            bank.drive(relay_channel::kPowerSwitchOff, false);
        }

        // plant
        exc = excitation_step(exc, dt_s);
        gen.excitation_V = exc.output_V;
        gen = generator_step(gen, dt_s);
        grid = grid_step(grid, rng, dt_s);

        clock = advance(clock);

        // record
        Source active = breaker_dg.closed()
                            ? Source::Generator
                            : (breaker_grid.closed() ? Source::Grid : Source::None);
        if (cfg.load && cfg.grid_tariff && cfg.gen_tariff && active != Source::None) {
            int hour = static_cast<int>((clock.elapsed_ms() / 3600000) % 24);
            const TariffCurve& curve =
                active == Source::Generator ? *cfg.gen_tariff : *cfg.grid_tariff;
            cumulative_cost += cfg.load->demand_kW[static_cast<std::size_t>(hour)] *
                               tariff_at(curve, hour) *
                               (static_cast<double>(cfg.dt_ms) / 3600000.0);
        }

        TraceRecord rec;
        rec.time_ms = clock.elapsed_ms();
        rec.gen_speed_rpm = gen.speed_rpm;
        rec.gen_setpoint_rpm = gen.setpoint_rpm;
        rec.grid_speed_rpm = speed_from_frequency(grid.measured_freq_Hz, gen.poles);
        rec.gen_voltage_V = gen.terminal_V;
        rec.grid_voltage_V = grid.measured_voltage_V;
        rec.phase_diff_deg = phase_diff_deg(gen.phase_deg, grid.phase_deg);
        rec.speed_ok = permissive.speed_ok;
        rec.voltage_ok = permissive.voltage_ok;
        rec.phase_ok = permissive.phase_ok;
        rec.overall = permissive.overall;
        rec.breaker_dg = breaker_dg.state;
        rec.breaker_grid = breaker_grid.state;
        rec.active_source = active;
        rec.cumulative_cost_rupees = cumulative_cost;
        result.records.push_back(rec);
    }

    result.final_phase = supervisor.phase;
    return result;
}

}  // namespace gridsync
