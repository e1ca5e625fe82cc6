#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "gridsync/dispatch.hpp"
#include "gridsync/switchgear.hpp"

namespace gridsync {

/// One row per tick. Field order here is the CSV column order.
struct TraceRecord {
    std::int64_t time_ms = 0;
    double gen_speed_rpm = 0.0;
    double gen_setpoint_rpm = 0.0;
    double grid_speed_rpm = 0.0;
    double gen_voltage_V = 0.0;
    double grid_voltage_V = 0.0;
    double phase_diff_deg = 0.0;
    bool speed_ok = false;
    bool voltage_ok = false;
    bool phase_ok = false;
    bool overall = false;
    BreakerState breaker_dg = BreakerState::Open;
    BreakerState breaker_grid = BreakerState::Open;
    Source active_source = Source::None;
    double cumulative_cost_rupees = 0.0;
};

namespace detail {
// Fixed 6-significant-digit rendering so golden traces are byte-stable.
inline std::string fmt6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}
}  // namespace detail

inline std::string trace_csv_header() {
    return "time_ms,gen_speed_rpm,gen_setpoint_rpm,grid_speed_rpm,gen_voltage_V,"
           "grid_voltage_V,phase_diff_deg,speed_ok,voltage_ok,phase_ok,overall,"
           "breaker_dg,breaker_grid,active_source,cumulative_cost_rupees";
}

inline std::string export_trace(const std::vector<TraceRecord>& records) {
    std::string out = trace_csv_header() + "\n";
    for (const auto& r : records) {
        out += std::to_string(r.time_ms);
        out += ',';
        out += detail::fmt6(r.gen_speed_rpm);
        out += ',';
        out += detail::fmt6(r.gen_setpoint_rpm);
        out += ',';
        out += detail::fmt6(r.grid_speed_rpm);
        out += ',';
        out += detail::fmt6(r.gen_voltage_V);
        out += ',';
        out += detail::fmt6(r.grid_voltage_V);
        out += ',';
        out += detail::fmt6(r.phase_diff_deg);
        out += ',';
        out += r.speed_ok ? '1' : '0';
        out += ',';
        out += r.voltage_ok ? '1' : '0';
        out += ',';
        out += r.phase_ok ? '1' : '0';
        out += ',';
        out += r.overall ? '1' : '0';
        out += ',';
        out += r.breaker_dg == BreakerState::Closed ? "closed" : "open";
        out += ',';
        out += r.breaker_grid == BreakerState::Closed ? "closed" : "open";
        out += ',';
        out += source_name(r.active_source);
        out += ',';
        out += detail::fmt6(r.cumulative_cost_rupees);
        out += '\n';
    }
    return out;
}

}  // namespace gridsync
