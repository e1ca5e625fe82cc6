#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "gridsync/plant.hpp"
#include "gridsync/sensing.hpp"

namespace gridsync {

/// Tiered speed-correction table. Intervals are half-open (lower, upper]
/// on |diff|; anything at or below tolerance_rpm gets no correction.
struct SpeedTier {
    double lower_rpm;
    double upper_rpm;
    double increment_rpm;
};

struct SpeedTierTable {
    std::vector<SpeedTier> tiers;
    double tolerance_rpm = 2.0;

    static SpeedTierTable standard() {
        SpeedTierTable t;
        t.tiers = {
            {500.0, std::numeric_limits<double>::infinity(), 50.0},
            {100.0, 500.0, 10.0},
            {2.0, 100.0, 2.0},
        };
        t.tolerance_rpm = 2.0;
        return t;
    }
};

/// Signed correction for a signed speed difference (grid minus setpoint).
inline double speed_increment(double diff_rpm, const SpeedTierTable& table) {
    double mag = std::abs(diff_rpm);
    if (mag <= table.tolerance_rpm) return 0.0;
    for (const auto& tier : table.tiers) {
        if (mag > tier.lower_rpm && mag <= tier.upper_rpm) {
            return std::copysign(tier.increment_rpm, diff_rpm);
        }
    }
    return 0.0;
}

/// One pass of the speed loop: move the setpoint toward the grid speed by
/// the tier increment. The step that would land inside the tolerance band
/// clamps to the target instead, so the loop terminates on the exact speed
/// rather than parking at the edge of the band, where the permissive
/// (same tolerance, but applied to the lagging measured speed) cannot clear.
inline double speed_sync_step(double setpoint_rpm, double grid_speed_rpm,
                              const SpeedTierTable& table) {
    double diff = grid_speed_rpm - setpoint_rpm;
    double step = speed_increment(diff, table);
    if (step == 0.0) return setpoint_rpm;
    if (std::abs(diff) - std::abs(step) <= table.tolerance_rpm) return grid_speed_rpm;
    return setpoint_rpm + step;
}

enum class VoltageCommand { SwitchOn, Up, Down, Hold, SwitchOff };

/// Excitation command from the voltage comparison. The module is switched on
/// only when there is an error to correct, ramped toward the grid voltage,
/// and switched off once inside the deadband.
inline VoltageCommand voltage_sync_step(double gen_V, double grid_V, double deadband_V,
                                        bool excitation_enabled) {
    double diff = gen_V - grid_V;
    if (!excitation_enabled) {
        return std::abs(diff) > deadband_V ? VoltageCommand::SwitchOn : VoltageCommand::Hold;
    }
    if (std::abs(diff) <= deadband_V) return VoltageCommand::SwitchOff;
    return diff < 0.0 ? VoltageCommand::Up : VoltageCommand::Down;
}

struct SyncTolerances {
    double speed_tol_rpm = 2.0;
    double voltage_deadband_V = 2.0;
    double phase_window_deg = 10.0;
    double slip_max_Hz = 0.2;
};

struct SyncPermissive {
    bool speed_ok = false;
    bool voltage_ok = false;
    bool phase_ok = false;
    bool overall = false;
};

inline bool phase_permissive(double phase_diff_deg, double slip_Hz, const SyncTolerances& tol) {
    return std::abs(phase_diff_deg) <= tol.phase_window_deg && std::abs(slip_Hz) <= tol.slip_max_Hz;
}

/// Evaluate all three synchronization conditions against the grid's measured
/// (jittered) quantities. grid_equiv_speed_rpm is 120 f / P of the grid.
inline SyncPermissive evaluate_permissives(const GeneratorState& gen, const GridState& grid,
                                           const SyncTolerances& tol) {
    SyncPermissive p;
    double grid_speed = speed_from_frequency(grid.measured_freq_Hz, gen.poles);
    p.speed_ok = std::abs(gen.speed_rpm - grid_speed) <= tol.speed_tol_rpm;
    p.voltage_ok = std::abs(gen.terminal_V - grid.measured_voltage_V) <= tol.voltage_deadband_V;
    double slip = gen.electrical_freq_Hz() - grid.measured_freq_Hz;
    p.phase_ok = phase_permissive(phase_diff_deg(gen.phase_deg, grid.phase_deg), slip, tol);
    p.overall = p.speed_ok && p.voltage_ok && p.phase_ok;
    return p;
}

enum class SyncPhase { Idle, SpeedSync, VoltageSync, PhaseWait, Closing, Synced, Aborted };

struct SyncSupervisorState {
    SyncPhase phase = SyncPhase::Idle;
    std::int64_t entered_tick = 0;
};

struct SupervisorActions {
    bool run_speed_loop = false;
    bool run_voltage_loop = false;
    bool request_close = false;
};

/// Sequencer for the synchronization: speed first, then voltage, then wait
/// for the phase window. A breaker-close request is emitted only while the
/// overall permissive holds; any condition regressing before closure drops
/// the state machine back to the matching earlier phase.
inline SupervisorActions supervisor_step(SyncSupervisorState& st, const SyncPermissive& p,
                                         bool start_requested, std::int64_t tick) {
    auto move_to = [&](SyncPhase next) {
        st.phase = next;
        st.entered_tick = tick;
    };
    switch (st.phase) {
        case SyncPhase::Idle:
            if (start_requested) move_to(SyncPhase::SpeedSync);
            break;
        case SyncPhase::SpeedSync:
            if (p.speed_ok) move_to(SyncPhase::VoltageSync);
            break;
        case SyncPhase::VoltageSync:
            if (!p.speed_ok) move_to(SyncPhase::SpeedSync);
            else if (p.voltage_ok) move_to(SyncPhase::PhaseWait);
            break;
        case SyncPhase::PhaseWait:
            if (!p.speed_ok) move_to(SyncPhase::SpeedSync);
            else if (!p.voltage_ok) move_to(SyncPhase::VoltageSync);
            else if (p.overall) move_to(SyncPhase::Closing);
            break;
        case SyncPhase::Closing:
            if (p.overall) move_to(SyncPhase::Synced);
            else move_to(SyncPhase::PhaseWait);
            break;
        case SyncPhase::Synced:
        case SyncPhase::Aborted:
            break;
    }
    SupervisorActions a;
    switch (st.phase) {
        case SyncPhase::SpeedSync:
            a.run_speed_loop = true;
            break;
        case SyncPhase::VoltageSync:
        case SyncPhase::PhaseWait:
            a.run_speed_loop = true;
            a.run_voltage_loop = true;
            break;
        case SyncPhase::Closing:
            a.run_speed_loop = true;
            a.run_voltage_loop = true;
            a.request_close = p.overall;
            break;
        case SyncPhase::Synced:
            a.run_speed_loop = true;
            a.run_voltage_loop = true;
            break;
        default:
            break;
    }
    return a;
}

}  // namespace gridsync
