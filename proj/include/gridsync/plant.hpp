#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gridsync/rng.hpp"

namespace gridsync {

enum class LogicLevel { High, Low, Floating };

inline double wrap_phase_deg(double deg) {
    deg = std::fmod(deg, 360.0);
    if (deg < 0.0) deg += 360.0;
    return deg;
}

/// Difference a - b normalized to [-180, 180].
inline double phase_diff_deg(double a_deg, double b_deg) {
    double d = std::fmod(a_deg - b_deg, 360.0);
    if (d > 180.0) d -= 360.0;
    if (d < -180.0) d += 360.0;
    return d;
}

/// Synchronous machine, reduced to what the control loops observe: a
/// first-order prime-mover lag toward the speed setpoint and a no-load
/// linear EMF model terminal_V = emf_gain * excitation_V.
struct GeneratorState {
    double speed_rpm = 0.0;
    double setpoint_rpm = 0.0;
    int poles = 4;
    double excitation_V = 0.0;
    double terminal_V = 0.0;
    double phase_deg = 0.0;
    double speed_tau_s = 0.5;
    double emf_gain_VperV = 10.0;

    double electrical_freq_Hz() const { return speed_rpm * poles / 120.0; }
};

struct GridState {
    double nominal_freq_Hz = 50.0;
    double freq_jitter_Hz = 0.0;
    double voltage_V = 230.0;
    double voltage_jitter_V = 0.0;
    double phase_deg = 0.0;
    double measured_freq_Hz = 50.0;
    double measured_voltage_V = 230.0;
};

/// The excitation unit as seen by the relay bank: ON/OFF latch plus UP/DOWN
/// ramp inputs. Output only moves while enabled. Conflicting UP+DOWN holds.
struct ExcitationModule {
    bool enabled = false;
    double output_V = 0.0;
    double ramp_Vps = 5.0;
    LogicLevel pin_on = LogicLevel::Floating;
    LogicLevel pin_off = LogicLevel::Floating;
    LogicLevel pin_up = LogicLevel::Floating;
    LogicLevel pin_down = LogicLevel::Floating;
};

struct LoadState {
    double demand_kW = 0.0;
};

inline GeneratorState generator_step(GeneratorState g, double dt_s) {
    if (dt_s <= 0.0) throw std::invalid_argument("generator_step: dt_s must be > 0");
    double alpha = std::min(1.0, dt_s / g.speed_tau_s);
    g.speed_rpm += (g.setpoint_rpm - g.speed_rpm) * alpha;
    g.phase_deg = wrap_phase_deg(g.phase_deg + 360.0 * g.electrical_freq_Hz() * dt_s);
    g.terminal_V = g.emf_gain_VperV * g.excitation_V;
    return g;
}

inline ExcitationModule excitation_step(ExcitationModule m, double dt_s) {
    if (dt_s <= 0.0) throw std::invalid_argument("excitation_step: dt_s must be > 0");
    // Asserted means the relay drove the pin low (active-low bank).
    bool on = m.pin_on == LogicLevel::Low;
    bool off = m.pin_off == LogicLevel::Low;
    bool up = m.pin_up == LogicLevel::Low;
    bool down = m.pin_down == LogicLevel::Low;
    if (off) m.enabled = false;
    else if (on) m.enabled = true;
    if (m.enabled && up != down) {
        m.output_V += (up ? 1.0 : -1.0) * m.ramp_Vps * dt_s;
        m.output_V = std::max(0.0, m.output_V);
    }
    return m;
}

inline GridState grid_step(GridState s, Rng& rng, double dt_s) {
    if (dt_s <= 0.0) throw std::invalid_argument("grid_step: dt_s must be > 0");
    s.measured_freq_Hz = s.nominal_freq_Hz + noise_sample(rng, s.freq_jitter_Hz);
    s.measured_voltage_V = s.voltage_V + noise_sample(rng, s.voltage_jitter_V);
    s.phase_deg = wrap_phase_deg(s.phase_deg + 360.0 * s.measured_freq_Hz * dt_s);
    return s;
}

}  // namespace gridsync
