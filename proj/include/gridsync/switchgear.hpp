#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>

#include "gridsync/plant.hpp"

namespace gridsync {

/// 14 digital pins, all floating at power-up.
struct PinBank {
    static constexpr std::size_t kPinCount = 14;
    std::array<LogicLevel, kPinCount> pins{};

    PinBank() { pins.fill(LogicLevel::Floating); }
};

inline PinBank set_pin(PinBank bank, std::size_t index, LogicLevel level) {
    if (index >= PinBank::kPinCount) {
        throw std::out_of_range("set_pin: pin index out of range");
    }
    bank.pins[index] = level;
    return bank;
}

enum class RelayContact { NO_closed, NC_closed };

/// Active-low channel: driving IN low energizes the coil and closes NO-COM.
/// High or floating leaves the contact at rest on NC-COM.
struct RelayChannel {
    int index = 1;  // 1..8
    LogicLevel in_level = LogicLevel::Floating;
};

inline RelayContact relay_eval(const RelayChannel& ch) {
    return ch.in_level == LogicLevel::Low ? RelayContact::NO_closed : RelayContact::NC_closed;
}

enum class BreakerId { DG, Grid };
enum class BreakerState { Open, Closed };

struct Breaker {
    BreakerId id = BreakerId::DG;
    BreakerState state = BreakerState::Open;

    bool closed() const { return state == BreakerState::Closed; }
};

enum class SafetyEventKind { CloseWithoutPermissive, InterlockViolation };

struct SafetyEvent {
    SafetyEventKind kind;
    BreakerId breaker;
};

struct BreakerStepResult {
    Breaker breaker;
    bool refused = false;
    SafetyEventKind refusal_kind = SafetyEventKind::CloseWithoutPermissive;
};

/// Close requires the permissive; a close against a closed peer is an
/// interlock violation unless a supervised transfer window is open.
/// Open requests always win.
inline BreakerStepResult breaker_step(Breaker b, bool close_request, bool permissive,
                                      bool peer_closed, bool transfer_window = false,
                                      bool open_request = false) {
    BreakerStepResult r{b};
    if (open_request) {
        r.breaker.state = BreakerState::Open;
        return r;
    }
    if (!close_request || b.closed()) return r;
    if (!permissive) {
        r.refused = true;
        r.refusal_kind = SafetyEventKind::CloseWithoutPermissive;
        return r;
    }
    if (peer_closed && !transfer_window) {
        r.refused = true;
        r.refusal_kind = SafetyEventKind::InterlockViolation;
        return r;
    }
    r.breaker.state = BreakerState::Closed;
    return r;
}

/// Channel assignment for the 8-way bank. Only the power-switch ON channel
/// is fixed by the hardware wiring; the rest is declared convention.
namespace relay_channel {
constexpr int kExcitationOn = 1;
constexpr int kExcitationOff = 2;
constexpr int kExcitationUp = 3;
constexpr int kExcitationDown = 4;
constexpr int kPowerSwitchOn = 5;
constexpr int kPowerSwitchOff = 6;
}  // namespace relay_channel

/// Pin bank + relay bank wired together: channel n is driven by digital
/// pin n+1 (pins 2..9), leaving 0/1 for the serial pins as on the board.
struct SwitchgearBank {
    PinBank pins;
    std::array<RelayChannel, 8> relays;

    SwitchgearBank() {
        for (int i = 0; i < 8; ++i) relays[i] = RelayChannel{i + 1, LogicLevel::Floating};
    }

    static std::size_t pin_for_channel(int channel) {
        if (channel < 1 || channel > 8) {
            throw std::out_of_range("pin_for_channel: channel must be 1..8");
        }
        return static_cast<std::size_t>(channel + 1);
    }

    /// Drive a channel: asserted pulls the IN pin low (energized).
    void drive(int channel, bool asserted) {
        auto pin = pin_for_channel(channel);
        pins = set_pin(pins, pin, asserted ? LogicLevel::Low : LogicLevel::High);
        relays[channel - 1].in_level = pins.pins[pin];
    }

    bool energized(int channel) const {
        return relay_eval(relays[static_cast<std::size_t>(channel - 1)]) == RelayContact::NO_closed;
    }
};

}  // namespace gridsync
