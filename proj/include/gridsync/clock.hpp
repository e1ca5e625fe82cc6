#pragma once

#include <cstdint>

namespace gridsync {

/// Fixed-step simulation clock. All timing is integer milliseconds so
/// elapsed_ms == tick * dt_ms holds exactly for arbitrarily long runs.
struct SimClock {
    std::int64_t tick = 0;
    std::int64_t dt_ms = 100;

    std::int64_t elapsed_ms() const { return tick * dt_ms; }
    double dt_s() const { return static_cast<double>(dt_ms) / 1000.0; }
};

inline SimClock advance(SimClock c) {
    ++c.tick;
    return c;
}

}  // namespace gridsync
