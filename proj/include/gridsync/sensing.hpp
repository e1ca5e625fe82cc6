#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>

#include "gridsync/plant.hpp"

namespace gridsync {

/// 8-sample averaging filter. Emits nothing until 8 samples have been seen,
/// then a sliding mean of the most recent 8 on every push.
class FilterWindow {
public:
    static constexpr std::size_t kCapacity = 8;

    std::optional<double> push(double sample) {
        if (!std::isfinite(sample)) {
            throw std::invalid_argument("FilterWindow::push: sample must be finite");
        }
        samples_[head_] = sample;
        head_ = (head_ + 1) % kCapacity;
        if (count_ < kCapacity) ++count_;
        if (count_ < kCapacity) return std::nullopt;
        // Pairwise sum: exact for constant input (every add is a doubling),
        // so the DC gain is exactly 1.
        double sum = ((samples_[0] + samples_[1]) + (samples_[2] + samples_[3])) +
                     ((samples_[4] + samples_[5]) + (samples_[6] + samples_[7]));
        return sum / static_cast<double>(kCapacity);
    }

    std::size_t count() const { return count_; }
    bool warmed_up() const { return count_ == kCapacity; }

private:
    std::array<double, kCapacity> samples_{};
    std::size_t head_ = 0;
    std::size_t count_ = 0;
};

/// N = 120 f / P.
inline double speed_from_frequency(double f_Hz, int poles) {
    if (f_Hz <= 0.0) throw std::invalid_argument("speed_from_frequency: f_Hz must be > 0");
    if (poles < 2 || poles % 2 != 0) {
        throw std::invalid_argument("speed_from_frequency: poles must be even and >= 2");
    }
    return 120.0 * f_Hz / poles;
}

struct MeterReading {
    double frequency_Hz;
    double voltage_V;
};

inline MeterReading meter_read(const GridState& grid) {
    return {grid.measured_freq_Hz, grid.measured_voltage_V};
}

}  // namespace gridsync
