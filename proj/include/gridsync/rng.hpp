#pragma once

#include <cstdint>
#include <stdexcept>

namespace gridsync {

/// xorshift64* generator (Vigna 2016). Chosen for bit-exact portability:
/// the recurrence is
///   x ^= x >> 12;  x ^= x << 25;  x ^= x >> 27;  return x * 2685821657736338717
/// with all arithmetic in unsigned 64-bit. A zero seed is remapped to the
/// golden-ratio constant because the all-zero state is a fixed point.
class Rng {
public:
    explicit Rng(std::uint64_t seed)
        : state_(seed != 0 ? seed : 0x9E3779B97F4A7C15ull) {}

    std::uint64_t next_u64() {
        std::uint64_t x = state_;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        state_ = x;
        return x * 2685821657736338717ull;
    }

    /// Uniform in [0, 1), 53-bit mantissa.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * (1.0 / 9007199254740992.0);
    }

    std::uint64_t state() const { return state_; }

private:
    std::uint64_t state_;
};

/// Symmetric noise sample in [-amplitude, +amplitude].
inline double noise_sample(Rng& rng, double amplitude) {
    if (amplitude < 0.0) {
        throw std::invalid_argument("noise_sample: amplitude must be >= 0");
    }
    if (amplitude == 0.0) {
        return 0.0;
    }
    return amplitude * (2.0 * rng.next_unit() - 1.0);
}

}  // namespace gridsync
