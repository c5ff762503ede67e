#pragma once

#include <cstdint>

namespace latlab {

/// Counter-based generator: draw k is a pure function of (seed, k), so any
/// consumer can be replayed from the seed recorded in a run manifest.
/// The mixer is the splitmix64 finalizer.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = seed_ + (++counter_) * 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t counter() const { return counter_; }

    /// Independent substream (e.g. one per sweep cell).
    CounterRng substream(std::uint64_t stream) const {
        CounterRng r(seed_ ^ (0x9E3779B97F4A7C15ull + stream * 0xD1B54A32D192ED03ull));
        return r;
    }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

} // namespace latlab
