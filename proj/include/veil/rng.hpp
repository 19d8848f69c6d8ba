#pragma once

#include <cstdint>
#include <random>

namespace veil {

// One SplitMix64 step. Fully specified so derived seeds are stable across
// platforms and library versions; do not change the constants.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Deterministic sub-seed for stream (a, b) of a master seed. Used to give
// every (eta, trial) pair its own generator so results do not depend on
// execution order or thread count.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = master;
    std::uint64_t z = splitmix64(s);
    s = z ^ (a + 0xD1B54A32D192ED03ull);
    z = splitmix64(s);
    s = z ^ (b + 0x8CB92BA72F3D8DD7ull);
    return splitmix64(s);
}

// Seeded generator handed to every sampling routine. Owned by exactly one
// logical task at a time; spawn one per thread via derive_seed.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform draw on the open interval (0, 1). Endpoints are excluded so
    // inverse-CDF sampling never produces an infinite quantile.
    double uniform01() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace veil
