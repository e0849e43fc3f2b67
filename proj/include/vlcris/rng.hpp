#pragma once

#include <cstdint>
#include <cmath>

namespace vlcris::rng {

/// Counter-free splitmix64 step. Used everywhere randomness is needed so
/// that results are reproducible bit-for-bit across platforms; the standard
/// library distributions are implementation-defined and are avoided.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Derives an independent stream seed from (seed, stream index). Trial and
/// subsystem streams are decorrelated by one extra mixing round.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed ^ (0xD1B54A32D192ED03ULL * (stream + 1));
    std::uint64_t a = splitmix64(s);
    std::uint64_t b = splitmix64(s);
    return a ^ (b << 1);
}

/// Small deterministic generator over a splitmix64 stream.
class Stream {
  public:
    explicit Stream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() { return splitmix64(state_); }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

    /// Derives a child stream; child order is part of the documented layout.
    Stream child(std::uint64_t stream) { return Stream(derive_stream(state_, stream)); }

  private:
    std::uint64_t state_;
};

/// Per-trial root seed. Documented derivation: trial streams depend only on
/// (master seed, trial index), never on scenario toggles, so paired runs that
/// differ only in a switch share trajectories exactly.
inline std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial_index) {
    return derive_stream(master_seed, 0x7472ULL + trial_index);
}

}  // namespace vlcris::rng
