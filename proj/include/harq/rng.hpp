#pragma once

#include <cmath>
#include <cstdint>

namespace harq {

/// SplitMix64 counter-style generator. Cheap to seed, so every Monte
/// Carlo trial derives an independent substream from (seed, trial index)
/// and results do not depend on how trials are partitioned across workers.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    static SplitMix64 for_trial(std::uint64_t seed, std::uint64_t trial) {
        SplitMix64 mixer(seed);
        const std::uint64_t a = mixer.next();
        SplitMix64 trial_mixer(trial + 0x9E3779B97F4A7C15ULL);
        return SplitMix64(a ^ trial_mixer.next());
    }

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in (0, 1]; the half-open interval keeps -log(u) finite.
    double uniform_pos() { return (static_cast<double>(next() >> 11) + 1.0) * 0x1p-53; }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1p-53; }

    /// Exponential(1) via inverse CDF.
    double exponential() { return -std::log(uniform_pos()); }

private:
    std::uint64_t state_;
};

}  // namespace harq
