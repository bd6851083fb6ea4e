// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace kanlab {

/// Splittable 64-bit generator (splitmix64). Chosen over <random> engines so
/// that streams are bit-identical across platforms and substreams can be
/// derived deterministically from (seed, index).
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0,1) with 53 random bits.
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Stateless finalizer, usable as a mixing hash.
    static std::uint64_t mix(std::uint64_t x) {
        x += 0x9E3779B97F4A7C15ull;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
        return x ^ (x >> 31);
    }

    /// Independent substream derived from the current state and a stream index.
    SplitMix64 fork(std::uint64_t stream) const {
        return SplitMix64(mix(state_ ^ mix(stream + 0x632BE59BD9B4E019ull)));
    }

private:
    std::uint64_t state_;
};

}  // namespace kanlab
