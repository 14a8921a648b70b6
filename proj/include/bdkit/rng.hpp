#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace bdkit {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl64(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace detail

// Deterministic per-replicate random stream: a (master seed, stream index)
// pair fully determines the sequence, so replicate i is bit-identical no
// matter which worker runs it. xoshiro256++ state, seeded through
// splitmix64 so nearby (seed, index) pairs give decorrelated streams.
class RandomStream {
public:
    RandomStream(std::uint64_t master_seed, std::uint64_t stream_index) {
        std::uint64_t a = master_seed;
        std::uint64_t b = stream_index ^ 0x5851F42D4C957F2Dull;
        std::uint64_t key = detail::splitmix64(a) ^ detail::rotl64(detail::splitmix64(b), 17);
        for (auto& w : state_) w = detail::splitmix64(key);
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = detail::rotl64(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = detail::rotl64(state_[3], 45);
        return result;
    }

    // Uniform on (0, 1]; never returns 0, so log(u) is always finite.
    double uniform01() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    // Exponential with the given rate (rate > 0).
    double exponential(double rate) { return -std::log(uniform01()) / rate; }

    // Standard normal via Box-Muller (cosine branch).
    double normal01() {
        const double r = std::sqrt(-2.0 * std::log(uniform01()));
        const double theta = 6.283185307179586476925286766559 * uniform01();
        return r * std::cos(theta);
    }

private:
    std::array<std::uint64_t, 4> state_;
};

}  // namespace bdkit
