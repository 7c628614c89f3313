#pragma once

// Deterministic, splittable random streams.
//
// Streams are derived from a master seed by index (counter-based splitting),
// so samples drawn concurrently with independent streams replay bit-identically
// regardless of thread schedule. The generator is xoshiro256** seeded through
// splitmix64; uniform doubles use the top 53 bits. No std::*_distribution is
// used anywhere, so replay is compiler-independent.

#include <array>
#include <cstdint>

namespace qlsync {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace detail

class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : key_(seed) {
        std::uint64_t s = seed;
        for (auto& w : state_) w = detail::splitmix64(s);
    }

    // Child stream for a sample/component index; derivation is a keyed
    // splitmix64 chain, independent of how much the parent has been used.
    RngStream child(std::uint64_t index) const {
        std::uint64_t s = key_ ^ (0x8e9d5aab8a2ec4e1ULL + index * 0xd1342543de82ef95ULL);
        return RngStream(detail::splitmix64(s));
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = detail::rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = detail::rotl(state_[3], 45);
        return result;
    }

    // Uniform integer in [0, bound), bound >= 1; unbiased via rejection.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t threshold = (0ULL - bound) % bound;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    // Uniform double in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform double in [0, 2*pi).
    double next_angle() {
        return next_double() * 6.283185307179586476925286766559;
    }

    std::uint64_t key() const { return key_; }

private:
    std::uint64_t key_;
    std::array<std::uint64_t, 4> state_{};
};

}  // namespace qlsync
