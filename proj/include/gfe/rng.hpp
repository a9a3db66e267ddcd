#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace gfe {

/// Philox4x32-10 counter-based generator.
///
/// A stream is identified by (key, stream id); the block counter occupies the
/// low 64 bits of the 128-bit counter and the stream id the high 64 bits, so
/// every (seed, stream) pair yields an independent, reproducible sequence
/// regardless of which thread draws from it.
class Philox4x32 {
public:
    using result_type = std::uint32_t;
    using block_type = std::array<std::uint32_t, 4>;
    using key_type = std::array<std::uint32_t, 2>;

    Philox4x32(std::uint64_t seed, std::uint64_t stream) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_(stream) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        if (index_ == 4) refill();
        return buffer_[index_++];
    }

    std::uint64_t next_u64() noexcept {
        const std::uint64_t hi = (*this)();
        const std::uint64_t lo = (*this)();
        return (hi << 32) | lo;
    }

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform() noexcept {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard exponential variate.
    double exponential() noexcept { return -std::log(uniform()); }

    std::uint64_t blocks_drawn() const noexcept { return block_; }

    /// Ten-round Philox bijection; exposed for known-answer tests.
    static block_type bijection(block_type counter, key_type key) noexcept {
        constexpr std::uint32_t m0 = 0xD2511F53u;
        constexpr std::uint32_t m1 = 0xCD9E8D57u;
        constexpr std::uint32_t w0 = 0x9E3779B9u;
        constexpr std::uint32_t w1 = 0xBB67AE85u;
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(m0) * counter[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(m1) * counter[2];
            const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const auto lo0 = static_cast<std::uint32_t>(p0);
            const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const auto lo1 = static_cast<std::uint32_t>(p1);
            counter = {hi1 ^ counter[1] ^ key[0], lo1, hi0 ^ counter[3] ^ key[1], lo0};
            key[0] += w0;
            key[1] += w1;
        }
        return counter;
    }

private:
    void refill() noexcept {
        const block_type counter{static_cast<std::uint32_t>(block_),
                                 static_cast<std::uint32_t>(block_ >> 32),
                                 static_cast<std::uint32_t>(stream_),
                                 static_cast<std::uint32_t>(stream_ >> 32)};
        buffer_ = bijection(counter, key_);
        ++block_;
        index_ = 0;
    }

    key_type key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    block_type buffer_{};
    int index_ = 4;
};

using Rng = Philox4x32;

/// SplitMix64 finalizer, used to derive child seeds from (seed, tag).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) noexcept {
    return mix64(mix64(seed) ^ mix64(tag + 0x632BE59BD9B4E019ull));
}

/// Stream for path `index` of an experiment keyed by `seed`.
inline Rng path_stream(std::uint64_t seed, std::uint64_t index) noexcept {
    return Rng(seed, index);
}

}  // namespace gfe
