#pragma once

#include <array>
#include <cstdint>

namespace admit {

// Philox4x32-10 block function (Salmon et al., "Parallel random numbers: as
// easy as 1, 2, 3"). Stateless: the output depends only on (counter, key).
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key) noexcept;

// SplitMix64 finalizer; used to fold tags and indices into stream ids.
std::uint64_t mix64(std::uint64_t x) noexcept;

// Derive a child stream id from a parent id and a tag. Not commutative.
std::uint64_t derive_stream(std::uint64_t parent, std::uint64_t tag) noexcept;

/// Counter-based generator addressed by (seed, stream). Draw k of stream s is a
/// pure function of (seed, s, k), so work split across threads by stream
/// reproduces a serial run bit for bit.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept;

    std::uint64_t next_u64() noexcept;
    std::uint32_t next_u32() noexcept;

    // Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept;
    // Uniform on (0, 1].
    double uniform_pos() noexcept { return 1.0 - uniform(); }
    // Standard normal (Box-Muller, so results are identical across standard libraries).
    double normal() noexcept;
    // Exponential(1).
    double exponential() noexcept;
    // Uniform integer in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n) noexcept;

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream() const noexcept { return stream_; }

private:
    void refill() noexcept;

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    PhiloxCounter buffer_{};
    int used_ = 4;
    bool has_spare_normal_ = false;
    double spare_normal_ = 0.0;
};

}  // namespace admit
