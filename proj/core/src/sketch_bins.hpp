#pragma once

#include "admit/random.hpp"

#include <cstdint>
#include <limits>
#include <vector>

namespace admit::detail {

inline std::uint64_t element_hash(std::uint64_t id, std::uint64_t seed) noexcept {
    return mix64(id ^ mix64(seed ^ 0x6a09e667f3bcc909ull));
}

inline std::size_t bin_of(std::uint64_t h, std::size_t m) noexcept {
    __extension__ using u128 = unsigned __int128;
    return static_cast<std::size_t>((static_cast<u128>(h) * m) >> 64);
}

// Packs one bit per bin from precomputed element hashes. `mins` is scratch.
inline void sketch_bits(const std::uint64_t* hashes, std::size_t count, std::size_t m, std::uint64_t seed,
                        std::vector<std::uint64_t>& mins, std::vector<std::uint64_t>& words) {
    constexpr std::uint64_t kEmpty = std::numeric_limits<std::uint64_t>::max();
    mins.assign(m, kEmpty);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t b = bin_of(hashes[i], m);
        if (hashes[i] < mins[b]) mins[b] = hashes[i];
    }
    words.assign((m + 63) / 64, 0);
    std::size_t anchor = m;  // nearest occupied bin to the right, searched circularly
    for (std::size_t k = 0; k < m; ++k)
        if (mins[k] != kEmpty) {
            anchor = k;
            break;
        }
    if (anchor == m) return;

    const std::uint64_t salt = mix64(seed ^ 0xbb67ae8584caa73bull);
    // Walk right to left so each empty bin sees the next occupied one.
    std::size_t next = anchor;
    for (std::size_t step = 0; step < m; ++step) {
        const std::size_t b = (anchor + m - step) % m;
        std::uint64_t value;
        if (mins[b] != kEmpty) {
            next = b;
            value = mins[b];
        } else {
            const std::size_t distance = (next + m - b) % m;
            value = mix64(mins[next] + 0x9e3779b97f4a7c15ull * distance);
        }
        if (mix64(value ^ salt) & 1u) words[b / 64] |= std::uint64_t{1} << (b % 64);
    }
}

}  // namespace admit::detail
