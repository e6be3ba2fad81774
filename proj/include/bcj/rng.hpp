#pragma once

// Counter-based random streams (Philox4x32-10).
//
// Every random quantity in the library is drawn from a Stream addressed by
// (root seed, stream id, position). Stream ids are built from structured
// tuples such as (tag, draw_id, p_index, chunk) so that serial and parallel
// executions consume identical numbers.

#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <string_view>

namespace bcj {

namespace detail {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline constexpr std::uint64_t fnv1a(std::string_view s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

inline constexpr std::uint32_t mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi) noexcept {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    return static_cast<std::uint32_t>(p);
}

}  // namespace detail

using Philox4x32Block = std::array<std::uint32_t, 4>;

/// Philox4x32 with 10 rounds (Salmon et al., "Parallel random numbers: as easy as 1, 2, 3").
inline constexpr Philox4x32Block philox4x32(Philox4x32Block ctr, std::array<std::uint32_t, 2> key) noexcept {
    constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
    constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0 = 0, hi1 = 0;
        const std::uint32_t lo0 = detail::mulhilo(M0, ctr[0], hi0);
        const std::uint32_t lo1 = detail::mulhilo(M1, ctr[2], hi1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += W0;
        key[1] += W1;
    }
    return ctr;
}

/// Folds a structured address into a 64-bit stream id.
inline constexpr std::uint64_t stream_id(std::string_view tag, std::initializer_list<std::uint64_t> path) noexcept {
    std::uint64_t id = detail::splitmix64(detail::fnv1a(tag));
    for (std::uint64_t p : path) id = detail::splitmix64(id ^ detail::splitmix64(p + 0x632BE59BD9B4E019ull));
    return id;
}

/// Child seed for an addressed sub-experiment (e.g. one channel draw).
inline constexpr std::uint64_t derive_seed(std::uint64_t root, std::string_view tag,
                                           std::initializer_list<std::uint64_t> path = {}) noexcept {
    return detail::splitmix64(root ^ stream_id(tag, path));
}

/// A sequential view of one counter-based stream. Copyable; copies replay the same numbers.
/// Satisfies UniformRandomBitGenerator (32-bit output).
class Stream {
public:
    using result_type = std::uint32_t;

    Stream(std::uint64_t seed, std::uint64_t id) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}, id_(id) {}

    Stream(std::uint64_t seed, std::string_view tag, std::initializer_list<std::uint64_t> path = {}) noexcept
        : Stream(seed, stream_id(tag, path)) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        if (lane_ == 4) refill();
        return block_[lane_++];
    }

    std::uint64_t next_u64() noexcept {
        const std::uint64_t hi = (*this)();
        return (hi << 32) | (*this)();
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer on [lo, hi] (Lemire's nearly-divisionless method).
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) noexcept {
        const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
        if (range == 0) return static_cast<std::int64_t>(next_u64());
        if (range > 0xFFFFFFFFull) return lo + static_cast<std::int64_t>(next_u64() % range);
        const auto r32 = static_cast<std::uint32_t>(range);
        std::uint64_t m = static_cast<std::uint64_t>((*this)()) * r32;
        auto low = static_cast<std::uint32_t>(m);
        if (low < r32) {
            const std::uint32_t threshold = static_cast<std::uint32_t>(-r32) % r32;
            while (low < threshold) {
                m = static_cast<std::uint64_t>((*this)()) * r32;
                low = static_cast<std::uint32_t>(m);
            }
        }
        return lo + static_cast<std::int64_t>(m >> 32);
    }

    /// Standard normal via Box-Muller; the second variate is cached.
    double normal() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    bool coin() noexcept { return ((*this)() & 1u) != 0; }

private:
    void refill() noexcept {
        block_ = philox4x32({static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32),
                             static_cast<std::uint32_t>(id_), static_cast<std::uint32_t>(id_ >> 32)},
                            key_);
        ++counter_;
        lane_ = 0;
    }

    std::array<std::uint32_t, 2> key_;
    std::uint64_t id_;
    std::uint64_t counter_ = 0;
    Philox4x32Block block_{};
    int lane_ = 4;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace bcj
