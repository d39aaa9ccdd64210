#pragma once

// Deterministic per-node random streams.
//
// Every random decision in the library is drawn from a stream keyed by
// (root seed, purpose, node id). Streams never share state, so results do
// not depend on how nodes are split across worker threads.

#include <cmath>
#include <cstdint>
#include <limits>

namespace smallworld {

inline constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    std::uint64_t s = x;
    return splitmix64(s);
}

// What a stream is used for. Separate purposes give independent streams for
// the same node, so e.g. popularity draws don't shift when edge counts change.
enum class StreamPurpose : std::uint64_t {
    role = 1,
    popularity = 2,
    edge_count = 3,
    edge_targets = 4,
    pairs = 5,
    graph_seed = 6,
    ball_centers = 7,
    test = 99,
};

// xoshiro256** seeded through splitmix64.
class RngStream {
public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t seed, std::uint64_t node, StreamPurpose purpose = StreamPurpose::test) noexcept {
        std::uint64_t s = mix64(seed ^ mix64(static_cast<std::uint64_t>(purpose) * 0xD1B54A32D192ED03ULL));
        s = mix64(s ^ (node * 0x9E3779B97F4A7C15ULL + 0x632BE59BD9B4E019ULL));
        for (auto& w : state_) w = splitmix64(s);
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept { return next(); }

    std::uint64_t next() noexcept {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform01() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1].
    double uniform_open_closed() noexcept { return 1.0 - uniform01(); }

    // Uniform integer in [0, bound). Lemire's multiply-shift with rejection.
    std::uint64_t below(std::uint64_t bound) noexcept {
        if (bound <= 1) return 0;
        unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                m = static_cast<unsigned __int128>(next()) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    bool bernoulli(double p) noexcept { return uniform01() < p; }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

    std::uint64_t state_[4]{};
};

// Derives a child seed, e.g. one graph seed per sweep point.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) noexcept {
    RngStream s(seed, mix64(a) ^ (b * 0xA24BAED4963EE407ULL), StreamPurpose::graph_seed);
    return s.next();
}

} // namespace smallworld
