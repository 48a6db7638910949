#pragma once

// Counter-style random streams: every (seed, stream) pair owns an
// independent generator, so a path's noise does not depend on which worker
// simulates it or in what order.

#include <cstdint>
#include <limits>

namespace nzsdg {

constexpr std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256++; satisfies UniformRandomBitGenerator.
class StreamEngine {
public:
    using result_type = std::uint64_t;

    StreamEngine(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t mixer = seed;
        const std::uint64_t key = splitmix64(mixer) ^ (stream * 0xd1342543de82ef95ULL);
        std::uint64_t state = key;
        for (auto& word : s_) word = splitmix64(state);
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on [0, 1) with 53 random bits; portable across standard libraries.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t s_[4]{};
};

}  // namespace nzsdg
