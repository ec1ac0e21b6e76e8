#pragma once
#include <cstdint>

namespace polarsim {

// Counter-style pseudorandom engine (splitmix64). A stream is fully
// determined by its 64-bit seed, so streams keyed off (master seed, point
// index, block index) make Monte Carlo runs schedule independent: whichever
// worker processes block b of point p draws exactly the same variates.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~0ull; }

    result_type operator()() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

// splitmix64 finalizer, used as the key-combining hash below.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Independent stream for a (seed, k1, k2, k3) key tuple.
inline SplitMix64 make_stream(std::uint64_t seed, std::uint64_t k1,
                              std::uint64_t k2 = 0, std::uint64_t k3 = 0) {
    constexpr std::uint64_t golden = 0x9e3779b97f4a7c15ull;
    std::uint64_t s = mix64(seed + golden);
    s = mix64(s + golden * (k1 + 1));
    s = mix64(s + golden * (k2 + 1));
    s = mix64(s + golden * (k3 + 1));
    return SplitMix64(s);
}

}  // namespace polarsim
