// Deterministic seeded random streams with cheap substream derivation.
// All randomness in the library flows through RngStream so that a single
// base seed reproduces a full experiment regardless of worker count.
#pragma once

#include <cstdint>
#include <initializer_list>

namespace efsc {

// splitmix64 finalizer
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Counter-based splitmix64 stream. Portable across platforms and
// standard-library versions (no std::uniform_real_distribution).
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : state_(mix64(seed)) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform double in [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform double in [a, b)
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    bool bernoulli(double p) { return uniform() < p; }

    // integer in [0, m)
    std::uint64_t uniform_int(std::uint64_t m) {
        // modulo bias is negligible for the m used here (m << 2^64)
        return next_u64() % m;
    }

    // Independent stream derived from the current seed material and a tag.
    // Does not advance this stream.
    RngStream substream(std::uint64_t tag) const {
        return RngStream(mix64(state_ ^ mix64(tag ^ 0xa076'1d64'78bd'642fULL)));
    }

    // Mix an arbitrary list of values into one seed.
    static std::uint64_t combine(std::initializer_list<std::uint64_t> parts) {
        std::uint64_t h = 0x2b99'2ddf'a232'49d6ULL;
        for (std::uint64_t p : parts) h = mix64(h ^ mix64(p));
        return h;
    }

private:
    std::uint64_t state_;
};

}  // namespace efsc
