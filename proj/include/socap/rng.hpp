#pragma once

#include <cstdint>
#include <random>

namespace socap::rng {

// Every random quantity in the library is drawn from a substream whose seed
// is derived from the master seed by hashing a stream id (and, where needed,
// an entity index such as a source node or a trial number). The derivation
// keeps the stages independently reproducible: regenerating the social
// assignment never disturbs the deployment, adding phase trials never shifts
// pair choices, and so on.
//
// Substream layout, all derived with mix() from a Deployment's seed:
//   kPositions              node coordinates, one stream for the deployment
//   kGroups      + source   social group of one source
//   kDestinations+ source   destination choice of one source
//   kPhases      + (slot, subnet, trial)   channel phases of one MIMO link
//   kPairChoice  + (slot, subnet, trial)   served-pair choice of one link
//   kTrials      + (point, trial)          per-trial seeds inside sweeps
//   kEstimator   + trial                   distance-estimator trials
enum StreamId : std::uint64_t {
    kPositions = 1,
    kGroups = 2,
    kDestinations = 3,
    kPhases = 4,
    kPairChoice = 5,
    kTrials = 6,
    kEstimator = 7,
};

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// Finalizer of the splitmix64 generator. Bijective on 64-bit words.
inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += kGolden;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Derives a child seed. For a fixed `a`, distinct `b` always give distinct
// results: b -> a + kGolden*(b+1) is injective mod 2^64 (kGolden is odd) and
// splitmix64 is a bijection.
inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) noexcept {
    return splitmix64(a + kGolden * (b + 1));
}

inline std::uint64_t mix(std::uint64_t a, std::uint64_t b,
                         std::uint64_t c) noexcept {
    return mix(mix(a, b), c);
}

inline std::uint64_t mix(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                         std::uint64_t d) noexcept {
    return mix(mix(a, b, c), d);
}

// A seeded generator with the handful of draw kinds the library needs.
// Uniform doubles are produced from the top 53 bits of the raw output, so
// results do not depend on the standard library's distribution internals.
class Stream {
public:
    explicit Stream(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    // Uniform in [0, 1).
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // Uniform in [0, hi). Unbiased via rejection of the wrap-around tail.
    int uniform_int(int hi) {
        const auto n = static_cast<std::uint64_t>(hi);
        const std::uint64_t threshold = (~std::uint64_t{0} - n + 1) % n;
        for (;;) {
            const std::uint64_t r = gen_();
            if (r >= threshold) return static_cast<int>(r % n);
        }
    }

    // Uniform angle in [0, 2*pi).
    double angle() { return uniform01() * 6.283185307179586476925286766559; }

private:
    std::mt19937_64 gen_;
};

} // namespace socap::rng
