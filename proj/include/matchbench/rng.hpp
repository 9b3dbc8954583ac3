#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace matchbench {

/**
 * Deterministic seeded random stream (xoshiro256** core, splitmix64 seeding).
 *
 * Every "uniformly at random" choice in the library draws from one of these,
 * so a fixed seed reproduces a run bit for bit on any platform. Sub-streams
 * derived from (seed, label) or (seed, index) are statistically independent
 * and do not advance the parent, which keeps trial-level parallelism
 * deterministic.
 */
class RngStream {
public:
    explicit RngStream(std::uint64_t seed);

    // Independent child stream keyed by a string label.
    RngStream derive(std::string_view label) const;
    // Independent child stream keyed by an index (e.g. a trial number).
    RngStream derive(std::uint64_t index) const;

    std::uint64_t seed() const { return seed_; }
    std::uint64_t draws() const { return draws_; }

    std::uint64_t next_u64();

    // Uniform integer in [0, bound); bound must be >= 1. Unbiased.
    std::size_t uniform_index(std::size_t bound);

    // Uniform double in [0, 1), 53 random bits.
    double uniform_real();

    // In-place Fisher-Yates shuffle.
    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t j = v.size(); j > 1; --j) {
            std::swap(v[j - 1], v[uniform_index(j)]);
        }
    }

private:
    RngStream() = default;
    void seed_state(std::uint64_t s);

    std::array<std::uint64_t, 4> state_{};
    std::uint64_t seed_ = 0;
    std::uint64_t draws_ = 0;
};

// Uniformly random permutation of {0, ..., n-1}.
std::vector<std::size_t> random_permutation(std::size_t n, RngStream& rng);

} // namespace matchbench
