#include "matchbench/rng.hpp"

#include <limits>
#include <stdexcept>

namespace matchbench {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t mix64(std::uint64_t x) {
    return splitmix64(x);
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

} // namespace

RngStream::RngStream(std::uint64_t seed) {
    seed_ = seed;
    seed_state(seed);
}

void RngStream::seed_state(std::uint64_t s) {
    // xoshiro256** must not start from the all-zero state; splitmix64
    // expansion of any seed avoids it.
    std::uint64_t sm = s;
    for (auto& w : state_) w = splitmix64(sm);
}

RngStream RngStream::derive(std::string_view label) const {
    RngStream child;
    child.seed_ = mix64(seed_ ^ rotl(fnv1a(label), 17));
    child.seed_state(child.seed_);
    return child;
}

RngStream RngStream::derive(std::uint64_t index) const {
    RngStream child;
    child.seed_ = mix64(seed_ ^ rotl(mix64(index + 0x51ED2701A9B3C42FULL), 31));
    child.seed_state(child.seed_);
    return child;
}

std::uint64_t RngStream::next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    ++draws_;
    return result;
}

std::size_t RngStream::uniform_index(std::size_t bound) {
    if (bound == 0) throw std::invalid_argument("uniform_index: bound must be >= 1");
    const std::uint64_t n = bound;
    // Rejection below the largest multiple of n keeps the draw unbiased.
    std::uint64_t x, r;
    do {
        x = next_u64();
        r = x % n;
    } while (x - r > std::numeric_limits<std::uint64_t>::max() - (n - 1));
    return static_cast<std::size_t>(r);
}

double RngStream::uniform_real() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::vector<std::size_t> random_permutation(std::size_t n, RngStream& rng) {
    std::vector<std::size_t> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = i;
    rng.shuffle(p);
    return p;
}

} // namespace matchbench
