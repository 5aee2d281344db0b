#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace vanetcast {

/**
 * Seeded random stream.
 *
 * Backed by std::mt19937_64, whose output sequence is fixed by the standard.
 * The standard distributions are not portable across library
 * implementations, so the real-valued draws are derived from raw bits here.
 */
class RngStream
{
public:
    explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53 bits of resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// True with probability p (p >= 1 always true, p <= 0 always false).
    bool bernoulli(double p) { return uniform() < p; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

/// Derives independent substreams from one run seed, keyed by consumer label,
/// so adding a consumer never shifts another consumer's draws.
class RngFamily
{
public:
    explicit RngFamily(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    RngStream stream(std::string_view label) const { return RngStream(substream_seed(seed_, label)); }

    static std::uint64_t substream_seed(std::uint64_t seed, std::string_view label);

private:
    std::uint64_t seed_;
};

} // namespace vanetcast
