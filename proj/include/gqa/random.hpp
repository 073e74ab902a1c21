#pragma once

#include <cstdint>
#include <random>

namespace gqa {

/// Seedable, splittable normal/uniform generator. Child streams are derived
/// with SplitMix64 so results do not depend on how work is scheduled.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    /// Independent stream keyed by (this stream's seed, index).
    Rng split(std::uint64_t index) const;

    double normal() { return normal_(engine_); }
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    /// Uniform integer in [lo, hi].
    int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

    std::uint64_t seed() const noexcept { return seed_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

} // namespace gqa
