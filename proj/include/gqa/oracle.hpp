#pragma once

// Brute-force reference engines for tests: grid minimization and Monte-Carlo
// moments.

#include <cstdint>

#include "gqa/gauss.hpp"
#include "gqa/parallel.hpp"

namespace gqa {

struct GridSpec {
    Vector lo;
    Vector hi;
    std::size_t resolution = 41;
    std::size_t refinement_rounds = 3;

    /// The same interval on every axis.
    static GridSpec box(std::size_t dim, double lo, double hi, std::size_t resolution = 41, std::size_t rounds = 3);
};

/// Coarse-to-fine grid minimum; +inf iff every sampled point is +inf.
/// Each round zooms to two grid pitches around the incumbent.
double grid_infimize(const PointFunction& f, const GridSpec& spec);

struct Moments {
    Vector mean;
    Matrix cov; ///< unbiased
};

Moments mc_moments(const GaussMap& f, std::span<const double> x, std::size_t samples, std::uint64_t seed);

} // namespace gqa
