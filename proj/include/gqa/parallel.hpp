#pragma once

// Data-parallel kernels. Each kernel has a serial reference in
// gqa::serial with the same signature; the parallel versions fix their
// reduction order so both return bit-identical results.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "gqa/linalg.hpp"
#include "gqa/random.hpp"

namespace gqa {

using PointFunction = std::function<double(std::span<const double>)>;
using Sampler = std::function<Vector(Rng&)>;

/// Tensor grid: axis d has `resolution` points evenly spaced on [lo[d], hi[d]].
struct Grid {
    Vector lo;
    Vector hi;
    std::size_t resolution = 3;

    std::size_t dim() const noexcept { return lo.size(); }
    std::size_t size() const noexcept;
    /// Point with flat index `index`, first axis varying slowest.
    Vector point(std::size_t index) const;
};

/// Raw first and second moment sums accumulated over samples.
struct MomentSums {
    std::size_t count = 0;
    Vector sum;   ///< sum of x
    Matrix outer; ///< sum of x x^T
};

/// Samples per independent stream in moment accumulation.
inline constexpr std::size_t kSamplesPerChunk = 4096;

Matrix matmul(const Matrix& a, const Matrix& b);
/// f at every grid point, in flat-index order.
std::vector<double> grid_evaluate(const PointFunction& f, const Grid& grid);
/// Chunk c draws from Rng(seed).split(c); chunk sums are combined in order.
MomentSums moment_sums(const Sampler& sampler, std::size_t dim, std::size_t samples, std::uint64_t seed);

namespace serial {
Matrix matmul(const Matrix& a, const Matrix& b);
std::vector<double> grid_evaluate(const PointFunction& f, const Grid& grid);
MomentSums moment_sums(const Sampler& sampler, std::size_t dim, std::size_t samples, std::uint64_t seed);
} // namespace serial

} // namespace gqa
