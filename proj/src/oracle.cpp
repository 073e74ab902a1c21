#include "gqa/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gqa/error.hpp"

namespace gqa {

GridSpec GridSpec::box(std::size_t dim, double lo, double hi, std::size_t resolution, std::size_t rounds)
{
    return {Vector(dim, lo), Vector(dim, hi), resolution, rounds};
}

double grid_infimize(const PointFunction& f, const GridSpec& spec)
{
    if (spec.lo.size() != spec.hi.size()) {
        throw DimensionMismatch("grid_infimize: bounds of different lengths");
    }
    if (spec.resolution < 3) {
        throw Error("grid_infimize: resolution must be at least 3");
    }
    if (spec.lo.empty()) {
        return f(Vector{});
    }
    Grid grid{spec.lo, spec.hi, spec.resolution};
    double best = std::numeric_limits<double>::infinity();
    Vector incumbent;
    for (std::size_t round = 0; round <= spec.refinement_rounds; ++round) {
        const std::vector<double> values = grid_evaluate(f, grid);
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (values[i] < best) {
                best = values[i];
                incumbent = grid.point(i);
            }
        }
        if (incumbent.empty()) {
            return best; // nothing finite yet: keep the verdict of the coarse grid
        }
        for (std::size_t d = 0; d < grid.dim(); ++d) {
            const double pitch = (grid.hi[d] - grid.lo[d]) / static_cast<double>(spec.resolution - 1);
            grid.lo[d] = std::max(spec.lo[d], incumbent[d] - 2 * pitch);
            grid.hi[d] = std::min(spec.hi[d], incumbent[d] + 2 * pitch);
        }
    }
    return best;
}

Moments mc_moments(const GaussMap& f, std::span<const double> x, std::size_t samples, std::uint64_t seed)
{
    if (samples < 2) {
        throw Error("mc_moments: need at least two samples");
    }
    const Matrix l = psd_factor(f.sigma);
    const Vector input(x.begin(), x.end());
    const Sampler draw = [&](Rng& rng) { return sample(f, l, input, rng); };
    const MomentSums sums = moment_sums(draw, f.cod(), samples, seed);

    const std::size_t n = f.cod();
    const double count = static_cast<double>(sums.count);
    Moments m;
    m.mean = scaled(sums.sum, 1.0 / count);
    m.cov = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            m.cov(i, j) = (sums.outer(i, j) - count * m.mean[i] * m.mean[j]) / (count - 1.0);
        }
    }
    return m;
}

} // namespace gqa
