#include "gqa/parallel.hpp"

#include <algorithm>

#include "gqa/error.hpp"

namespace gqa {

namespace {

// Below this many multiply-adds a product stays on one thread.
constexpr std::size_t kParallelMatmulWork = 1 << 15;

void check_product(const Matrix& a, const Matrix& b)
{
    if (a.cols() != b.rows()) {
        throw DimensionMismatch("matrix product: inner dimensions differ");
    }
}

// Row i of a*b; shared by the serial and parallel kernels so both sum in the
// same order.
void product_row(const Matrix& a, const Matrix& b, Matrix& c, std::size_t i)
{
    for (std::size_t k = 0; k < a.cols(); ++k) {
        const double aik = a(i, k);
        if (aik == 0.0) {
            continue;
        }
        for (std::size_t j = 0; j < b.cols(); ++j) {
            c(i, j) += aik * b(k, j);
        }
    }
}

MomentSums chunk_sums(const Sampler& sampler, std::size_t dim, std::size_t begin, std::size_t end, Rng rng)
{
    MomentSums s{0, Vector(dim, 0.0), Matrix(dim, dim)};
    for (std::size_t n = begin; n < end; ++n) {
        const Vector x = sampler(rng);
        if (x.size() != dim) {
            throw DimensionMismatch("moment_sums: sampler returned wrong dimension");
        }
        for (std::size_t i = 0; i < dim; ++i) {
            s.sum[i] += x[i];
            for (std::size_t j = 0; j < dim; ++j) {
                s.outer(i, j) += x[i] * x[j];
            }
        }
        ++s.count;
    }
    return s;
}

MomentSums combine(std::vector<MomentSums>& parts, std::size_t dim)
{
    MomentSums total{0, Vector(dim, 0.0), Matrix(dim, dim)};
    for (const MomentSums& p : parts) {
        total.count += p.count;
        for (std::size_t i = 0; i < dim; ++i) {
            total.sum[i] += p.sum[i];
        }
        total.outer += p.outer;
    }
    return total;
}

std::size_t chunk_count(std::size_t samples)
{
    return (samples + kSamplesPerChunk - 1) / kSamplesPerChunk;
}

} // namespace

std::size_t Grid::size() const noexcept
{
    std::size_t n = 1;
    for (std::size_t d = 0; d < dim(); ++d) {
        n *= resolution;
    }
    return n;
}

Vector Grid::point(std::size_t index) const
{
    Vector p(dim());
    for (std::size_t d = dim(); d-- > 0;) {
        const std::size_t k = index % resolution;
        index /= resolution;
        const double t = resolution > 1 ? static_cast<double>(k) / static_cast<double>(resolution - 1) : 0.5;
        p[d] = lo[d] + t * (hi[d] - lo[d]);
    }
    return p;
}

Matrix matmul(const Matrix& a, const Matrix& b)
{
    check_product(a, b);
    Matrix c(a.rows(), b.cols());
    const std::size_t work = a.rows() * a.cols() * b.cols();
    const auto rows = static_cast<long long>(a.rows());
#pragma omp parallel for schedule(static) if (work >= kParallelMatmulWork)
    for (long long i = 0; i < rows; ++i) {
        product_row(a, b, c, static_cast<std::size_t>(i));
    }
    return c;
}

std::vector<double> grid_evaluate(const PointFunction& f, const Grid& grid)
{
    const auto n = static_cast<long long>(grid.size());
    std::vector<double> values(grid.size());
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < n; ++i) {
        const Vector p = grid.point(static_cast<std::size_t>(i));
        values[static_cast<std::size_t>(i)] = f(p);
    }
    return values;
}

MomentSums moment_sums(const Sampler& sampler, std::size_t dim, std::size_t samples, std::uint64_t seed)
{
    const Rng root(seed);
    const std::size_t chunks = chunk_count(samples);
    std::vector<MomentSums> parts(chunks);
    const auto nchunks = static_cast<long long>(chunks);
#pragma omp parallel for schedule(dynamic)
    for (long long c = 0; c < nchunks; ++c) {
        const auto cu = static_cast<std::size_t>(c);
        const std::size_t begin = cu * kSamplesPerChunk;
        const std::size_t end = std::min(samples, begin + kSamplesPerChunk);
        parts[cu] = chunk_sums(sampler, dim, begin, end, root.split(cu));
    }
    return combine(parts, dim);
}

namespace serial {

Matrix matmul(const Matrix& a, const Matrix& b)
{
    check_product(a, b);
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        product_row(a, b, c, i);
    }
    return c;
}

std::vector<double> grid_evaluate(const PointFunction& f, const Grid& grid)
{
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        values[i] = f(grid.point(i));
    }
    return values;
}

MomentSums moment_sums(const Sampler& sampler, std::size_t dim, std::size_t samples, std::uint64_t seed)
{
    const Rng root(seed);
    std::vector<MomentSums> parts;
    for (std::size_t c = 0; c < chunk_count(samples); ++c) {
        const std::size_t begin = c * kSamplesPerChunk;
        const std::size_t end = std::min(samples, begin + kSamplesPerChunk);
        parts.push_back(chunk_sums(sampler, dim, begin, end, root.split(c)));
    }
    return combine(parts, dim);
}

} // namespace serial

} // namespace gqa
