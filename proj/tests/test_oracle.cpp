#include <doctest.h>

#include <cmath>
#include <limits>

#include "gqa/error.hpp"
#include "gqa/oracle.hpp"

using namespace gqa;

TEST_CASE("grid minimum of smooth functions")
{
    const PointFunction bowl = [](std::span<const double> x) {
        return (x[0] - 0.3) * (x[0] - 0.3) + 2 * (x[1] + 1.17) * (x[1] + 1.17) + 5.0;
    };
    CHECK(grid_infimize(bowl, GridSpec::box(2, -4.0, 4.0)) == doctest::Approx(5.0).epsilon(1e-6));
    // one coarse round only: error bounded by the pitch
    const double coarse = grid_infimize(bowl, GridSpec::box(2, -4.0, 4.0, 41, 0));
    CHECK(coarse >= 5.0);
    CHECK(coarse <= 5.0 + 3 * 0.2 * 0.2);

    const PointFunction edge = [](std::span<const double> x) { return x[0]; };
    CHECK(grid_infimize(edge, GridSpec::box(1, 2.0, 3.0)) == 2.0);
}

TEST_CASE("indicator-like functions")
{
    const double inf = std::numeric_limits<double>::infinity();
    const PointFunction never = [inf](std::span<const double>) { return inf; };
    CHECK(std::isinf(grid_infimize(never, GridSpec::box(2, -1.0, 1.0, 11))));

    const PointFunction on_grid = [inf](std::span<const double> x) { return x[0] == 0.0 ? 1.5 : inf; };
    CHECK(grid_infimize(on_grid, GridSpec::box(1, -1.0, 1.0, 11)) == 1.5);

    const PointFunction constant = [](std::span<const double>) { return 0.25; };
    CHECK(grid_infimize(constant, GridSpec{}) == 0.25);
}

TEST_CASE("bad grid specifications")
{
    const PointFunction f = [](std::span<const double>) { return 0.0; };
    CHECK_THROWS_AS(grid_infimize(f, GridSpec{{0.0}, {1.0, 2.0}}), DimensionMismatch);
    CHECK_THROWS_AS(grid_infimize(f, GridSpec::box(1, 0.0, 1.0, 2)), Error);
}

TEST_CASE("Monte-Carlo moments converge")
{
    GaussMap f{Matrix{{1.0, 0.0}, {1.0, 1.0}}, {1.0, -2.0}, Matrix{{4.0, 1.0}, {1.0, 1.0}}};
    const double x[] = {0.5, 0.5};
    const std::size_t n = 200000;
    const Moments m = mc_moments(f, x, n, 7);
    // 5 standard errors
    CHECK(std::abs(m.mean[0] - 1.5) < 5 * std::sqrt(4.0 / n));
    CHECK(std::abs(m.mean[1] - -1.0) < 5 * std::sqrt(1.0 / n));
    CHECK(std::abs(m.cov(0, 0) - 4.0) < 5 * 4.0 * std::sqrt(2.0 / n));
    CHECK(std::abs(m.cov(1, 1) - 1.0) < 5 * 1.0 * std::sqrt(2.0 / n));
    CHECK(std::abs(m.cov(0, 1) - 1.0) < 5 * std::sqrt((4.0 * 1.0 + 1.0) / n));

    const Moments again = mc_moments(f, x, n, 7);
    CHECK(again.mean == m.mean);
    CHECK(again.cov == m.cov);
    CHECK_THROWS_AS(mc_moments(f, x, 1, 7), Error);
}

TEST_CASE("degenerate noise gives degenerate samples")
{
    GaussMap f{Matrix(2, 0), {3.0, 1.0}, Matrix{{1.0, 1.0}, {1.0, 1.0}}};
    const Moments m = mc_moments(f, std::span<const double>{}, 5000, 3);
    CHECK(m.cov(0, 0) == doctest::Approx(m.cov(1, 1)).epsilon(1e-9));
    CHECK(m.cov(0, 1) == doctest::Approx(m.cov(0, 0)).epsilon(1e-9));
}
