#include <doctest.h>

#include <cmath>

#include "gqa/parallel.hpp"
#include "gqa/random.hpp"
#include "support.hpp"

using namespace gqa;

TEST_CASE("rng streams are reproducible and distinct")
{
    Rng a(5);
    Rng b(5);
    CHECK(a.normal() == b.normal());
    Rng c = Rng(5).split(1);
    Rng d = Rng(5).split(2);
    CHECK(c.normal() != d.normal());
    CHECK(Rng(5).split(1).normal() == Rng(5).split(1).normal());
}

TEST_CASE("parallel matmul matches the serial reference bit for bit")
{
    Rng rng(1);
    for (std::size_t n : {1u, 7u, 40u, 90u}) {
        const Matrix a = gqa::testing::random_matrix(rng, n, n + 3);
        const Matrix b = gqa::testing::random_matrix(rng, n + 3, n);
        CHECK(matmul(a, b) == serial::matmul(a, b));
    }
    CHECK(matmul(Matrix(0, 3), Matrix(3, 2)).rows() == 0);
}

TEST_CASE("grid evaluation order and agreement")
{
    const Grid g{{0.0, 10.0}, {1.0, 20.0}, 3};
    CHECK(g.size() == 9);
    CHECK(g.point(0) == Vector{0.0, 10.0});
    CHECK(g.point(1) == Vector{0.0, 15.0});
    CHECK(g.point(3) == Vector{0.5, 10.0});
    CHECK(g.point(8) == Vector{1.0, 20.0});

    const PointFunction f = [](std::span<const double> x) { return std::sin(x[0]) * std::exp(x[1] / 20); };
    CHECK(grid_evaluate(f, g) == serial::grid_evaluate(f, g));
    const Grid big{{-1.0, -1.0, -1.0}, {1.0, 1.0, 1.0}, 21};
    CHECK(grid_evaluate(f, big) == serial::grid_evaluate(f, big));
}

TEST_CASE("moment sums agree with the serial reference")
{
    const Sampler s = [](Rng& rng) { return Vector{rng.normal(), 2.0 + rng.uniform(0.0, 1.0)}; };
    for (std::size_t n : {1u, 4096u, 10001u}) {
        const MomentSums p = moment_sums(s, 2, n, 99);
        const MomentSums q = serial::moment_sums(s, 2, n, 99);
        CHECK(p.count == n);
        CHECK(p.sum == q.sum);
        CHECK(p.outer == q.outer);
    }
}
