#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "gqa/error.hpp"
#include "gqa/oracle.hpp"
#include "gqa/quadstate.hpp"
#include "support.hpp"

using namespace gqa;
using gqa::testing::random_finite_state;
using gqa::testing::random_matrix;
using gqa::testing::random_state;
using gqa::testing::random_vector;

TEST_CASE("evaluation")
{
    const QuadState s = make_state(Subspace::from_orthonormal(Matrix{{1.0}, {0.0}}), {0.0, 0.0},
                                   Matrix{{0.0, 0.0}, {0.0, 1.0}});
    const double x[] = {5.0, 2.0};
    CHECK(eval_state(s, x) == doctest::Approx(2.0));

    const QuadState n2 = gaussian_state({0.0}, Matrix{{2.0}});
    const double y[] = {2.0};
    CHECK(eval_state(n2, y) == doctest::Approx(1.0).epsilon(1e-14));

    const double zero[] = {0.0};
    CHECK(std::isinf(eval_state(point_state({1.0}), zero)));
    CHECK(std::isinf(eval_state(infeasible_state(1), zero)));
    CHECK_THROWS_AS(eval_state(n2, x), DimensionMismatch);
}

TEST_CASE("invariants after construction")
{
    Rng rng(1);
    for (int trial = 0; trial < 30; ++trial) {
        const auto n = static_cast<std::size_t>(rng.uniform_int(1, 4));
        const QuadState s = random_state(rng, n);
        CHECK(norm(project(s.fibre, s.mu)) < 1e-12);
        CHECK((s.fibre.projector() * s.sigma).max_abs() < 1e-12);
        CHECK(s.score >= 0.0);
        CHECK(states_equal(canonicalize(s), s, 1e-12));
    }
    const QuadState bad = infeasible_state(2);
    CHECK(bad.mu == Vector{0.0, 0.0});
    CHECK(bad.sigma.max_abs() == 0.0);
    CHECK(bad.fibre.rank() == 0);
}

TEST_CASE("tensor adds values")
{
    const QuadState s = gaussian_state({1.0}, Matrix{{2.0}});
    CHECK(states_equal(tensor_states(s, scalar_state(0.0)), s));
    CHECK(states_equal(tensor_states(point_state({1.0}), point_state({2.0})), point_state({1.0, 2.0})));

    Rng rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        const QuadState a = random_finite_state(rng, 2);
        const QuadState b = random_finite_state(rng, 1);
        const QuadState ab = tensor_states(a, b);
        const Vector x = random_vector(rng, 2);
        const Vector y = random_vector(rng, 1);
        CHECK(eval_state(ab, concat(x, y)) == doctest::Approx(eval_state(a, x) + eval_state(b, y)).epsilon(1e-10));
    }
    CHECK(tensor_states(infeasible_state(1), s).infeasible);
}

TEST_CASE("pushforward")
{
    Rng rng(3);
    const QuadState s = random_state(rng, 3);
    CHECK(states_equal(pushforward(s, Matrix::identity(3), Vector(3, 0.0)), s));

    const QuadState nn = tensor_states(gaussian_state({0.0}, Matrix{{1.0}}), gaussian_state({0.0}, Matrix{{1.0}}));
    const QuadState sum = pushforward(nn, Matrix{{1.0, 1.0}}, Vector{0.0});
    CHECK(states_equal(sum, gaussian_state({0.0}, Matrix{{2.0}})));
    CHECK_THROWS_AS(pushforward(nn, Matrix{{1.0}}, Vector{0.0}), DimensionMismatch);
}

TEST_CASE("pushforward is infimization over the fibre (grid oracle)")
{
    Rng rng(4);
    for (int trial = 0; trial < 6; ++trial) {
        const QuadState s = random_finite_state(rng, 3);
        const Matrix t = random_matrix(rng, 2, 3);
        const Vector b = random_vector(rng, 2);
        const QuadState image = pushforward(s, t, b);
        // Parametrize the preimage of y as x0 + K z with K spanning ker T.
        const Matrix tp = pseudoinverse(t);
        const Subspace k = kernel(t);
        const StateEvaluator f(s);
        for (int probe = 0; probe < 5; ++probe) {
            const Vector y = random_vector(rng, 2);
            const Vector x0 = tp * sub(y, b);
            const PointFunction g = [&](std::span<const double> z) {
                Vector x = x0;
                for (std::size_t j = 0; j < z.size(); ++j) {
                    for (std::size_t i = 0; i < 3; ++i) {
                        x[i] += k.basis()(i, j) * z[j];
                    }
                }
                return f(x);
            };
            const double oracle = grid_infimize(g, GridSpec::box(k.rank(), -20.0, 20.0));
            CHECK(eval_state(image, y) == doctest::Approx(oracle).epsilon(1e-4).scale(1.0));
            CHECK(eval_state(image, y) <= oracle + 1e-9);
        }
    }
}

TEST_CASE("conditioning: worked Gaussian example")
{
    const QuadState joint = gaussian_state({0.0, 0.0}, Matrix{{100.0, 100.0}, {100.0, 125.0}});
    const QuadState cond = condition_zero(joint, Matrix{{0.0, 1.0}}, Vector{40.0});
    const QuadState post = pushforward(cond, Matrix{{1.0, 0.0}}, Vector{0.0});
    CHECK(post.mu[0] == doctest::Approx(32.0).epsilon(1e-12));
    CHECK(post.sigma(0, 0) == doctest::Approx(20.0).epsilon(1e-12));
    CHECK(post.score == doctest::Approx(6.4).epsilon(1e-12));
    CHECK(cond.mu[1] == doctest::Approx(40.0));
}

TEST_CASE("conditioning: fibre absorbs, contradiction, consistency")
{
    const QuadState free = make_state(Subspace::full(1), {0.0}, Matrix(1, 1));
    const QuadState pinned = condition_zero(free, Matrix{{1.0}}, Vector{7.0});
    CHECK(states_equal(pinned, point_state({7.0})));
    CHECK(pinned.score == 0.0);

    CHECK(condition_zero(point_state({1.0}), Matrix{{1.0}}, Vector{0.0}).infeasible);
    CHECK(states_equal(condition_zero(point_state({1.0}), Matrix{{2.0}}, Vector{2.0}), point_state({1.0})));

    // Inconsistent constraint rows.
    const QuadState g = gaussian_state({0.0, 0.0}, Matrix::identity(2));
    CHECK(condition_zero(g, Matrix{{1.0, 1.0}, {2.0, 2.0}}, Vector{1.0, 3.0}).infeasible);
    // A zero constraint row is only an equation 0 = v.
    CHECK(states_equal(condition_zero(g, Matrix(1, 2), Vector{0.0}), g));
    CHECK(condition_zero(g, Matrix(1, 2), Vector{1.0}).infeasible);
    CHECK_THROWS_AS(condition_zero(g, Matrix(1, 3), Vector{0.0}), DimensionMismatch);
}

TEST_CASE("conditioning a standard normal and the Pythagorean law")
{
    const QuadState n = gaussian_state({0.0}, Matrix{{1.0}});
    for (double c : {0.0, 1.0, -2.5, 4.0}) {
        const QuadState at = condition_zero(n, Matrix{{1.0}}, Vector{c});
        CHECK(at.score == doctest::Approx(0.5 * c * c));
        CHECK(states_equal(at, make_state(Subspace(1), {c}, Matrix(1, 1), 0.5 * c * c)));
    }
    const QuadState nn = tensor_states(n, n);
    const QuadState ab = condition_zero(nn, Matrix::identity(2), Vector{3.0, 4.0});
    const QuadState c5 = condition_zero(n, Matrix{{1.0}}, Vector{5.0});
    CHECK(ab.score == doctest::Approx(c5.score));
}

TEST_CASE("conditioning is pointwise exact and monotone")
{
    Rng rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const auto n = static_cast<std::size_t>(rng.uniform_int(1, 4));
        const QuadState s = random_finite_state(rng, n);
        const auto q = static_cast<std::size_t>(rng.uniform_int(1, static_cast<int>(n)));
        const Matrix b = random_matrix(rng, q, n);
        const Vector x = random_vector(rng, n);
        const Vector v = b * x;
        const QuadState c = condition_zero(s, b, v);
        CHECK(c.score >= s.score - 1e-12);
        CHECK(eval_state(c, x) == doctest::Approx(eval_state(s, x)).epsilon(1e-8));
        Vector off = x;
        off[0] += 0.5;
        if (norm(sub(b * off, v)) > 1e-6) {
            CHECK(std::isinf(eval_state(c, off)));
        }
    }
}

TEST_CASE("constraint row order does not matter")
{
    Rng rng(6);
    for (int trial = 0; trial < 20; ++trial) {
        const QuadState s = random_state(rng, 4);
        const Matrix b = random_matrix(rng, 3, 4);
        const Vector v = b * add(s.mu, random_vector(rng, 4));
        Matrix flipped(3, 4);
        Vector w(3);
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = 0; j < 4; ++j) {
                flipped(i, j) = b(2 - i, j);
            }
            w[i] = v[2 - i];
        }
        CHECK(states_equal(condition_zero(s, b, v), condition_zero(s, flipped, w), 1e-8));
    }
}

TEST_CASE("state equality")
{
    Rng rng(7);
    const Matrix l = random_matrix(rng, 3, 3);
    const Matrix r = gqa::testing::random_orthogonal(rng, 3);
    const Matrix lr = l * r;
    CHECK(states_equal(gaussian_state({1.0, 2.0, 3.0}, l * l.transpose()),
                       gaussian_state({1.0, 2.0, 3.0}, lr * lr.transpose()), 1e-9));

    QuadState junk = infeasible_state(2);
    junk.mu = {5.0, 6.0};
    CHECK(states_equal(canonicalize(junk), infeasible_state(2)));
    CHECK(states_equal(junk, infeasible_state(2)));

    const QuadState a = make_state(Subspace(1), {0.0}, Matrix{{1.0}}, 1.0);
    const QuadState b = make_state(Subspace(1), {0.0}, Matrix{{1.0}}, 1.001);
    CHECK_FALSE(states_equal(a, b, 1e-6));
    CHECK_FALSE(states_equal(a, point_state({0.0})));
    CHECK_FALSE(states_equal(a, infeasible_state(1)));

    const QuadState s = random_state(rng, 3);
    CHECK(states_equal(canonicalize(canonicalize(s)), canonicalize(s), 0.0));
}

TEST_CASE("permutation of wires")
{
    const QuadState s = make_state(Subspace(3), {1.0, 2.0, 3.0}, Matrix::diagonal(Vector{1.0, 2.0, 0.0}));
    const std::size_t perm[] = {2, 0, 1};
    const QuadState p = permute_state(s, perm);
    CHECK(p.mu == Vector{2.0, 3.0, 1.0});
    CHECK(p.sigma(2, 2) == doctest::Approx(1.0));
    CHECK(p.sigma(0, 0) == doctest::Approx(2.0));
}

TEST_CASE("canonicalize is idempotent bit for bit")
{
    Rng rng(8);
    for (int trial = 0; trial < 40; ++trial) {
        const QuadState s = random_state(rng, static_cast<std::size_t>(rng.uniform_int(0, 4)));
        const QuadState t = canonicalize(s);
        CHECK(t.mu == s.mu);
        CHECK(t.sigma == s.sigma);
        CHECK(t.fibre.basis() == s.fibre.basis());
        CHECK(t.score == s.score);
    }
    CHECK(Subspace::full(3).basis() == Matrix::identity(3));
}
