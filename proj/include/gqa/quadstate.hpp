#pragma once

// Canonical quadratic states 0 -> n:
//   f(x) = score + 1/2 <r, Sigma^+ r> + [r in im Sigma],  r = P_{D^perp} x - mu.

#include <limits>
#include <span>
#include <vector>

#include "gqa/linalg.hpp"

namespace gqa {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct QuadState {
    std::size_t n = 0;
    Subspace fibre;     ///< D, directions along which f is constant
    Vector mu;          ///< in D^perp
    Matrix sigma;       ///< PSD, image inside D^perp
    double score = 0.0; ///< +inf when infeasible
    bool infeasible = false;
};

/// Builds and canonicalizes a state; throws DimensionMismatch on bad shapes.
QuadState make_state(const Subspace& fibre, Vector mu, Matrix sigma, double score = 0.0,
                     double tol = kRankTolerance);
/// N(mu, sigma) with an empty fibre.
QuadState gaussian_state(Vector mu, Matrix sigma);
/// [x = mu]
QuadState point_state(Vector mu);
QuadState infeasible_state(std::size_t n);
/// 0-dimensional state carrying only a score.
QuadState scalar_state(double score);

/// Re-projects mu and Sigma against D, symmetrizes Sigma and trims its
/// eigenvalues below tol * max(lambda_max, 1). Infeasible states get zeroed.
QuadState canonicalize(const QuadState& s, double tol = kRankTolerance);

/// Evaluator with the projector and pseudoinverse cached.
class StateEvaluator {
public:
    explicit StateEvaluator(const QuadState& s, double tol = kRankTolerance);
    double operator()(std::span<const double> x) const;

private:
    QuadState state_;
    double tol_;
    Matrix perp_;      ///< projector onto D^perp
    Matrix pinv_;      ///< Sigma^+
    Matrix image_;     ///< projector onto im Sigma
};

double eval_state(const QuadState& s, std::span<const double> x, double tol = kRankTolerance);

QuadState tensor_states(const QuadState& s, const QuadState& t);
/// Image of s under x |-> T x + b; the value at y is the infimum over the fibre.
QuadState pushforward(const QuadState& s, const Matrix& t, std::span<const double> b);
/// Wire i of s becomes wire perm[i] of the result.
QuadState permute_state(const QuadState& s, std::span<const std::size_t> perm);
/// s + [B x = v].
QuadState condition_zero(const QuadState& s, const Matrix& b, std::span<const double> v,
                         double tol = kRankTolerance);

/// Fibre projectors, then mu, Sigma and score, with |a - b| <= tol * max(1, |a|, |b|).
bool states_equal(const QuadState& s, const QuadState& t, double tol = 1e-9);

} // namespace gqa
