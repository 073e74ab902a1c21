#include "gqa/quadstate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gqa/error.hpp"

namespace gqa {

namespace {

// Snap entries that are pure rounding noise relative to the largest entry.
constexpr double kSnap = 64 * std::numeric_limits<double>::epsilon();

void snap(std::span<double> xs)
{
    double scale = 1.0;
    for (double x : xs) {
        scale = std::max(scale, std::abs(x));
    }
    for (double& x : xs) {
        if (std::abs(x) <= kSnap * scale) {
            x = 0.0;
        }
    }
}

bool nearly_same(std::span<const double> computed, std::span<const double> given)
{
    double scale = 1.0;
    for (double x : computed) {
        scale = std::max(scale, std::abs(x));
    }
    for (std::size_t i = 0; i < computed.size(); ++i) {
        if (computed[i] == 0.0 ? given[i] != 0.0 || std::signbit(given[i])
                               : std::abs(computed[i] - given[i]) > 16 * std::numeric_limits<double>::epsilon() * scale) {
            return false;
        }
    }
    return true;
}

Matrix perp_projector(const Subspace& d)
{
    Matrix p = d.projector();
    p *= -1.0;
    for (std::size_t i = 0; i < p.rows(); ++i) {
        p(i, i) += 1.0;
    }
    return p;
}

Matrix outer(std::span<const double> a, std::span<const double> b)
{
    Matrix m(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            m(i, j) = a[i] * b[j];
        }
    }
    return m;
}

bool close(double a, double b, double tol)
{
    if (std::isinf(a) || std::isinf(b)) {
        return a == b;
    }
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

bool close(std::span<const double> a, std::span<const double> b, double tol)
{
    if (a.size() != b.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!close(a[i], b[i], tol)) {
            return false;
        }
    }
    return true;
}

void check_shapes(std::size_t n, const Subspace& fibre, const Vector& mu, const Matrix& sigma)
{
    if (fibre.ambient_dim() != n || mu.size() != n || sigma.rows() != n || sigma.cols() != n) {
        throw DimensionMismatch("state on " + std::to_string(n) + " wires: fibre in R^" +
                                std::to_string(fibre.ambient_dim()) + ", mean of length " + std::to_string(mu.size()) +
                                ", covariance " + std::to_string(sigma.rows()) + "x" + std::to_string(sigma.cols()));
    }
}

} // namespace

QuadState infeasible_state(std::size_t n)
{
    QuadState s;
    s.n = n;
    s.fibre = Subspace(n);
    s.mu = Vector(n, 0.0);
    s.sigma = Matrix(n, n);
    s.score = kInfinity;
    s.infeasible = true;
    return s;
}

QuadState canonicalize(const QuadState& s, double tol)
{
    if (s.infeasible || std::isinf(s.score)) {
        return infeasible_state(s.n);
    }
    check_shapes(s.n, s.fibre, s.mu, s.sigma);
    QuadState r;
    r.n = s.n;
    r.fibre = s.fibre;
    const Matrix perp = perp_projector(s.fibre);
    r.mu = perp * s.mu;

    const Matrix projected = symmetrized(perp * s.sigma * perp);
    const SymmetricEigen eig = symmetric_eigen(projected);
    const double lmax = eig.values.empty() ? 0.0 : eig.values.back();
    const double threshold = tol * std::max(lmax, 1.0);
    r.sigma = Matrix(s.n, s.n);
    for (std::size_t k = 0; k < eig.values.size(); ++k) {
        const double lambda = eig.values[k];
        if (lambda <= threshold) {
            continue;
        }
        const Vector v = eig.vectors.col(k);
        for (std::size_t i = 0; i < s.n; ++i) {
            for (std::size_t j = 0; j < s.n; ++j) {
                r.sigma(i, j) += lambda * v[i] * v[j];
            }
        }
    }
    r.sigma = symmetrized(r.sigma);
    snap(r.mu);
    snap(r.sigma.data());
    for (double& x : r.mu) {
        x += 0.0; // drop negative zero
    }
    for (double& x : r.sigma.data()) {
        x += 0.0;
    }
    // Already-canonical input is returned bit for bit, so canonicalize is idempotent.
    if (nearly_same(r.mu, s.mu)) {
        r.mu = s.mu;
    }
    if (nearly_same(r.sigma.data(), s.sigma.data())) {
        r.sigma = s.sigma;
    }
    r.score = s.score < 0.0 && s.score > -tol ? 0.0 : s.score;
    if (r.score < 0.0) {
        throw Error("state with negative score " + std::to_string(r.score));
    }
    return r;
}

QuadState make_state(const Subspace& fibre, Vector mu, Matrix sigma, double score, double tol)
{
    QuadState s;
    s.n = mu.size();
    s.fibre = fibre;
    s.mu = std::move(mu);
    s.sigma = std::move(sigma);
    s.score = score;
    check_shapes(s.n, s.fibre, s.mu, s.sigma);
    return canonicalize(s, tol);
}

QuadState gaussian_state(Vector mu, Matrix sigma)
{
    const std::size_t n = mu.size();
    return make_state(Subspace(n), std::move(mu), std::move(sigma));
}

QuadState point_state(Vector mu)
{
    const std::size_t n = mu.size();
    return make_state(Subspace(n), std::move(mu), Matrix(n, n));
}

QuadState scalar_state(double score)
{
    if (std::isinf(score)) {
        return infeasible_state(0);
    }
    return make_state(Subspace(0), Vector{}, Matrix{}, score);
}

StateEvaluator::StateEvaluator(const QuadState& s, double tol)
    : state_(s)
    , tol_(tol)
{
    if (s.infeasible) {
        return;
    }
    perp_ = perp_projector(s.fibre);
    pinv_ = pseudoinverse(s.sigma, tol, 1.0);
    image_ = s.sigma * pinv_;
}

double StateEvaluator::operator()(std::span<const double> x) const
{
    const std::size_t n = state_.n;
    if (x.size() != n) {
        throw DimensionMismatch("eval_state: point of length " + std::to_string(x.size()) + " for a state on " +
                                std::to_string(n) + " wires");
    }
    if (state_.infeasible) {
        return kInfinity;
    }
    // Small states are evaluated without heap traffic; the grid oracle calls
    // this millions of times.
    constexpr std::size_t kStack = 16;
    double stack[kStack];
    std::vector<double> heap;
    double* r = stack;
    if (n > kStack) {
        heap.resize(n);
        r = heap.data();
    }
    double rr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double v = -state_.mu[i];
        for (std::size_t j = 0; j < n; ++j) {
            v += perp_(i, j) * x[j];
        }
        r[i] = v;
        rr += v * v;
    }
    double off = 0.0;
    double quad = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double img = 0.0;
        double inv = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            img += image_(i, j) * r[j];
            inv += pinv_(i, j) * r[j];
        }
        off += (r[i] - img) * (r[i] - img);
        quad += r[i] * inv;
    }
    if (std::sqrt(off) > tol_ * (1.0 + std::sqrt(rr))) {
        return kInfinity;
    }
    return state_.score + 0.5 * std::max(quad, 0.0);
}

double eval_state(const QuadState& s, std::span<const double> x, double tol)
{
    return StateEvaluator(s, tol)(x);
}

QuadState tensor_states(const QuadState& s, const QuadState& t)
{
    const std::size_t n = s.n + t.n;
    if (s.infeasible || t.infeasible) {
        return infeasible_state(n);
    }
    QuadState r;
    r.n = n;
    r.fibre = Subspace::from_orthonormal(block_diag(s.fibre.basis(), t.fibre.basis()));
    if (r.fibre.ambient_dim() != n) {
        r.fibre = Subspace(n);
    }
    r.mu = concat(s.mu, t.mu);
    r.sigma = block_diag(s.sigma, t.sigma);
    r.score = s.score + t.score;
    return r;
}

QuadState pushforward(const QuadState& s, const Matrix& t, std::span<const double> b)
{
    const std::size_t k = t.rows();
    if (t.cols() != s.n || b.size() != k) {
        throw DimensionMismatch("pushforward: map is " + std::to_string(k) + "x" + std::to_string(t.cols()) +
                                " with offset of length " + std::to_string(b.size()) + ", state on " +
                                std::to_string(s.n) + " wires");
    }
    if (s.infeasible) {
        return infeasible_state(k);
    }
    QuadState r;
    r.n = k;
    r.fibre = subspace_image(t, s.fibre);
    const Matrix perp = perp_projector(r.fibre);
    r.mu = perp * add(t * s.mu, b);
    r.sigma = perp * t * s.sigma * t.transpose() * perp;
    r.score = s.score;
    return canonicalize(r);
}

QuadState permute_state(const QuadState& s, std::span<const std::size_t> perm)
{
    if (perm.size() != s.n) {
        throw DimensionMismatch("permute_state: permutation of length " + std::to_string(perm.size()) +
                                " for a state on " + std::to_string(s.n) + " wires");
    }
    Matrix p(s.n, s.n);
    for (std::size_t i = 0; i < s.n; ++i) {
        if (perm[i] >= s.n) {
            throw Error("permute_state: index out of range");
        }
        p(perm[i], i) = 1.0;
    }
    return pushforward(s, p, Vector(s.n, 0.0));
}

namespace {

// s + [a^T x = t] for a unit vector a.
QuadState condition_row(const QuadState& s, const Vector& a, double t, double tol)
{
    const std::size_t n = s.n;
    const Matrix& q = s.fibre.basis();
    const Vector alpha = q.transpose() * a;
    const double alpha2 = dot(alpha, alpha);

    if (std::sqrt(alpha2) > 1e3 * tol) {
        // The fibre absorbs the constraint.
        const Vector u = scaled(q * alpha, 1.0 / alpha2);
        const Vector mu = add(s.mu, scaled(u, t - dot(a, s.mu)));
        Matrix m = Matrix::identity(n) - outer(u, a);
        const Matrix sigma = m * s.sigma * m.transpose();
        Matrix row(1, alpha.size());
        for (std::size_t j = 0; j < alpha.size(); ++j) {
            row(0, j) = alpha[j];
        }
        const Subspace rest = kernel(row);
        const Subspace fibre =
            rest.rank() == 0 ? Subspace(n) : Subspace::from_orthonormal(q * rest.basis());
        return make_state(fibre, mu, sigma, s.score, tol);
    }

    const Vector ap = sub(a, q * alpha);
    const double ap2 = dot(ap, ap);
    const Vector sa = s.sigma * ap;
    const double b2 = dot(ap, sa);
    const double e = t - dot(ap, s.mu);

    if (b2 > tol * std::max(1.0, s.sigma.max_abs())) {
        // Gaussian conditioning on a direction with positive variance.
        const Vector k = scaled(sa, 1.0 / b2);
        const Vector mu = add(s.mu, scaled(k, e));
        Matrix m = Matrix::identity(n) - outer(k, ap);
        const Matrix sigma = m * s.sigma * m.transpose();
        return make_state(s.fibre, mu, sigma, s.score + 0.5 * e * e / b2, tol);
    }

    if (std::abs(e) <= tol * std::max({1.0, std::abs(t), std::abs(dot(ap, s.mu))})) {
        Matrix m = Matrix::identity(n) - outer(scaled(ap, 1.0 / ap2), ap);
        const Matrix sigma = m * s.sigma * m.transpose();
        const Vector mu = add(s.mu, scaled(ap, e / ap2));
        return make_state(s.fibre, mu, sigma, s.score, tol);
    }
    return infeasible_state(n);
}

} // namespace

QuadState condition_zero(const QuadState& s, const Matrix& b, std::span<const double> v, double tol)
{
    if (b.cols() != s.n || b.rows() != v.size()) {
        throw DimensionMismatch("condition_zero: constraint block is " + std::to_string(b.rows()) + "x" +
                                std::to_string(b.cols()) + " with " + std::to_string(v.size()) +
                                " targets, state on " + std::to_string(s.n) + " wires");
    }
    if (s.infeasible || b.rows() == 0) {
        return s;
    }

    // Orthonormalize the constraint block: B x = v  <=>  W^T x = W^T x0.
    const Svd d = svd(b);
    const double smax = d.s.empty() ? 0.0 : d.s.front();
    std::size_t r = 0;
    while (r < d.s.size() && d.s[r] > tol * smax) {
        ++r;
    }
    Vector x0(s.n, 0.0);
    for (std::size_t i = 0; i < r; ++i) {
        const double c = dot(d.u.col(i), v) / d.s[i];
        for (std::size_t j = 0; j < s.n; ++j) {
            x0[j] += c * d.v(j, i);
        }
    }
    const Vector residual = sub(b * x0, v);
    if (norm(residual) > tol * std::max(1.0, norm(v))) {
        return infeasible_state(s.n);
    }

    QuadState cur = s;
    for (std::size_t i = 0; i < r && !cur.infeasible; ++i) {
        const Vector w = d.v.col(i);
        cur = condition_row(cur, w, dot(w, x0), tol);
    }
    return cur;
}

bool states_equal(const QuadState& s, const QuadState& t, double tol)
{
    if (s.n != t.n) {
        return false;
    }
    if (s.infeasible || t.infeasible) {
        return s.infeasible == t.infeasible;
    }
    if (s.fibre.rank() != t.fibre.rank()) {
        return false;
    }
    const Matrix ps = s.fibre.projector();
    const Matrix pt = t.fibre.projector();
    return close(ps.data(), pt.data(), tol) && close(s.mu, t.mu, tol) && close(s.sigma.data(), t.sigma.data(), tol) &&
           close(s.score, t.score, tol);
}

} // namespace gqa
