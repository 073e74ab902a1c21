#pragma once

// Random instances shared by the unit and acceptance tests.

#include <cmath>
#include <vector>

#include "gqa/diagram.hpp"
#include "gqa/gauss.hpp"
#include "gqa/linalg.hpp"
#include "gqa/quadstate.hpp"
#include "gqa/random.hpp"

namespace gqa::testing {

inline Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, double scale = 1.0)
{
    Matrix m(rows, cols);
    for (double& x : m.data()) {
        x = scale * rng.normal();
    }
    return m;
}

inline Vector random_vector(Rng& rng, std::size_t n, double lo = -2.0, double hi = 2.0)
{
    Vector v(n);
    for (double& x : v) {
        x = rng.uniform(lo, hi);
    }
    return v;
}

inline Matrix random_orthogonal(Rng& rng, std::size_t n)
{
    return givens_qr(random_matrix(rng, n, n)).q;
}

/// Random PSD matrix of the given rank.
inline Matrix random_psd(Rng& rng, std::size_t n, std::size_t r)
{
    const Matrix g = random_matrix(rng, n, r);
    return symmetrized(g * g.transpose());
}

/// Random subspace of R^n with the given rank.
inline Subspace random_subspace(Rng& rng, std::size_t n, std::size_t r)
{
    if (r == 0) {
        return Subspace(n);
    }
    return image(random_matrix(rng, n, r));
}

/// State that is finite everywhere: Sigma has full rank on the complement
/// of a random fibre, with eigenvalues in [0.5, 3].
inline QuadState random_finite_state(Rng& rng, std::size_t n)
{
    const std::size_t r = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(n)));
    const Subspace d = random_subspace(rng, n, r);
    const Subspace comp = orth_complement(d);
    Matrix sigma(n, n);
    for (std::size_t k = 0; k < comp.rank(); ++k) {
        const Vector v = comp.basis().col(k);
        const double lambda = rng.uniform(0.5, 3.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                sigma(i, j) += lambda * v[i] * v[j];
            }
        }
    }
    return make_state(d, random_vector(rng, n), sigma, rng.uniform(0.0, 2.0));
}

/// General state: random fibre, rank-deficient covariance, possibly point-like.
inline QuadState random_state(Rng& rng, std::size_t n)
{
    const std::size_t r = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(n)));
    const std::size_t q = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(n)));
    return make_state(random_subspace(rng, n, r), random_vector(rng, n), random_psd(rng, n, q),
                      rng.uniform(0.0, 2.0));
}

inline GaussMap random_gauss(Rng& rng, std::size_t m, std::size_t n)
{
    const std::size_t r = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(n)));
    return {random_matrix(rng, n, m), random_vector(rng, n), random_psd(rng, n, r)};
}

inline double sample_scalar(Rng& rng)
{
    static const double pool[] = {-2.0, -1.0, -0.5, 0.5, 1.0, 1.5, 3.0};
    return pool[rng.uniform_int(0, 6)];
}

/// One layer of causal generators on `width` wires, output width <= max_width.
inline Diagram random_causal_layer(Rng& rng, std::size_t width, std::size_t max_width)
{
    Diagram layer;
    std::size_t out = 0;
    std::size_t i = 0;
    while (i < width) {
        const std::size_t remaining = width - i - 1;
        Diagram piece;
        std::size_t consumed = 1;
        std::size_t produced = 1;
        switch (rng.uniform_int(0, 6)) {
        case 0: piece = id(1); break;
        case 1: piece = scalar(sample_scalar(rng)); break;
        case 2:
            if (out + remaining + 2 <= max_width) {
                piece = gen(GeneratorKind::Copy);
                produced = 2;
            } else {
                piece = id(1);
            }
            break;
        case 3:
            piece = gen(GeneratorKind::Discard);
            produced = 0;
            break;
        case 4:
            if (i + 1 < width) {
                piece = gen(GeneratorKind::Add);
                consumed = 2;
            } else {
                piece = scalar(sample_scalar(rng));
            }
            break;
        default:
            if (i + 1 < width) {
                piece = swap();
                consumed = 2;
                produced = 2;
            } else {
                piece = id(1);
            }
            break;
        }
        layer = i == 0 ? piece : par(layer, piece);
        i += consumed;
        out += produced;
    }
    // Occasionally add a source.
    if (out < max_width && (width == 0 || rng.uniform_int(0, 2) == 0)) {
        static const GeneratorKind sources[] = {GeneratorKind::Normal, GeneratorKind::One, GeneratorKind::Zero};
        const Diagram src = gen(sources[rng.uniform_int(0, 2)]);
        layer = width == 0 ? src : par(layer, src);
    }
    return layer;
}

/// Random causal diagram of `depth` layers, all widths <= max_width.
inline Diagram random_causal_diagram(Rng& rng, std::size_t depth, std::size_t max_width)
{
    std::size_t width = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(max_width)));
    Diagram d = id(width);
    for (std::size_t k = 0; k < depth; ++k) {
        const Diagram layer = random_causal_layer(rng, width, max_width);
        d = seq(d, layer);
        width = layer.cod();
    }
    return d;
}

} // namespace gqa::testing
