#pragma once

// Gaussian stochastic maps x |-> A x + b + N(0, Sigma) and the causal
// interpretation of diagrams into them.

#include <cstdint>

#include "gqa/diagram.hpp"
#include "gqa/linalg.hpp"
#include "gqa/random.hpp"

namespace gqa {

struct GaussMap {
    Matrix a;     ///< n x m
    Vector b;     ///< n
    Matrix sigma; ///< n x n, symmetric PSD

    std::size_t dom() const noexcept { return a.cols(); }
    std::size_t cod() const noexcept { return a.rows(); }

    static GaussMap identity(std::size_t n);
    /// Distribution N(mu, sigma) as a map 0 -> n.
    static GaussMap state(Vector mu, Matrix sigma);
};

/// f then g: (CA, Cb + d, C Sigma C^T + Xi).
GaussMap compose_gauss(const GaussMap& f, const GaussMap& g);
GaussMap tensor_gauss(const GaussMap& f, const GaussMap& g);

/// Throws NotCausal on merge, any, coadd or cozero.
GaussMap interpret_causal(const Diagram& d);

/// One draw of f(x) from Rng(seed).
Vector sample(const GaussMap& f, std::span<const double> x, std::uint64_t seed);
/// One draw using a precomputed factor L of f.sigma.
Vector sample(const GaussMap& f, const Matrix& l, std::span<const double> x, Rng& rng);

/// (A * (normal^n ; L) * mu) ; (add_bus * id) ; add_bus, with Sigma = L L^T.
Diagram gauss_normal_form(const GaussMap& f, double tol = kRankTolerance);

/// Entrywise comparison with |a - b| <= tol * max(1, |a|, |b|).
bool gauss_equal(const GaussMap& f, const GaussMap& g, double tol = 1e-9);

} // namespace gqa
