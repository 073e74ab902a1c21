#pragma once

// Quadratic relations m -> n, stored as their names: states on m + n wires
// with the inputs first.

#include "gqa/diagram.hpp"
#include "gqa/gauss.hpp"
#include "gqa/quadstate.hpp"

namespace gqa {

struct QuadRelMorphism {
    std::size_t m = 0;
    std::size_t n = 0;
    QuadState name;
};

/// Affine relation {(x, y)} = offset + directions, or the empty relation.
struct AffRelMorphism {
    std::size_t m = 0;
    std::size_t n = 0;
    Subspace directions;
    Vector offset; ///< orthogonal to directions
    bool empty = false;
};

/// Reads a state on m + n wires as a morphism m -> n.
QuadRelMorphism unname(const QuadState& name, std::size_t m);
inline const QuadState& name_of(const QuadRelMorphism& f) { return f.name; }

/// Value at (x, y).
double eval_rel(const QuadRelMorphism& f, std::span<const double> x, std::span<const double> y);

QuadRelMorphism identity_rel(std::size_t n);
QuadRelMorphism generator_rel(const Generator& g);
/// inf over the shared wires of F(x, y) + G(y, z).
QuadRelMorphism compose_rel(const QuadRelMorphism& f, const QuadRelMorphism& g);
QuadRelMorphism tensor_rel(const QuadRelMorphism& f, const QuadRelMorphism& g);
/// Causal subdiagrams are evaluated as Gaussian maps and lifted through L.
QuadRelMorphism interpret(const Diagram& d);
/// Reference: one relational composition per generator.
QuadRelMorphism interpret_generators(const Diagram& d);

bool relations_equal(const QuadRelMorphism& f, const QuadRelMorphism& g, double tol = 1e-9);

/// Negative conditional log-density 1/2 <y - Ax - b, Sigma^+ (y - Ax - b)> + [support].
QuadRelMorphism functor_L(const GaussMap& f);
/// Support {(x, y) : y in Ax + b + im Sigma}.
AffRelMorphism functor_S(const GaussMap& f);
/// {(x, y) : F(x, y) < inf}
AffRelMorphism effective_domain(const QuadRelMorphism& f);
bool affrel_equal(const AffRelMorphism& a, const AffRelMorphism& b, double tol = 1e-9);

} // namespace gqa
