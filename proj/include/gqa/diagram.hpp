#pragma once

// String diagrams over the GQA generators, kept as well-typed term trees.

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "gqa/linalg.hpp"

namespace gqa {

enum class GeneratorKind {
    // causal row
    Copy,    // 1 -> 2
    Discard, // 1 -> 0
    Add,     // 2 -> 1
    Zero,    // 0 -> 1
    Scalar,  // 1 -> 1, carries k
    One,     // 0 -> 1
    Normal,  // 0 -> 1
    // mirrored row
    Merge,   // 2 -> 1
    Any,     // 0 -> 1
    Coadd,   // 1 -> 2
    Cozero,  // 1 -> 0
};

struct Generator {
    GeneratorKind kind = GeneratorKind::Copy;
    double k = 0.0; ///< only meaningful for Scalar

    std::size_t dom() const noexcept;
    std::size_t cod() const noexcept;
    bool causal() const noexcept;
    std::string name() const;

    friend bool operator==(const Generator&, const Generator&) = default;
};

enum class NodeKind { Gen, Id, Swap, Empty, Seq, Par };

class Diagram {
public:
    /// The empty diagram 0 -> 0.
    Diagram();

    NodeKind kind() const noexcept;
    std::size_t dom() const noexcept;
    std::size_t cod() const noexcept;

    const Generator& generator() const; ///< Gen nodes only
    std::size_t id_width() const;       ///< Id nodes only
    const Diagram& left() const;        ///< Seq/Par nodes only
    const Diagram& right() const;       ///< Seq/Par nodes only

    /// Number of generator occurrences.
    std::size_t size() const;

    friend bool operator==(const Diagram& a, const Diagram& b);

private:
    struct Node;
    explicit Diagram(std::shared_ptr<const Node> node);
    std::shared_ptr<const Node> node_;

    friend Diagram gen(Generator g);
    friend Diagram id(std::size_t n);
    friend Diagram swap();
    friend Diagram empty();
    friend Diagram seq(const Diagram& f, const Diagram& g);
    friend Diagram par(const Diagram& f, const Diagram& g);
};

Diagram gen(Generator g);
Diagram gen(GeneratorKind kind);
Diagram scalar(double k);
Diagram id(std::size_t n);
Diagram swap();
Diagram empty();
/// f then g; throws ArityMismatch unless cod(f) == dom(g).
Diagram seq(const Diagram& f, const Diagram& g);
Diagram par(const Diagram& f, const Diagram& g);

/// Left fold of seq over a list.
Diagram seq_all(std::span<const Diagram> parts);
/// n parallel copies of d (empty for n == 0).
Diagram repeat(const Diagram& d, std::size_t n);

// ---------------------------------------------------------------------------
// Derived diagrams

/// Wire permutation: input wire i goes to output wire perm[i]. Built from
/// adjacent swaps.
Diagram permutation(std::span<const std::size_t> perm);
/// (a + b) -> (b + a)
Diagram swap_bus(std::size_t a, std::size_t b);
/// n -> 2n, duplicating the whole bus: x |-> (x, x).
Diagram copy_bus(std::size_t n);
/// 2n -> n, pointwise sum of two buses.
Diagram add_bus(std::size_t n);
Diagram discard_bus(std::size_t n);

/// [x = k y]: the mirror image of scalar(k).
Diagram coscalar(double k);
/// [x = 1] as an effect 1 -> 0.
Diagram coone();
/// 1/2 x^2 as an effect 1 -> 0.
Diagram conormal();

/// m -> n diagram with relational semantics [y = A x].
Diagram matrix_diagram(const Matrix& a);
/// 0 -> n diagram with semantics [x = c].
Diagram const_diagram(std::span<const double> c);
/// 0 -> n diagram with semantics [x in S].
Diagram subspace_diagram(const Subspace& s);

// ---------------------------------------------------------------------------
// Text and graph formats

/// Grammar: d ::= copy | discard | add | zero | one | normal | merge | any |
/// coadd | cozero | scalar(r) | id(n) | swap | empty | (d ; d) | (d * d),
/// with sugar coscalar(r), coone, cofoot, conormal. ';' binds looser than
/// '*'; both associate to the left. '#' starts a comment.
Diagram parse_diagram(std::string_view text);
/// Fully parenthesized text that parses back to the same tree.
std::string print_diagram(const Diagram& d);

/// Graphviz digraph: generator occurrences are nodes g0, g1, ...; boundary
/// wires end in point nodes in0.. / out0..; every wire is one edge.
std::string export_dot(const Diagram& d);

} // namespace gqa
