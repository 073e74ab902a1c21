#pragma once

// A first-order Gaussian probabilistic language:
//   e ::= x | e + e | a * e | b | (e, e) | () | let x = e in e | e ; e
//       | pi0 e | pi1 e | normal() | e =:= e

#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gqa/diagram.hpp"
#include "gqa/quadstate.hpp"

namespace gqa {

enum class TermKind { Var, Add, Scale, Const, Pair, Unit, Let, Seq, Proj, Normal, Observe };

struct GplTerm;
using GplTermPtr = std::shared_ptr<const GplTerm>;

struct GplTerm {
    TermKind kind = TermKind::Unit;
    std::string name;  ///< Var, Let
    double value = 0;  ///< Scale factor, Const value
    int index = 0;     ///< Proj
    GplTermPtr lhs;    ///< first operand; the bound term for Let
    GplTermPtr rhs;    ///< second operand; the body for Let
    std::size_t line = 0;
    std::size_t column = 0;
};

struct GplType;
using GplTypePtr = std::shared_ptr<const GplType>;

struct GplType {
    enum class Kind { R, I, Pair } kind = Kind::I;
    GplTypePtr first;
    GplTypePtr second;

    static GplTypePtr real();
    static GplTypePtr unit();
    static GplTypePtr pair(GplTypePtr a, GplTypePtr b);

    /// Number of wires: R = 1, I = 0, pairs add.
    std::size_t dim() const;
    std::string to_string() const;
};

bool same_type(const GplType& a, const GplType& b);

using GplContext = std::vector<std::pair<std::string, GplTypePtr>>;

/// Throws SyntaxError with line and column.
GplTermPtr parse_gpl(std::string_view source);
/// Throws TypeError naming the rule and the subterm.
GplTypePtr typecheck(const GplContext& ctx, const GplTerm& t);
/// Diagram dim(ctx) -> dim(type).
Diagram compile(const GplContext& ctx, const GplTerm& t);

struct InferenceResult {
    GplTypePtr type;
    QuadState posterior; ///< score folded out (always 0)
    double score = 0.0;
};

/// Throws InfeasibleObservation on contradictory observations.
InferenceResult infer(const GplTerm& program);
InferenceResult infer(std::string_view source);

std::string print_term(const GplTerm& t);

} // namespace gqa
