#pragma once

// JSON documents for states and relations.
//   QuadState:       {n, D_basis, mu, Sigma, score, infeasible}
//   QuadRelMorphism: {m, n, name}
//   AffRelMorphism:  {m, n, basis, offset, empty}
// Matrices are arrays of rows; an infinite score is written as null.

#include <json.hpp>

#include "gqa/gauss.hpp"
#include "gqa/quadrel.hpp"
#include "gqa/quadstate.hpp"

namespace gqa {

nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j, std::size_t rows, std::size_t cols);

nlohmann::json state_to_json(const QuadState& s);
/// Canonicalizes the result; throws Error on malformed documents.
QuadState state_from_json(const nlohmann::json& j);

nlohmann::json relation_to_json(const QuadRelMorphism& f);
QuadRelMorphism relation_from_json(const nlohmann::json& j);

nlohmann::json affrel_to_json(const AffRelMorphism& a);
nlohmann::json gauss_to_json(const GaussMap& f);

} // namespace gqa
