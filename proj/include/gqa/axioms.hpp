#pragma once

// Soundness checks: each axiom is a pair of diagrams that must denote the
// same quadratic relation.

#include <string>
#include <vector>

#include "gqa/diagram.hpp"

namespace gqa {

struct AxiomCase {
    std::string name; ///< e.g. "k-dup[k=-2]"
    Diagram lhs;
    Diagram rhs;
};

struct AxiomResult {
    std::string name;
    bool passed = false;
    std::string detail; ///< empty when passed
};

/// Scalars sampled by the suite.
inline const std::vector<double> kAxiomScalars = {-2.0, -1.0, 0.5, 1.0, 3.0};
/// Rotation angles for RI.
std::vector<double> axiom_angles();

std::vector<AxiomCase> axiom_cases();
std::vector<AxiomResult> check_axioms(double tol = 1e-9);

} // namespace gqa
