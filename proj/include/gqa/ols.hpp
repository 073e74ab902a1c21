#pragma once

// Ordinary least squares through the diagram engine.

#include <istream>

#include "gqa/diagram.hpp"
#include "gqa/linalg.hpp"

namespace gqa {

struct LeastSquaresProblem {
    Matrix a; ///< n x m design matrix
    Vector y; ///< n observations
};

struct OlsSolution {
    Vector x_hat;
    double residual_cost = 0.0;    ///< 1/2 |y - A x_hat|^2
    double diagram_residual = 0.0; ///< inf over x of the interpreted diagram at y
    bool injective = false;        ///< A has full column rank
};

/// Effect m + n -> 0 with value 1/2 |y - A x|^2 at (x, y).
Diagram build_ols_diagram(const Matrix& a);
OlsSolution solve_ols(const LeastSquaresProblem& p);

/// Rows "a_1,...,a_m,y"; a first row that is not numeric is taken as a header.
LeastSquaresProblem read_ols_csv(std::istream& in);

} // namespace gqa
