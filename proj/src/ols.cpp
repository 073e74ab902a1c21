#include "gqa/ols.hpp"

#include <cstdlib>
#include <sstream>
#include <string>

#include "gqa/error.hpp"
#include "gqa/quadrel.hpp"

namespace gqa {

Diagram build_ols_diagram(const Matrix& a)
{
    const std::size_t n = a.rows();
    const Diagram residual = seq(par(matrix_diagram(a * -1.0), id(n)), add_bus(n));
    return seq(residual, repeat(conormal(), n));
}

OlsSolution solve_ols(const LeastSquaresProblem& p)
{
    const std::size_t n = p.a.rows();
    const std::size_t m = p.a.cols();
    if (p.y.size() != n) {
        throw DimensionMismatch("solve_ols: " + std::to_string(n) + " rows but " + std::to_string(p.y.size()) +
                                " observations");
    }
    OlsSolution s;
    s.x_hat = pseudoinverse(p.a) * p.y;
    const Vector r = sub(p.y, p.a * s.x_hat);
    s.residual_cost = 0.5 * dot(r, r);
    s.injective = rank(p.a) == m;

    // Forget the x wires of the name and read the value at y.
    const QuadRelMorphism rel = interpret(build_ols_diagram(p.a));
    Matrix drop(n, m + n);
    for (std::size_t i = 0; i < n; ++i) {
        drop(i, m + i) = 1.0;
    }
    const QuadState marginal = pushforward(rel.name, drop, Vector(n, 0.0));
    s.diagram_residual = eval_state(marginal, p.y);
    return s;
}

namespace {

bool parse_row(const std::string& line, std::vector<double>& out)
{
    out.clear();
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        const auto b = cell.find_first_not_of(" \t\r");
        const auto e = cell.find_last_not_of(" \t\r");
        if (b == std::string::npos) {
            return false;
        }
        const std::string token = cell.substr(b, e - b + 1);
        char* end = nullptr;
        const double v = std::strtod(token.c_str(), &end);
        if (end != token.c_str() + token.size()) {
            return false;
        }
        out.push_back(v);
    }
    return !out.empty();
}

} // namespace

LeastSquaresProblem read_ols_csv(std::istream& in)
{
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    std::vector<double> cells;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        if (!parse_row(line, cells)) {
            if (rows.empty() && lineno == 1) {
                continue; // header
            }
            throw SyntaxError("malformed CSV row", lineno, 1);
        }
        if (!rows.empty() && cells.size() != rows.front().size()) {
            throw SyntaxError("expected " + std::to_string(rows.front().size()) + " columns, found " +
                                  std::to_string(cells.size()),
                              lineno, 1);
        }
        rows.push_back(cells);
    }
    if (rows.empty()) {
        throw SyntaxError("no data rows", lineno + 1, 1);
    }
    const std::size_t m = rows.front().size() - 1;
    LeastSquaresProblem p{Matrix(rows.size(), m), Vector(rows.size())};
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            p.a(i, j) = rows[i][j];
        }
        p.y[i] = rows[i][m];
    }
    return p;
}

} // namespace gqa
