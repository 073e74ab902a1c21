#include "gqa/serialize.hpp"

#include <cmath>

#include "gqa/error.hpp"

namespace gqa {

using nlohmann::json;

json matrix_to_json(const Matrix& m)
{
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        rows.push_back(m.row(i));
    }
    return rows;
}

Matrix matrix_from_json(const json& j, std::size_t rows, std::size_t cols)
{
    if (!j.is_array() || j.size() != rows) {
        throw Error("expected a matrix with " + std::to_string(rows) + " rows");
    }
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols) {
            throw Error("expected " + std::to_string(cols) + " entries in matrix row " + std::to_string(i));
        }
        for (std::size_t k = 0; k < cols; ++k) {
            m(i, k) = j[i][k].get<double>();
        }
    }
    return m;
}

json state_to_json(const QuadState& s)
{
    json j;
    j["n"] = s.n;
    j["D_basis"] = matrix_to_json(s.fibre.basis());
    j["mu"] = s.mu;
    j["Sigma"] = matrix_to_json(s.sigma);
    j["score"] = s.infeasible ? json(nullptr) : json(s.score);
    j["infeasible"] = s.infeasible;
    return j;
}

QuadState state_from_json(const json& j)
{
    try {
        const std::size_t n = j.at("n").get<std::size_t>();
        if (j.value("infeasible", false) || j.at("score").is_null()) {
            return infeasible_state(n);
        }
        const json& basis = j.at("D_basis");
        const std::size_t r = basis.empty() ? 0 : basis[0].size();
        const Matrix d = matrix_from_json(basis, n, r);
        const Vector mu = j.at("mu").get<Vector>();
        const Matrix sigma = matrix_from_json(j.at("Sigma"), n, n);
        const Subspace fibre = r == 0 ? Subspace(n) : Subspace::from_orthonormal(d);
        return make_state(fibre, mu, sigma, j.at("score").get<double>());
    } catch (const json::exception& e) {
        throw Error(std::string("malformed state document: ") + e.what());
    }
}

json relation_to_json(const QuadRelMorphism& f)
{
    return {{"m", f.m}, {"n", f.n}, {"name", state_to_json(f.name)}};
}

QuadRelMorphism relation_from_json(const json& j)
{
    try {
        return unname(state_from_json(j.at("name")), j.at("m").get<std::size_t>());
    } catch (const json::exception& e) {
        throw Error(std::string("malformed relation document: ") + e.what());
    }
}

json affrel_to_json(const AffRelMorphism& a)
{
    return {{"m", a.m},
            {"n", a.n},
            {"basis", matrix_to_json(a.directions.basis())},
            {"offset", a.offset},
            {"empty", a.empty}};
}

json gauss_to_json(const GaussMap& f)
{
    return {{"m", f.dom()}, {"n", f.cod()}, {"A", matrix_to_json(f.a)}, {"b", f.b}, {"Sigma", matrix_to_json(f.sigma)}};
}

} // namespace gqa
