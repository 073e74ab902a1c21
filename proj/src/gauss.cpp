#include "gqa/gauss.hpp"

#include <algorithm>
#include <cmath>

#include "gqa/error.hpp"

namespace gqa {

GaussMap GaussMap::identity(std::size_t n)
{
    return {Matrix::identity(n), Vector(n, 0.0), Matrix(n, n)};
}

GaussMap GaussMap::state(Vector mu, Matrix sigma)
{
    const std::size_t n = mu.size();
    if (sigma.rows() != n || sigma.cols() != n) {
        throw DimensionMismatch("GaussMap::state: covariance must be " + std::to_string(n) + "x" + std::to_string(n));
    }
    return {Matrix(n, 0), std::move(mu), symmetrized(sigma)};
}

GaussMap compose_gauss(const GaussMap& f, const GaussMap& g)
{
    if (f.cod() != g.dom()) {
        throw DimensionMismatch("compose_gauss: codomain " + std::to_string(f.cod()) + " vs domain " +
                                std::to_string(g.dom()));
    }
    GaussMap r;
    r.a = g.a * f.a;
    r.b = add(g.a * f.b, g.b);
    r.sigma = symmetrized(g.a * f.sigma * g.a.transpose() + g.sigma);
    return r;
}

GaussMap tensor_gauss(const GaussMap& f, const GaussMap& g)
{
    return {block_diag(f.a, g.a), concat(f.b, g.b), block_diag(f.sigma, g.sigma)};
}

namespace {

GaussMap generator_map(const Generator& g)
{
    switch (g.kind) {
    case GeneratorKind::Copy: return {Matrix{{1.0}, {1.0}}, Vector(2, 0.0), Matrix(2, 2)};
    case GeneratorKind::Discard: return {Matrix(0, 1), Vector{}, Matrix{}};
    case GeneratorKind::Add: return {Matrix{{1.0, 1.0}}, Vector{0.0}, Matrix(1, 1)};
    case GeneratorKind::Zero: return {Matrix(1, 0), Vector{0.0}, Matrix(1, 1)};
    case GeneratorKind::Scalar: return {Matrix{{g.k}}, Vector{0.0}, Matrix(1, 1)};
    case GeneratorKind::One: return {Matrix(1, 0), Vector{1.0}, Matrix(1, 1)};
    case GeneratorKind::Normal: return {Matrix(1, 0), Vector{0.0}, Matrix{{1.0}}};
    default: throw NotCausal(g.name());
    }
}

GaussMap swap_map()
{
    return {Matrix{{0.0, 1.0}, {1.0, 0.0}}, Vector(2, 0.0), Matrix(2, 2)};
}

} // namespace

GaussMap interpret_causal(const Diagram& d)
{
    switch (d.kind()) {
    case NodeKind::Gen: return generator_map(d.generator());
    case NodeKind::Id: return GaussMap::identity(d.id_width());
    case NodeKind::Swap: return swap_map();
    case NodeKind::Empty: return GaussMap::identity(0);
    case NodeKind::Seq: {
        GaussMap f = interpret_causal(d.left());
        GaussMap g = interpret_causal(d.right());
        return compose_gauss(f, g);
    }
    case NodeKind::Par: {
        GaussMap f = interpret_causal(d.left());
        GaussMap g = interpret_causal(d.right());
        return tensor_gauss(f, g);
    }
    }
    return GaussMap::identity(0);
}

Vector sample(const GaussMap& f, const Matrix& l, std::span<const double> x, Rng& rng)
{
    if (x.size() != f.dom()) {
        throw DimensionMismatch("sample: input has length " + std::to_string(x.size()) + ", expected " +
                                std::to_string(f.dom()));
    }
    Vector z(l.cols());
    for (double& v : z) {
        v = rng.normal();
    }
    Vector y = add(f.a * x, f.b);
    const Vector noise = l * z;
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] += noise[i];
    }
    return y;
}

Vector sample(const GaussMap& f, std::span<const double> x, std::uint64_t seed)
{
    Rng rng(seed);
    return sample(f, psd_factor(f.sigma), x, rng);
}

Diagram gauss_normal_form(const GaussMap& f, double tol)
{
    const std::size_t n = f.cod();
    const Matrix l = psd_factor(f.sigma, tol);
    const Diagram noise = seq(repeat(gen(GeneratorKind::Normal), n), matrix_diagram(l));
    const Diagram summands = par(par(matrix_diagram(f.a), noise), const_diagram(f.b));
    return seq(seq(summands, par(add_bus(n), id(n))), add_bus(n));
}

namespace {

bool close(double a, double b, double tol)
{
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

bool close(const Matrix& a, const Matrix& b, double tol)
{
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        return false;
    }
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        if (!close(a.data()[i], b.data()[i], tol)) {
            return false;
        }
    }
    return true;
}

} // namespace

bool gauss_equal(const GaussMap& f, const GaussMap& g, double tol)
{
    if (f.b.size() != g.b.size()) {
        return false;
    }
    for (std::size_t i = 0; i < f.b.size(); ++i) {
        if (!close(f.b[i], g.b[i], tol)) {
            return false;
        }
    }
    return close(f.a, g.a, tol) && close(f.sigma, g.sigma, tol);
}

} // namespace gqa
