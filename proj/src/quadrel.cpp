#include "gqa/quadrel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "gqa/error.hpp"

namespace gqa {

QuadRelMorphism unname(const QuadState& name, std::size_t m)
{
    if (m > name.n) {
        throw DimensionMismatch("unname: " + std::to_string(m) + " inputs for a state on " + std::to_string(name.n) +
                                " wires");
    }
    return {m, name.n - m, name};
}

double eval_rel(const QuadRelMorphism& f, std::span<const double> x, std::span<const double> y)
{
    if (x.size() != f.m || y.size() != f.n) {
        throw DimensionMismatch("eval_rel: expected " + std::to_string(f.m) + " inputs and " + std::to_string(f.n) +
                                " outputs");
    }
    return eval_state(f.name, concat(x, y));
}

namespace {

// Relation whose name has fibre spanned by the columns of `span` and nothing else.
QuadRelMorphism linear_rel(std::size_t m, std::size_t n, const Matrix& span)
{
    const std::size_t w = m + n;
    return {m, n, make_state(image(span), Vector(w, 0.0), Matrix(w, w))};
}

} // namespace

QuadRelMorphism identity_rel(std::size_t n)
{
    Matrix span(2 * n, n);
    for (std::size_t i = 0; i < n; ++i) {
        span(i, i) = 1.0;
        span(n + i, i) = 1.0;
    }
    return linear_rel(n, n, span);
}

QuadRelMorphism generator_rel(const Generator& g)
{
    switch (g.kind) {
    case GeneratorKind::Copy:
    case GeneratorKind::Merge: {
        const std::size_t m = g.dom();
        return linear_rel(m, 3 - m, Matrix{{1.0}, {1.0}, {1.0}});
    }
    case GeneratorKind::Discard: return linear_rel(1, 0, Matrix{{1.0}});
    case GeneratorKind::Any: return linear_rel(0, 1, Matrix{{1.0}});
    case GeneratorKind::Add: return linear_rel(2, 1, Matrix{{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}});
    case GeneratorKind::Coadd: return linear_rel(1, 2, Matrix{{1.0, 1.0}, {1.0, 0.0}, {0.0, 1.0}});
    case GeneratorKind::Zero: return {0, 1, point_state(Vector{0.0})};
    case GeneratorKind::Cozero: return {1, 0, point_state(Vector{0.0})};
    case GeneratorKind::Scalar: return linear_rel(1, 1, Matrix{{1.0}, {g.k}});
    case GeneratorKind::One: return {0, 1, point_state(Vector{1.0})};
    case GeneratorKind::Normal: return {0, 1, gaussian_state(Vector{0.0}, Matrix{{1.0}})};
    }
    throw Error("generator_rel: unknown generator");
}

QuadRelMorphism compose_rel(const QuadRelMorphism& f, const QuadRelMorphism& g)
{
    if (f.n != g.m) {
        throw ArityMismatch("compose_rel: " + std::to_string(f.m) + "->" + std::to_string(f.n) + " then " +
                            std::to_string(g.m) + "->" + std::to_string(g.n));
    }
    const std::size_t m = f.m;
    const std::size_t k = f.n;
    const std::size_t p = g.n;
    const std::size_t w = m + 2 * k + p;

    // Wires (x, y, y', z): impose y = y', then forget both.
    const QuadState joint = tensor_states(f.name, g.name);
    Matrix b(k, w);
    for (std::size_t i = 0; i < k; ++i) {
        b(i, m + i) = 1.0;
        b(i, m + k + i) = -1.0;
    }
    const QuadState glued = k == 0 ? joint : condition_zero(joint, b, Vector(k, 0.0));

    Matrix keep(m + p, w);
    for (std::size_t i = 0; i < m; ++i) {
        keep(i, i) = 1.0;
    }
    for (std::size_t i = 0; i < p; ++i) {
        keep(m + i, m + 2 * k + i) = 1.0;
    }
    return {m, p, pushforward(glued, keep, Vector(m + p, 0.0))};
}

QuadRelMorphism tensor_rel(const QuadRelMorphism& f, const QuadRelMorphism& g)
{
    // (x1, y1, x2, y2) -> (x1, x2, y1, y2)
    const QuadState joint = tensor_states(f.name, g.name);
    std::vector<std::size_t> perm(joint.n);
    std::size_t pos = 0;
    for (std::size_t i = 0; i < f.m; ++i) {
        perm[pos++] = i;
    }
    for (std::size_t i = 0; i < f.n; ++i) {
        perm[pos++] = f.m + g.m + i;
    }
    for (std::size_t i = 0; i < g.m; ++i) {
        perm[pos++] = f.m + i;
    }
    for (std::size_t i = 0; i < g.n; ++i) {
        perm[pos++] = f.m + g.m + f.n + i;
    }
    bool trivial = true;
    for (std::size_t i = 0; i < perm.size(); ++i) {
        trivial = trivial && perm[i] == i;
    }
    return {f.m + g.m, f.n + g.n, trivial ? joint : permute_state(joint, perm)};
}

QuadRelMorphism interpret_generators(const Diagram& d)
{
    switch (d.kind()) {
    case NodeKind::Gen: return generator_rel(d.generator());
    case NodeKind::Id: return identity_rel(d.id_width());
    case NodeKind::Swap: return linear_rel(2, 2, Matrix{{1.0, 0.0}, {0.0, 1.0}, {0.0, 1.0}, {1.0, 0.0}});
    case NodeKind::Empty: return {0, 0, scalar_state(0.0)};
    case NodeKind::Seq:
        // Identities compose trivially.
        if (d.left().kind() == NodeKind::Id) {
            return interpret_generators(d.right());
        }
        if (d.right().kind() == NodeKind::Id) {
            return interpret_generators(d.left());
        }
        return compose_rel(interpret_generators(d.left()), interpret_generators(d.right()));
    case NodeKind::Par:
        if (d.left().kind() == NodeKind::Empty) {
            return interpret_generators(d.right());
        }
        if (d.right().kind() == NodeKind::Empty) {
            return interpret_generators(d.left());
        }
        return tensor_rel(interpret_generators(d.left()), interpret_generators(d.right()));
    }
    throw Error("interpret: unknown node");
}

namespace {

// Causal subterms stay Gaussian maps until they meet a co-generator.
struct Partial {
    std::optional<GaussMap> causal;
    QuadRelMorphism rel;
};

QuadRelMorphism lift(const Partial& p)
{
    return p.causal ? functor_L(*p.causal) : p.rel;
}

Partial interpret_partial(const Diagram& d)
{
    switch (d.kind()) {
    case NodeKind::Gen:
        if (d.generator().causal()) {
            return {interpret_causal(d), {}};
        }
        return {std::nullopt, generator_rel(d.generator())};
    case NodeKind::Id:
    case NodeKind::Swap:
    case NodeKind::Empty: return {interpret_causal(d), {}};
    case NodeKind::Seq:
    case NodeKind::Par: {
        const Partial l = interpret_partial(d.left());
        const Partial r = interpret_partial(d.right());
        const bool sequential = d.kind() == NodeKind::Seq;
        if (l.causal && r.causal) {
            return {sequential ? compose_gauss(*l.causal, *r.causal) : tensor_gauss(*l.causal, *r.causal), {}};
        }
        return {std::nullopt, sequential ? compose_rel(lift(l), lift(r)) : tensor_rel(lift(l), lift(r))};
    }
    }
    throw Error("interpret: unknown node");
}

} // namespace

QuadRelMorphism interpret(const Diagram& d)
{
    return lift(interpret_partial(d));
}

bool relations_equal(const QuadRelMorphism& f, const QuadRelMorphism& g, double tol)
{
    return f.m == g.m && f.n == g.n && states_equal(f.name, g.name, tol);
}

QuadRelMorphism functor_L(const GaussMap& f)
{
    const std::size_t m = f.dom();
    const std::size_t n = f.cod();
    const QuadState free_inputs = make_state(Subspace::full(m), Vector(m, 0.0), Matrix(m, m));
    const QuadState joint = tensor_states(free_inputs, gaussian_state(f.b, f.sigma));
    // (u, w) |-> (u, A u + w)
    Matrix t = Matrix::identity(m + n);
    t.set_block(m, 0, f.a);
    return {m, n, pushforward(joint, t, Vector(m + n, 0.0))};
}

namespace {

AffRelMorphism affine(std::size_t m, std::size_t n, const Subspace& dirs, std::span<const double> point)
{
    AffRelMorphism r;
    r.m = m;
    r.n = n;
    r.directions = dirs;
    r.offset = sub(point, project(dirs, point));
    for (double& x : r.offset) {
        if (std::abs(x) <= 1e-15) {
            x = 0.0;
        }
    }
    return r;
}

} // namespace

AffRelMorphism functor_S(const GaussMap& f)
{
    const std::size_t m = f.dom();
    const std::size_t n = f.cod();
    Matrix graph(m + n, m);
    graph.set_block(0, 0, Matrix::identity(m));
    graph.set_block(m, 0, f.a);
    Matrix noise(m + n, n);
    noise.set_block(m, 0, f.sigma);
    const Subspace dirs = image(hstack(graph, noise), kRankTolerance, 1.0);
    return affine(m, n, dirs, concat(Vector(m, 0.0), f.b));
}

AffRelMorphism effective_domain(const QuadRelMorphism& f)
{
    if (f.name.infeasible) {
        AffRelMorphism r;
        r.m = f.m;
        r.n = f.n;
        r.directions = Subspace(f.m + f.n);
        r.offset = Vector(f.m + f.n, 0.0);
        r.empty = true;
        return r;
    }
    const Subspace dirs = subspace_sum(f.name.fibre, image(f.name.sigma, kRankTolerance, 1.0));
    return affine(f.m, f.n, dirs, f.name.mu);
}

bool affrel_equal(const AffRelMorphism& a, const AffRelMorphism& b, double tol)
{
    if (a.m != b.m || a.n != b.n || a.empty != b.empty) {
        return false;
    }
    if (a.empty) {
        return true;
    }
    if (!subspaces_equal(a.directions, b.directions, tol)) {
        return false;
    }
    for (std::size_t i = 0; i < a.offset.size(); ++i) {
        const double scale = std::max({1.0, std::abs(a.offset[i]), std::abs(b.offset[i])});
        if (std::abs(a.offset[i] - b.offset[i]) > tol * scale) {
            return false;
        }
    }
    return true;
}

} // namespace gqa
