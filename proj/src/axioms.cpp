#include "gqa/axioms.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "gqa/error.hpp"
#include "gqa/quadrel.hpp"

namespace gqa {

namespace {

const Diagram I = id(1);

Diagram g(GeneratorKind k) { return gen(k); }

Diagram s(const Diagram& a, const Diagram& b) { return seq(a, b); }
Diagram s(const Diagram& a, const Diagram& b, const Diagram& c) { return seq(seq(a, b), c); }
Diagram p(const Diagram& a, const Diagram& b) { return par(a, b); }
Diagram p(const Diagram& a, const Diagram& b, const Diagram& c) { return par(par(a, b), c); }

std::string tag(const std::string& base, const char* var, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "[%s=%g]", var, v);
    return base + buf;
}

// 1 -> 0 effect [x = c], built from conditioning on zero.
Diagram observe_at(double c)
{
    const double cs[] = {c};
    return s(p(I, const_diagram(cs)), p(I, scalar(-1.0)), s(g(GeneratorKind::Add), g(GeneratorKind::Cozero)));
}

Diagram rotation(double phi)
{
    const double c = std::cos(phi);
    const double sn = std::sin(phi);
    return matrix_diagram(Matrix{{c, -sn}, {sn, c}});
}

} // namespace

std::vector<double> axiom_angles()
{
    return {0.0, std::numbers::pi / 6, std::numbers::pi / 4, std::numbers::pi / 2, 2.5};
}

std::vector<AxiomCase> axiom_cases()
{
    using K = GeneratorKind;
    const Diagram copy = g(K::Copy);
    const Diagram discard = g(K::Discard);
    const Diagram add = g(K::Add);
    const Diagram zero = g(K::Zero);
    const Diagram one = g(K::One);
    const Diagram normal = g(K::Normal);
    const Diagram merge = g(K::Merge);
    const Diagram any = g(K::Any);
    const Diagram coadd = g(K::Coadd);
    const Diagram cozero = g(K::Cozero);
    const Diagram sw = swap();
    const Diagram nothing = empty();

    std::vector<AxiomCase> out = {
        // commutative monoid (add, zero)
        {"as", s(p(add, I), add), s(p(I, add), add)},
        {"com", s(sw, add), add},
        {"un", s(p(zero, I), add), I},
        // commutative comonoid (copy, discard)
        {"coas", s(copy, p(copy, I)), s(copy, p(I, copy))},
        {"cocom", s(copy, sw), copy},
        {"coun", s(copy, p(discard, I)), I},
        // constant one
        {"1-dup", s(one, copy), p(one, one)},
        {"1-del", s(one, discard), nothing},
        // bimonoid
        {"bi", s(add, copy), s(p(copy, copy), p(I, sw, I), p(add, add))},
        {"biun", s(zero, copy), p(zero, zero)},
        {"bo", s(zero, discard), nothing},
        {"coun-add", s(add, discard), p(discard, discard)},
        // scalars 0 and 1
        {"0", scalar(0.0), s(discard, zero)},
        {"1", scalar(1.0), I},
        // quadratic
        {"D", s(normal, discard), nothing},
        {"Z", s(normal, cozero), nothing},
        {"flip", s(normal, scalar(-1.0)), normal},
        // black Frobenius (copy, merge)
        {"b-fr1", s(p(copy, I), p(I, merge)), s(merge, copy)},
        {"b-fr2", s(p(I, copy), p(merge, I)), s(merge, copy)},
        {"b-sp", s(copy, merge), I},
        {"b-bo", s(any, discard), nothing},
        // white Frobenius (coadd, add)
        {"w-fr1", s(p(coadd, I), p(I, add)), s(add, coadd)},
        {"w-fr2", s(p(I, coadd), p(add, I)), s(add, coadd)},
        {"w-sp", s(coadd, add), I},
        {"w-bo", s(zero, cozero), nothing},
        // relational
        {"cap", s(zero, coadd), s(any, copy, p(I, scalar(-1.0)))},
        {"false", p(s(one, cozero), I), p(s(one, cozero), s(discard, any))},
        // derived mirrored generators
        {"coone", s(one, coone()), nothing},
        {"conormal", s(normal, conormal()), nothing},
    };

    for (double k : kAxiomScalars) {
        out.push_back({tag("k-add", "k", k), s(add, scalar(k)), s(p(scalar(k), scalar(k)), add)});
        out.push_back({tag("k-zero", "k", k), s(zero, scalar(k)), zero});
        out.push_back({tag("k-dup", "k", k), s(scalar(k), copy), s(copy, p(scalar(k), scalar(k)))});
        out.push_back({tag("k-del", "k", k), s(scalar(k), discard), discard});
        out.push_back({tag("k-coscalar", "k", k), coscalar(k), scalar(1.0 / k)});
        for (double l : kAxiomScalars) {
            const std::string kl = tag(tag("", "k", k), "l", l);
            out.push_back({"mult" + kl, s(scalar(k), scalar(l)), scalar(k * l)});
            out.push_back({"plus" + kl, s(copy, p(scalar(k), scalar(l)), add), scalar(k + l)});
        }
        // r ranges over the nonzero samples
        out.push_back({tag("r-inv", "r", k), s(scalar(k), coscalar(k)), I});
        out.push_back({tag("r-coinv", "r", k), s(coscalar(k), scalar(k)), I});
    }
    for (double phi : axiom_angles()) {
        out.push_back({tag("RI", "phi", phi), s(p(normal, normal), rotation(phi)), p(normal, normal)});
    }
    // Pythagorean scalars and the initialisation principle.
    const double triples[][3] = {{3.0, 4.0, 5.0}, {-1.0, 1.0, std::sqrt(2.0)}, {0.5, 1.2, 1.3}};
    for (const auto& t : triples) {
        out.push_back({tag("pythagoras", "c", t[2]), p(s(normal, observe_at(t[0])), s(normal, observe_at(t[1]))),
                       s(normal, observe_at(t[2]))});
    }
    for (double c : {0.0, 0.5, 2.0, 3.0}) {
        const double cs[] = {c};
        out.push_back({tag("INI", "c", c), s(normal, copy, p(I, observe_at(c))),
                       p(const_diagram(cs), s(normal, observe_at(c)))});
    }
    return out;
}

std::vector<AxiomResult> check_axioms(double tol)
{
    std::vector<AxiomResult> results;
    for (const AxiomCase& c : axiom_cases()) {
        AxiomResult r;
        r.name = c.name;
        try {
            const QuadRelMorphism lhs = interpret_generators(c.lhs);
            const QuadRelMorphism rhs = interpret_generators(c.rhs);
            r.passed = relations_equal(lhs, rhs, tol);
            if (!r.passed) {
                r.detail = print_diagram(c.lhs) + " differs from " + print_diagram(c.rhs);
            }
        } catch (const Error& e) {
            r.detail = e.what();
        }
        results.push_back(std::move(r));
    }
    return results;
}

} // namespace gqa
