// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "gqa/axioms.hpp"
#include "gqa/error.hpp"
#include "gqa/gpl.hpp"
#include "gqa/ols.hpp"
#include "gqa/oracle.hpp"
#include "gqa/quadrel.hpp"
#include "support.hpp"

using namespace gqa;
using gqa::testing::random_causal_diagram;
using gqa::testing::random_gauss;
using gqa::testing::random_matrix;
using gqa::testing::random_orthogonal;
using gqa::testing::random_state;
using gqa::testing::random_vector;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;

    void fail(const std::string& why)
    {
        if (ok) {
            detail = why;
        }
        ok = false;
    }
};

bool mixed_close(double a, double b, double tol)
{
    if (std::isinf(a) || std::isinf(b)) {
        return a == b;
    }
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Outcome noisy_measurement()
{
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    const InferenceResult r = infer("let x = 10·normal() in let y = x + 5·normal() in (y =:= 40); x");
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (r.posterior.n != 1 || r.posterior.fibre.rank() != 0) {
        out.fail("posterior is not a one-dimensional Gaussian");
        return out;
    }
    const double mean = r.posterior.mu[0];
    const double var = r.posterior.sigma(0, 0);
    if (std::abs(mean - 32.0) > 1e-9 || std::abs(var - 20.0) > 1e-9 || std::abs(r.score - 6.4) > 1e-9) {
        out.fail("mean " + num(mean) + " var " + num(var) + " score " + num(r.score));
    }
    if (seconds >= 0.1) {
        out.fail("took " + num(seconds) + " s");
    }
    return out;
}

Outcome sum_of_normals()
{
    Outcome out;
    const QuadRelMorphism f = interpret(parse_diagram("(normal*normal);add"));
    if (!states_equal(f.name, gaussian_state({0.0}, Matrix{{2.0}}))) {
        out.fail("name differs from N(0, 2)");
    }
    const double y[] = {2.0};
    const double v = eval_state(f.name, y);
    if (std::abs(v - 1.0) > 1e-12) {
        out.fail("value at 2 is " + num(v));
    }
    return out;
}

Outcome axiom_suite()
{
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    const std::vector<AxiomResult> results = check_axioms(1e-9);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::size_t failed = 0;
    for (const AxiomResult& r : results) {
        if (!r.passed) {
            ++failed;
            out.fail(r.name + ": " + r.detail);
        }
    }
    if (results.empty()) {
        out.fail("no axiom cases");
    }
    if (seconds >= 5.0) {
        out.fail("took " + num(seconds) + " s");
    }
    if (out.ok) {
        out.detail = std::to_string(results.size()) + " cases";
    } else {
        out.detail += " (" + std::to_string(failed) + " failing)";
    }
    return out;
}

Outcome least_squares()
{
    Outcome out;
    Rng rng(401);
    const auto start = std::chrono::steady_clock::now();
    for (int trial = 0; trial < 100; ++trial) {
        const auto n = static_cast<std::size_t>(rng.uniform_int(1, 8));
        const auto m = static_cast<std::size_t>(rng.uniform_int(1, 4));
        const Matrix a = random_matrix(rng, n, m);
        const Vector y = random_vector(rng, n);
        const OlsSolution s = solve_ols({a, y});
        const Vector expect = pseudoinverse(a) * y;
        for (std::size_t i = 0; i < m; ++i) {
            if (std::abs(s.x_hat[i] - expect[i]) > 1e-8) {
                out.fail("trial " + std::to_string(trial) + ": x_hat differs from A^+ y");
            }
        }
        if (m > 2) {
            continue;
        }
        const PointFunction cost = [&](std::span<const double> x) {
            const Vector r = sub(y, a * x);
            return 0.5 * dot(r, r);
        };
        const Svd d = svd(a);
        double smin = 0.0;
        for (double sv : d.s) {
            if (sv > 1e-12 * d.s[0]) {
                smin = sv;
            }
        }
        const double radius = norm(y) / smin + 1.0;
        const double grid = grid_infimize(cost, GridSpec::box(m, -radius, radius, 41, 5));
        if (std::abs(grid - s.residual_cost) > 1e-3) {
            out.fail("trial " + std::to_string(trial) + ": residual " + num(s.residual_cost) + " vs grid " + num(grid));
        }
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds >= 10.0) {
        out.fail("took " + num(seconds) + " s");
    }
    return out;
}

Outcome conservativity()
{
    Outcome out;
    Rng rng(402);
    for (int trial = 0; trial < 200; ++trial) {
        const auto depth = static_cast<std::size_t>(rng.uniform_int(1, 6));
        const Diagram d = random_causal_diagram(rng, depth, 4);
        if (!relations_equal(functor_L(interpret_causal(d)), interpret_generators(d), 1e-8)) {
            out.fail("trial " + std::to_string(trial) + ": " + print_diagram(d));
        }
    }
    return out;
}

// Fibre-free name with Sigma eigenvalues in [0.5, 3]; its inverse has
// eigenvalues in [1/3, 2], which bounds the minimizer used for the grid box.
QuadState well_conditioned_name(Rng& rng, std::size_t n)
{
    const Matrix q = random_orthogonal(rng, n);
    Matrix sigma(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double lambda = rng.uniform(0.5, 3.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                sigma(i, j) += lambda * q(i, k) * q(j, k);
            }
        }
    }
    return make_state(Subspace(n), random_vector(rng, n), sigma, rng.uniform(0.0, 2.0));
}

Outcome composition_oracle()
{
    Outcome out;
    Rng rng(403);
    for (int trial = 0; trial < 50; ++trial) {
        const auto k = static_cast<std::size_t>(rng.uniform_int(1, 3));
        const auto m = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(4 - k)));
        const auto n = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(4 - k - m)));
        const QuadRelMorphism f = unname(well_conditioned_name(rng, m + k), m);
        const QuadRelMorphism g = unname(well_conditioned_name(rng, k + n), k);
        const QuadRelMorphism fg = compose_rel(f, g);
        const StateEvaluator ef(f.name);
        const StateEvaluator eg(g.name);
        for (int probe = 0; probe < 5; ++probe) {
            const Vector x = random_vector(rng, m);
            const Vector z = random_vector(rng, n);
            const double radius = 3.0 * (norm(x) + norm(z) + norm(f.name.mu) + norm(g.name.mu)) + 1.0;
            const PointFunction sum = [&](std::span<const double> y) {
                const Vector xy = concat(x, y);
                const Vector yz = concat(y, z);
                return ef(xy) + eg(yz);
            };
            const double oracle = grid_infimize(sum, GridSpec::box(k, -radius, radius, 41, 4));
            const double value = eval_rel(fg, x, z);
            if (!mixed_close(value, oracle, 1e-3)) {
                out.fail("trial " + std::to_string(trial) + ": " + num(value) + " vs grid " + num(oracle));
            }
        }
    }
    return out;
}

Outcome encoding_uniqueness()
{
    Outcome out;
    Rng rng(404);
    for (int trial = 0; trial < 100; ++trial) {
        const auto n = static_cast<std::size_t>(rng.uniform_int(1, 4));
        const auto k = static_cast<std::size_t>(rng.uniform_int(1, 4));
        const Matrix l = random_matrix(rng, n, k);
        const Matrix r = random_orthogonal(rng, k);
        const Vector b = random_vector(rng, n);
        const Diagram noise = repeat(gen(GeneratorKind::Normal), k);
        const auto build = [&](const Matrix& factor) {
            return seq(par(seq(noise, matrix_diagram(factor)), const_diagram(b)), add_bus(n));
        };
        const QuadState from_l = interpret(build(l)).name;
        const QuadState from_lr = interpret(build(l * r)).name;
        if (!states_equal(from_l, from_lr, 1e-9)) {
            out.fail("trial " + std::to_string(trial) + " (n=" + std::to_string(n) + ", k=" + std::to_string(k) + ")");
        }
        const GaussMap gl = interpret_causal(build(l));
        const GaussMap glr = interpret_causal(build(l * r));
        if (!gauss_equal(gl, glr, 1e-9)) {
            out.fail("trial " + std::to_string(trial) + ": causal interpretations differ");
        }
    }
    return out;
}

Outcome elimination()
{
    Outcome out;
    Rng rng(405);
    std::size_t finite_checks = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto n = static_cast<std::size_t>(rng.uniform_int(1, 4));
        const auto q = static_cast<std::size_t>(rng.uniform_int(1, 4));
        const QuadState s = random_state(rng, n);
        const Matrix b = random_matrix(rng, q, n);
        const std::string tag = "trial " + std::to_string(trial);

        // a point where s is finite, unless s is infeasible
        const Matrix l = psd_factor(s.sigma);
        Vector x0 = add(s.mu, l * random_vector(rng, l.cols()));
        x0 = add(x0, s.fibre.basis() * random_vector(rng, s.fibre.rank()));
        const bool consistent = trial % 4 != 3;
        const Vector v = consistent ? b * x0 : random_vector(rng, q);
        const QuadState c = condition_zero(s, b, v);
        const StateEvaluator es(s);
        const StateEvaluator ec(c);

        if (consistent) {
            const double before = es(x0);
            const double after = ec(x0);
            finite_checks += std::isfinite(before) ? 1 : 0;
            if (!mixed_close(before, after, 1e-8)) {
                out.fail(tag + ": at a satisfying point " + num(after) + " vs " + num(before));
            }
            // move inside ker B, along directions where s stays finite and in general
            const Subspace reach = subspace_sum(s.fibre, image(s.sigma));
            const Subspace free = subspace_intersection(kernel(b), reach);
            const Subspace any = kernel(b);
            for (const Subspace* dirs : {&free, &any}) {
                const Vector x = add(x0, dirs->basis() * random_vector(rng, dirs->rank()));
                const double lhs = ec(x);
                const double rhs = es(x);
                if (!mixed_close(lhs, rhs, 1e-7)) {
                    out.fail(tag + ": at a satisfying point " + num(lhs) + " vs " + num(rhs));
                }
            }
        }
        // violating points
        for (int probe = 0; probe < 3; ++probe) {
            const Vector x = random_vector(rng, n);
            if (norm(sub(b * x, v)) > 1e-6 * std::max(1.0, norm(v)) && !std::isinf(ec(x))) {
                out.fail(tag + ": violating point evaluates to " + num(ec(x)));
            }
        }
    }
    if (finite_checks == 0) {
        out.fail("no finite satisfying points were probed");
    }
    return out;
}

Outcome monte_carlo()
{
    Outcome out;
    Rng rng(406);
    const std::size_t samples = 100000;
    const auto start = std::chrono::steady_clock::now();
    for (int trial = 0; trial < 20; ++trial) {
        const auto m = static_cast<std::size_t>(rng.uniform_int(0, 3));
        const auto k = static_cast<std::size_t>(rng.uniform_int(1, 3));
        const auto n = static_cast<std::size_t>(rng.uniform_int(1, 3));
        const GaussMap f = random_gauss(rng, m, k);
        const GaussMap g = random_gauss(rng, k, n);
        const GaussMap h = compose_gauss(f, g);
        const Vector x = random_vector(rng, m);

        const Matrix lf = psd_factor(f.sigma);
        const Matrix lg = psd_factor(g.sigma);
        const Sampler chain = [&](Rng& r) {
            const Vector mid = sample(f, lf, x, r);
            return sample(g, lg, mid, r);
        };
        const MomentSums sums = moment_sums(chain, n, samples, 1000 + static_cast<std::uint64_t>(trial));
        const double count = static_cast<double>(samples);
        Vector mean(n);
        for (std::size_t i = 0; i < n; ++i) {
            mean[i] = sums.sum[i] / count;
        }
        const Vector expect = add(h.a * x, h.b);
        const std::string tag = "trial " + std::to_string(trial);
        for (std::size_t i = 0; i < n; ++i) {
            const double band = 5.0 * std::sqrt(h.sigma(i, i) / count) + 1e-12;
            if (std::abs(mean[i] - expect[i]) > band) {
                out.fail(tag + ": mean " + num(mean[i]) + " vs " + num(expect[i]));
            }
            for (std::size_t j = 0; j < n; ++j) {
                const double cov = (sums.outer(i, j) - count * mean[i] * mean[j]) / (count - 1.0);
                const double spread = h.sigma(i, i) * h.sigma(j, j) + h.sigma(i, j) * h.sigma(i, j);
                const double cband = 5.0 * std::sqrt(spread / count) + 1e-9 * std::max(1.0, std::abs(h.sigma(i, j)));
                if (std::abs(cov - h.sigma(i, j)) > cband) {
                    out.fail(tag + ": cov(" + std::to_string(i) + "," + std::to_string(j) + ") " + num(cov) + " vs " +
                             num(h.sigma(i, j)));
                }
            }
        }
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds >= 30.0) {
        out.fail("took " + num(seconds) + " s");
    }
    return out;
}

} // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"noisy measurement posterior N(32, 20), score 6.4", noisy_measurement},
        {"normal + normal is N(0, 2), value 1 at y = 2", sum_of_normals},
        {"axiom soundness suite", axiom_suite},
        {"least squares against pseudoinverse and grid", least_squares},
        {"conservativity of the Gaussian interpretation", conservativity},
        {"composition against grid infimum", composition_oracle},
        {"encoding uniqueness under orthogonal mixing", encoding_uniqueness},
        {"conditioning elimination is pointwise exact", elimination},
        {"Monte-Carlo moments of composed maps", monte_carlo},
    };
    int failures = 0;
    int index = 1;
    for (const auto& [name, run] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = run();
        } catch (const std::exception& e) {
            out.fail(std::string("exception: ") + e.what());
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s %d %s (%.3f s)%s%s\n", out.ok ? "PASS" : "FAIL", index, name, seconds,
                    out.detail.empty() ? "" : ": ", out.detail.c_str());
        failures += out.ok ? 0 : 1;
        ++index;
    }
    return failures == 0 ? 0 : 1;
}
