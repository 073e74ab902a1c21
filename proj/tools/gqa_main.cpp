// gqa: command-line front end.
//
// Exit codes: 0 success/equal, 1 not-equal, 2 input error, 3 infeasible.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "gqa/axioms.hpp"
#include "gqa/error.hpp"
#include "gqa/gauss.hpp"
#include "gqa/gpl.hpp"
#include "gqa/ols.hpp"
#include "gqa/quadrel.hpp"
#include "gqa/serialize.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kNotEqual = 1;
constexpr int kInputError = 2;
constexpr int kInfeasible = 3;

struct InputError : gqa::Error {
    using gqa::Error::Error;
};

std::string num(double v)
{
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
    return buf;
}

std::string vec(std::span<const double> v)
{
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        s += (i ? ", " : "") + num(v[i]);
    }
    return s + "]";
}

std::string mat(const gqa::Matrix& m)
{
    std::string s = "[";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        s += (i ? ", " : "") + vec(m.row(i));
    }
    return s + "]";
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

gqa::Vector parse_point(const std::string& text)
{
    gqa::Vector out;
    std::string cleaned = text;
    for (char& c : cleaned) {
        if (c == ',') {
            c = ' ';
        }
    }
    std::istringstream ss(cleaned);
    std::string token;
    while (ss >> token) {
        char* end = nullptr;
        const double v = std::strtod(token.c_str(), &end);
        if (end != token.c_str() + token.size()) {
            throw InputError("malformed coordinate '" + token + "'");
        }
        out.push_back(v);
    }
    return out;
}

void print_json(const nlohmann::json& j)
{
    std::cout << j.dump(2) << '\n';
}

struct Options {
    std::optional<double> tol;
    std::uint64_t seed = 0;
    bool json = false;

    double structural() const { return tol.value_or(gqa::kRankTolerance); }
    double verdict() const { return tol.value_or(1e-6); }
};

int cmd_eval(const Options& o, const std::string& file, const std::string& point)
{
    const gqa::Diagram d = gqa::parse_diagram(read_file(file));
    const gqa::Vector x = parse_point(point);
    if (x.size() != d.dom() + d.cod()) {
        throw InputError("point has " + std::to_string(x.size()) + " coordinates; the diagram needs " +
                         std::to_string(d.dom()) + " inputs followed by " + std::to_string(d.cod()) + " outputs");
    }
    const gqa::QuadRelMorphism f = gqa::interpret(d);
    const double v = gqa::eval_state(f.name, x, o.structural());
    if (o.json) {
        print_json({{"value", std::isinf(v) ? nlohmann::json(nullptr) : nlohmann::json(v)}, {"finite", !std::isinf(v)}});
    } else {
        std::cout << num(v) << '\n';
    }
    return kOk;
}

int cmd_normalize(const Options&, const std::string& file)
{
    const gqa::QuadRelMorphism f = gqa::interpret(gqa::parse_diagram(read_file(file)));
    print_json(gqa::relation_to_json(f));
    return kOk;
}

int cmd_eq(const Options& o, const std::string& a, const std::string& b)
{
    const gqa::Diagram da = gqa::parse_diagram(read_file(a));
    const gqa::Diagram db = gqa::parse_diagram(read_file(b));
    bool equal = da.dom() == db.dom() && da.cod() == db.cod();
    if (equal) {
        equal = gqa::relations_equal(gqa::interpret(da), gqa::interpret(db), o.verdict());
    }
    if (o.json) {
        print_json({{"equal", equal}});
    } else {
        std::cout << (equal ? "equal" : "not-equal") << '\n';
    }
    return equal ? kOk : kNotEqual;
}

int cmd_infer(const Options& o, const std::string& file)
{
    const gqa::InferenceResult r = gqa::infer(read_file(file));
    const gqa::QuadState& s = r.posterior;
    if (o.json) {
        print_json({{"type", r.type->to_string()}, {"posterior", gqa::state_to_json(s)}, {"score", r.score}});
        return kOk;
    }
    std::string line = "posterior = N(";
    if (s.n == 1) {
        line += num(s.mu[0]) + ", " + num(s.sigma(0, 0));
    } else {
        line += vec(s.mu) + ", " + mat(s.sigma);
    }
    line += ")";
    if (s.fibre.rank() > 0) {
        line += " + fibre span" + mat(s.fibre.basis().transpose());
    }
    std::cout << line << ", score = " << num(r.score) << '\n';
    return kOk;
}

int cmd_ols(const Options& o, const std::string& file)
{
    std::ifstream in(file);
    if (!in) {
        throw InputError("cannot open '" + file + "'");
    }
    const gqa::LeastSquaresProblem p = gqa::read_ols_csv(in);
    const gqa::OlsSolution s = gqa::solve_ols(p);
    if (o.json) {
        print_json({{"x_hat", s.x_hat},
                    {"residual_cost", s.residual_cost},
                    {"diagram_residual", s.diagram_residual},
                    {"injective", s.injective}});
    } else {
        std::cout << "x_hat = " << vec(s.x_hat) << '\n';
        std::cout << "residual = " << num(s.residual_cost) << '\n';
        if (!s.injective) {
            std::cout << "note: design matrix is not injective; x_hat is the minimum-norm solution\n";
        }
    }
    return kOk;
}

int cmd_axioms(const Options& o)
{
    const auto results = gqa::check_axioms(o.structural());
    std::size_t failed = 0;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : results) {
        failed += r.passed ? 0 : 1;
        if (o.json) {
            rows.push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
        } else {
            std::printf("%-28s %s%s%s\n", r.name.c_str(), r.passed ? "pass" : "FAIL", r.detail.empty() ? "" : "  ",
                        r.detail.c_str());
        }
    }
    if (o.json) {
        print_json({{"axioms", rows}, {"failed", failed}});
    } else {
        std::printf("%zu of %zu axiom rows passed\n", results.size() - failed, results.size());
    }
    return failed == 0 ? kOk : kNotEqual;
}

int cmd_export_dot(const Options&, const std::string& file, const std::string& out)
{
    const std::string dot = gqa::export_dot(gqa::parse_diagram(read_file(file)));
    if (out.empty() || out == "-") {
        std::cout << dot;
        return kOk;
    }
    std::ofstream os(out);
    if (!os) {
        throw InputError("cannot write '" + out + "'");
    }
    os << dot;
    return kOk;
}

int cmd_sample(const Options& o, const std::string& file, const std::string& point)
{
    const gqa::GaussMap f = gqa::interpret_causal(gqa::parse_diagram(read_file(file)));
    const gqa::Vector y = gqa::sample(f, parse_point(point), o.seed);
    if (o.json) {
        print_json({{"sample", y}});
    } else {
        std::cout << vec(y) << '\n';
    }
    return kOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Graphical Quadratic Algebra engine"};
    app.require_subcommand(1);
    app.fallthrough();

    Options opts;
    double tol = 0.0;
    auto* tol_opt = app.add_option("--tol", tol, "Tolerance (default 1e-9 structural, 1e-6 for equality verdicts)")
                        ->check(CLI::PositiveNumber);
    app.add_option("--seed", opts.seed, "Seed for sampling commands");
    app.add_flag("--json", opts.json, "Machine-readable output");

    std::string file;
    std::string file_b;
    std::string point;
    std::string out;

    auto* eval = app.add_subcommand("eval", "Value of a diagram's relation at (inputs, outputs)");
    eval->add_option("diagram", file)->required();
    eval->add_option("--point,-p", point, "Comma-separated coordinates, inputs then outputs")->required();

    auto* normalize = app.add_subcommand("normalize", "Canonical name of a diagram as JSON");
    normalize->add_option("diagram", file)->required();

    auto* eq = app.add_subcommand("eq", "Decide semantic equality of two diagrams");
    eq->add_option("a", file)->required();
    eq->add_option("b", file_b)->required();

    auto* inf = app.add_subcommand("infer", "Exact inference for a .gpl program");
    inf->add_option("program", file)->required();

    auto* ols = app.add_subcommand("ols", "Least squares from a CSV of rows a_1..a_m,y");
    ols->add_option("csv", file)->required();

    auto* axioms = app.add_subcommand("axioms-check", "Check the axiom soundness suite");

    auto* dot = app.add_subcommand("export-dot", "Graphviz rendering of a diagram");
    dot->add_option("diagram", file)->required();
    dot->add_option("--out,-o", out, "Output file (default stdout)");

    auto* smp = app.add_subcommand("sample", "Draw from a causal diagram at an input point");
    smp->add_option("diagram", file)->required();
    smp->add_option("--point,-p", point, "Comma-separated input coordinates");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInputError;
    }
    if (*tol_opt) {
        opts.tol = tol;
    }

    try {
        if (*eval) return cmd_eval(opts, file, point);
        if (*normalize) return cmd_normalize(opts, file);
        if (*eq) return cmd_eq(opts, file, file_b);
        if (*inf) return cmd_infer(opts, file);
        if (*ols) return cmd_ols(opts, file);
        if (*axioms) return cmd_axioms(opts);
        if (*dot) return cmd_export_dot(opts, file, out);
        if (*smp) return cmd_sample(opts, file, point);
    } catch (const gqa::InfeasibleObservation& e) {
        std::cerr << "gqa: infeasible: " << e.what() << '\n';
        return kInfeasible;
    } catch (const gqa::Error& e) {
        std::cerr << "gqa: " << e.what() << '\n';
        return kInputError;
    }
    return kInputError;
}
