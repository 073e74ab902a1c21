#include "gqa/diagram.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <vector>

#include "gqa/error.hpp"

namespace gqa {

// ---------------------------------------------------------------------------
// Generators

std::size_t Generator::dom() const noexcept
{
    switch (kind) {
    case GeneratorKind::Copy:
    case GeneratorKind::Discard:
    case GeneratorKind::Scalar:
    case GeneratorKind::Coadd:
    case GeneratorKind::Cozero:
        return 1;
    case GeneratorKind::Add:
    case GeneratorKind::Merge:
        return 2;
    case GeneratorKind::Zero:
    case GeneratorKind::One:
    case GeneratorKind::Normal:
    case GeneratorKind::Any:
        return 0;
    }
    return 0;
}

std::size_t Generator::cod() const noexcept
{
    switch (kind) {
    case GeneratorKind::Copy:
    case GeneratorKind::Coadd:
        return 2;
    case GeneratorKind::Discard:
    case GeneratorKind::Cozero:
        return 0;
    case GeneratorKind::Add:
    case GeneratorKind::Zero:
    case GeneratorKind::Scalar:
    case GeneratorKind::One:
    case GeneratorKind::Normal:
    case GeneratorKind::Merge:
    case GeneratorKind::Any:
        return 1;
    }
    return 0;
}

bool Generator::causal() const noexcept
{
    switch (kind) {
    case GeneratorKind::Merge:
    case GeneratorKind::Any:
    case GeneratorKind::Coadd:
    case GeneratorKind::Cozero:
        return false;
    default:
        return true;
    }
}

namespace {

std::string format_real(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
    return buf;
}

} // namespace

std::string Generator::name() const
{
    switch (kind) {
    case GeneratorKind::Copy: return "copy";
    case GeneratorKind::Discard: return "discard";
    case GeneratorKind::Add: return "add";
    case GeneratorKind::Zero: return "zero";
    case GeneratorKind::Scalar: return "scalar(" + format_real(k) + ")";
    case GeneratorKind::One: return "one";
    case GeneratorKind::Normal: return "normal";
    case GeneratorKind::Merge: return "merge";
    case GeneratorKind::Any: return "any";
    case GeneratorKind::Coadd: return "coadd";
    case GeneratorKind::Cozero: return "cozero";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Term trees

struct Diagram::Node {
    NodeKind kind = NodeKind::Empty;
    Generator generator;
    std::size_t width = 0;
    Diagram left;
    Diagram right;
    std::size_t dom = 0;
    std::size_t cod = 0;
    std::size_t gens = 0;
};

Diagram::Diagram()
    : node_(nullptr)
{}

Diagram::Diagram(std::shared_ptr<const Node> node)
    : node_(std::move(node))
{}

NodeKind Diagram::kind() const noexcept { return node_ ? node_->kind : NodeKind::Empty; }
std::size_t Diagram::dom() const noexcept { return node_ ? node_->dom : 0; }
std::size_t Diagram::cod() const noexcept { return node_ ? node_->cod : 0; }
std::size_t Diagram::size() const { return node_ ? node_->gens : 0; }

const Generator& Diagram::generator() const
{
    if (kind() != NodeKind::Gen) {
        throw Error("Diagram::generator on a non-generator node");
    }
    return node_->generator;
}

std::size_t Diagram::id_width() const
{
    if (kind() != NodeKind::Id) {
        throw Error("Diagram::id_width on a non-identity node");
    }
    return node_->width;
}

const Diagram& Diagram::left() const
{
    if (kind() != NodeKind::Seq && kind() != NodeKind::Par) {
        throw Error("Diagram::left on a leaf");
    }
    return node_->left;
}

const Diagram& Diagram::right() const
{
    if (kind() != NodeKind::Seq && kind() != NodeKind::Par) {
        throw Error("Diagram::right on a leaf");
    }
    return node_->right;
}

bool operator==(const Diagram& a, const Diagram& b)
{
    if (a.node_ == b.node_) {
        return true;
    }
    if (a.kind() != b.kind() || a.dom() != b.dom() || a.cod() != b.cod()) {
        return false;
    }
    switch (a.kind()) {
    case NodeKind::Gen: return a.generator() == b.generator();
    case NodeKind::Id: return a.id_width() == b.id_width();
    case NodeKind::Swap:
    case NodeKind::Empty: return true;
    case NodeKind::Seq:
    case NodeKind::Par: return a.left() == b.left() && a.right() == b.right();
    }
    return false;
}

Diagram gen(Generator g)
{
    auto n = std::make_shared<Diagram::Node>();
    n->kind = NodeKind::Gen;
    if (g.kind != GeneratorKind::Scalar) {
        g.k = 0.0;
    }
    n->generator = g;
    n->dom = g.dom();
    n->cod = g.cod();
    n->gens = 1;
    return Diagram(std::move(n));
}

Diagram gen(GeneratorKind kind) { return gen(Generator{kind, 0.0}); }
Diagram scalar(double k) { return gen(Generator{GeneratorKind::Scalar, k}); }

Diagram id(std::size_t n)
{
    auto node = std::make_shared<Diagram::Node>();
    node->kind = NodeKind::Id;
    node->width = n;
    node->dom = n;
    node->cod = n;
    return Diagram(std::move(node));
}

Diagram swap()
{
    auto node = std::make_shared<Diagram::Node>();
    node->kind = NodeKind::Swap;
    node->dom = 2;
    node->cod = 2;
    return Diagram(std::move(node));
}

Diagram empty() { return Diagram(); }

Diagram seq(const Diagram& f, const Diagram& g)
{
    if (f.cod() != g.dom()) {
        throw ArityMismatch("sequential composition: left has codomain " + std::to_string(f.cod()) +
                            " but right has domain " + std::to_string(g.dom()) + " in (" + print_diagram(f) +
                            " ; " + print_diagram(g) + ")");
    }
    auto node = std::make_shared<Diagram::Node>();
    node->kind = NodeKind::Seq;
    node->left = f;
    node->right = g;
    node->dom = f.dom();
    node->cod = g.cod();
    node->gens = f.size() + g.size();
    return Diagram(std::move(node));
}

Diagram par(const Diagram& f, const Diagram& g)
{
    auto node = std::make_shared<Diagram::Node>();
    node->kind = NodeKind::Par;
    node->left = f;
    node->right = g;
    node->dom = f.dom() + g.dom();
    node->cod = f.cod() + g.cod();
    node->gens = f.size() + g.size();
    return Diagram(std::move(node));
}

Diagram seq_all(std::span<const Diagram> parts)
{
    if (parts.empty()) {
        return empty();
    }
    Diagram d = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) {
        d = seq(d, parts[i]);
    }
    return d;
}

Diagram repeat(const Diagram& d, std::size_t n)
{
    if (n == 0) {
        return empty();
    }
    Diagram r = d;
    for (std::size_t i = 1; i < n; ++i) {
        r = par(r, d);
    }
    return r;
}

// ---------------------------------------------------------------------------
// Derived diagrams

namespace {

// Adjacent transposition of wires p and p+1 on an n-wire bus.
Diagram transposition(std::size_t n, std::size_t p)
{
    Diagram layer = swap();
    if (p > 0) {
        layer = par(id(p), layer);
    }
    if (p + 2 < n) {
        layer = par(layer, id(n - p - 2));
    }
    return layer;
}

// 1 -> k
Diagram fan_out(std::size_t k)
{
    if (k == 0) {
        return gen(GeneratorKind::Discard);
    }
    Diagram d = id(1);
    for (std::size_t i = 1; i < k; ++i) {
        d = seq(d, par(id(i - 1), gen(GeneratorKind::Copy)));
    }
    return d;
}

// k -> 1
Diagram fan_in(std::size_t k)
{
    if (k == 0) {
        return gen(GeneratorKind::Zero);
    }
    Diagram d = id(1);
    for (std::size_t i = 1; i < k; ++i) {
        d = seq(par(id(i - 1), gen(GeneratorKind::Add)), d);
    }
    return d;
}

} // namespace

Diagram permutation(std::span<const std::size_t> perm)
{
    const std::size_t n = perm.size();
    std::vector<bool> seen(n, false);
    for (std::size_t t : perm) {
        if (t >= n || seen[t]) {
            throw Error("permutation: not a permutation of 0.." + std::to_string(n == 0 ? 0 : n - 1));
        }
        seen[t] = true;
    }
    // key[p] = destination of the wire currently at position p; bubble sort.
    std::vector<std::size_t> key(perm.begin(), perm.end());
    Diagram d = id(n);
    bool any = false;
    for (std::size_t pass = 0; pass < n; ++pass) {
        bool swapped = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            if (key[p] > key[p + 1]) {
                std::swap(key[p], key[p + 1]);
                d = any ? seq(d, transposition(n, p)) : transposition(n, p);
                any = true;
                swapped = true;
            }
        }
        if (!swapped) {
            break;
        }
    }
    return d;
}

Diagram swap_bus(std::size_t a, std::size_t b)
{
    std::vector<std::size_t> perm(a + b);
    for (std::size_t i = 0; i < a; ++i) {
        perm[i] = b + i;
    }
    for (std::size_t i = 0; i < b; ++i) {
        perm[a + i] = i;
    }
    return permutation(perm);
}

Diagram copy_bus(std::size_t n)
{
    if (n == 0) {
        return empty();
    }
    std::vector<std::size_t> perm(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        perm[2 * i] = i;
        perm[2 * i + 1] = n + i;
    }
    return seq(repeat(gen(GeneratorKind::Copy), n), permutation(perm));
}

Diagram add_bus(std::size_t n)
{
    if (n == 0) {
        return empty();
    }
    std::vector<std::size_t> perm(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        perm[i] = 2 * i;
        perm[n + i] = 2 * i + 1;
    }
    return seq(permutation(perm), repeat(gen(GeneratorKind::Add), n));
}

Diagram discard_bus(std::size_t n)
{
    return repeat(gen(GeneratorKind::Discard), n);
}

Diagram coscalar(double k)
{
    // x, fresh y: compare x with k*y through merge, keep y.
    const Diagram fresh = seq(gen(GeneratorKind::Any), gen(GeneratorKind::Copy));
    return seq_all(std::vector<Diagram>{
        par(id(1), fresh),
        par(par(id(1), scalar(k)), id(1)),
        par(gen(GeneratorKind::Merge), id(1)),
        par(gen(GeneratorKind::Discard), id(1)),
    });
}

Diagram coone()
{
    return seq_all(std::vector<Diagram>{
        par(id(1), gen(GeneratorKind::One)),
        gen(GeneratorKind::Merge),
        gen(GeneratorKind::Discard),
    });
}

Diagram conormal()
{
    // [x - u = 0] + 1/2 u^2
    return seq_all(std::vector<Diagram>{
        par(id(1), gen(GeneratorKind::Normal)),
        par(id(1), scalar(-1.0)),
        gen(GeneratorKind::Add),
        gen(GeneratorKind::Cozero),
    });
}

Diagram matrix_diagram(const Matrix& a)
{
    const std::size_t n = a.rows();
    const std::size_t m = a.cols();
    struct Wire {
        std::size_t row;
        std::size_t col;
    };
    std::vector<Wire> wires;
    Diagram spread = empty();
    for (std::size_t j = 0; j < m; ++j) {
        std::vector<std::size_t> rows;
        for (std::size_t i = 0; i < n; ++i) {
            if (a(i, j) != 0.0) {
                rows.push_back(i);
                wires.push_back({i, j});
            }
        }
        Diagram column = fan_out(rows.size());
        if (!rows.empty()) {
            Diagram scales = empty();
            bool scaled_any = false;
            for (std::size_t i : rows) {
                scaled_any = scaled_any || a(i, j) != 1.0;
                scales = par(scales, a(i, j) == 1.0 ? id(1) : scalar(a(i, j)));
            }
            if (scaled_any) {
                column = seq(column, scales);
            }
        }
        spread = j == 0 ? column : par(spread, column);
    }

    // Wires leave the spread stage ordered by (col, row); regroup by row.
    std::vector<std::size_t> order(wires.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return wires[x].row != wires[y].row ? wires[x].row < wires[y].row : wires[x].col < wires[y].col;
    });
    std::vector<std::size_t> perm(wires.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        perm[order[pos]] = pos;
    }

    Diagram gather = empty();
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t count = 0;
        for (const Wire& w : wires) {
            count += w.row == i ? 1 : 0;
        }
        gather = i == 0 ? fan_in(count) : par(gather, fan_in(count));
    }

    Diagram d = spread;
    if (!wires.empty()) {
        bool trivial = true;
        for (std::size_t k = 0; k < perm.size(); ++k) {
            trivial = trivial && perm[k] == k;
        }
        if (!trivial) {
            d = seq(d, permutation(perm));
        }
    }
    return seq(d, gather);
}

Diagram const_diagram(std::span<const double> c)
{
    Diagram d = empty();
    for (std::size_t i = 0; i < c.size(); ++i) {
        Diagram entry = c[i] == 0.0   ? gen(GeneratorKind::Zero)
                        : c[i] == 1.0 ? gen(GeneratorKind::One)
                                      : seq(gen(GeneratorKind::One), scalar(c[i]));
        d = i == 0 ? entry : par(d, entry);
    }
    return d;
}

Diagram subspace_diagram(const Subspace& s)
{
    return seq(repeat(gen(GeneratorKind::Any), s.rank()), matrix_diagram(s.basis()));
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class DiagramParser {
public:
    explicit DiagramParser(std::string_view text)
        : text_(text)
    {}

    Diagram parse()
    {
        skip_space();
        if (at_end()) {
            throw SyntaxError("empty diagram text", line_, col_);
        }
        Diagram d = parse_seq();
        skip_space();
        if (!at_end()) {
            throw SyntaxError(std::string("unexpected '") + peek() + "'", line_, col_);
        }
        return d;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;

    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return at_end() ? '\0' : text_[pos_]; }

    void advance()
    {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_space()
    {
        while (!at_end()) {
            const char c = peek();
            if (c == '#') {
                while (!at_end() && peek() != '\n') {
                    advance();
                }
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    void expect(char c)
    {
        skip_space();
        if (peek() != c) {
            throw SyntaxError(std::string("expected '") + c + "'", line_, col_);
        }
        advance();
    }

    Diagram compose(bool sequential, const Diagram& l, const Diagram& r, std::size_t line, std::size_t col)
    {
        if (!sequential) {
            return par(l, r);
        }
        try {
            return seq(l, r);
        } catch (const ArityMismatch& e) {
            throw ArityMismatch(std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
        }
    }

    Diagram parse_seq()
    {
        Diagram d = parse_par();
        for (;;) {
            skip_space();
            if (peek() != ';') {
                return d;
            }
            const std::size_t line = line_;
            const std::size_t col = col_;
            advance();
            Diagram rhs = parse_par();
            d = compose(true, d, rhs, line, col);
        }
    }

    Diagram parse_par()
    {
        Diagram d = parse_atom();
        for (;;) {
            skip_space();
            if (peek() != '*') {
                return d;
            }
            advance();
            d = par(d, parse_atom());
        }
    }

    double parse_number()
    {
        skip_space();
        const std::size_t start = pos_;
        const std::size_t line = line_;
        const std::size_t col = col_;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '.' || peek() == '-' ||
                             peek() == '+')) {
            advance();
        }
        const std::string token(text_.substr(start, pos_ - start));
        if (token.empty()) {
            throw SyntaxError("expected a number", line, col);
        }
        char* end = nullptr;
        const double v = std::strtod(token.c_str(), &end);
        if (end != token.c_str() + token.size() || !std::isfinite(v)) {
            throw SyntaxError("malformed number '" + token + "'", line, col);
        }
        return v;
    }

    Diagram parse_atom()
    {
        skip_space();
        if (at_end()) {
            throw SyntaxError("unexpected end of input", line_, col_);
        }
        if (peek() == '(') {
            advance();
            Diagram d = parse_seq();
            expect(')');
            return d;
        }
        const std::size_t line = line_;
        const std::size_t col = col_;
        const std::size_t start = pos_;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) {
            advance();
        }
        const std::string word(text_.substr(start, pos_ - start));
        if (word.empty()) {
            throw SyntaxError(std::string("unexpected '") + peek() + "'", line, col);
        }

        if (word == "copy") return gen(GeneratorKind::Copy);
        if (word == "discard") return gen(GeneratorKind::Discard);
        if (word == "add") return gen(GeneratorKind::Add);
        if (word == "zero") return gen(GeneratorKind::Zero);
        if (word == "one") return gen(GeneratorKind::One);
        if (word == "normal") return gen(GeneratorKind::Normal);
        if (word == "merge") return gen(GeneratorKind::Merge);
        if (word == "any") return gen(GeneratorKind::Any);
        if (word == "coadd") return gen(GeneratorKind::Coadd);
        if (word == "cozero") return gen(GeneratorKind::Cozero);
        if (word == "swap") return swap();
        if (word == "empty") return empty();
        if (word == "coone" || word == "cofoot") return coone();
        if (word == "conormal") return conormal();
        if (word == "scalar" || word == "coscalar") {
            expect('(');
            const double k = parse_number();
            expect(')');
            return word == "scalar" ? scalar(k) : coscalar(k);
        }
        if (word == "id") {
            skip_space();
            if (peek() != '(') {
                return id(1);
            }
            advance();
            const double w = parse_number();
            if (w < 0 || w != std::floor(w) || w > 1e6) {
                throw SyntaxError("id expects a natural number", line, col);
            }
            expect(')');
            return id(static_cast<std::size_t>(w));
        }
        throw SyntaxError("unknown generator '" + word + "'", line, col);
    }
};

void print_to(const Diagram& d, std::string& out)
{
    switch (d.kind()) {
    case NodeKind::Gen: out += d.generator().name(); return;
    case NodeKind::Id: out += "id(" + std::to_string(d.id_width()) + ")"; return;
    case NodeKind::Swap: out += "swap"; return;
    case NodeKind::Empty: out += "empty"; return;
    case NodeKind::Seq:
    case NodeKind::Par:
        out += '(';
        print_to(d.left(), out);
        out += d.kind() == NodeKind::Seq ? " ; " : " * ";
        print_to(d.right(), out);
        out += ')';
        return;
    }
}

// Wire endpoint in the DOT graph.
struct DotBuilder {
    std::ostringstream body;
    std::size_t next_gen = 0;

    std::vector<std::string> build(const Diagram& d, const std::vector<std::string>& inputs)
    {
        switch (d.kind()) {
        case NodeKind::Empty: return {};
        case NodeKind::Id: return inputs;
        case NodeKind::Swap: return {inputs[1], inputs[0]};
        case NodeKind::Seq: return build(d.right(), build(d.left(), inputs));
        case NodeKind::Par: {
            const auto split = static_cast<std::ptrdiff_t>(d.left().dom());
            std::vector<std::string> a(inputs.begin(), inputs.begin() + split);
            std::vector<std::string> b(inputs.begin() + split, inputs.end());
            auto out = build(d.left(), a);
            auto rest = build(d.right(), b);
            out.insert(out.end(), rest.begin(), rest.end());
            return out;
        }
        case NodeKind::Gen: {
            const std::string name = "g" + std::to_string(next_gen++);
            body << "  " << name << " [label=\"" << d.generator().name() << "\"];\n";
            for (const std::string& src : inputs) {
                body << "  " << src << " -> " << name << ";\n";
            }
            return std::vector<std::string>(d.cod(), name);
        }
        }
        return {};
    }
};

} // namespace

Diagram parse_diagram(std::string_view text)
{
    return DiagramParser(text).parse();
}

std::string print_diagram(const Diagram& d)
{
    std::string out;
    print_to(d, out);
    return out;
}

std::string export_dot(const Diagram& d)
{
    DotBuilder b;
    std::vector<std::string> inputs;
    for (std::size_t i = 0; i < d.dom(); ++i) {
        inputs.push_back("in" + std::to_string(i));
        b.body << "  in" << i << " [shape=point];\n";
    }
    const auto outputs = b.build(d, inputs);
    for (std::size_t j = 0; j < outputs.size(); ++j) {
        b.body << "  out" << j << " [shape=point];\n";
        b.body << "  " << outputs[j] << " -> out" << j << ";\n";
    }
    return "digraph G {\n  rankdir=LR;\n" + b.body.str() + "}\n";
}

} // namespace gqa
