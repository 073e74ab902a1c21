#include "gqa/gpl.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "gqa/error.hpp"
#include "gqa/quadrel.hpp"

namespace gqa {

// ---------------------------------------------------------------------------
// Types

GplTypePtr GplType::real()
{
    static const GplTypePtr r = std::make_shared<GplType>(GplType{Kind::R, nullptr, nullptr});
    return r;
}

GplTypePtr GplType::unit()
{
    static const GplTypePtr u = std::make_shared<GplType>(GplType{Kind::I, nullptr, nullptr});
    return u;
}

GplTypePtr GplType::pair(GplTypePtr a, GplTypePtr b)
{
    return std::make_shared<GplType>(GplType{Kind::Pair, std::move(a), std::move(b)});
}

std::size_t GplType::dim() const
{
    switch (kind) {
    case Kind::R: return 1;
    case Kind::I: return 0;
    case Kind::Pair: return first->dim() + second->dim();
    }
    return 0;
}

std::string GplType::to_string() const
{
    switch (kind) {
    case Kind::R: return "R";
    case Kind::I: return "I";
    case Kind::Pair: return "(" + first->to_string() + " * " + second->to_string() + ")";
    }
    return "?";
}

bool same_type(const GplType& a, const GplType& b)
{
    if (a.kind != b.kind) {
        return false;
    }
    return a.kind != GplType::Kind::Pair || (same_type(*a.first, *b.first) && same_type(*a.second, *b.second));
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok { Ident, Number, Let, In, Normal, Pi0, Pi1, LParen, RParen, Comma, Plus, Minus, Star, Semi, Eq, Observe, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    double number = 0;
    std::size_t line = 1;
    std::size_t column = 1;
};

class Lexer {
public:
    explicit Lexer(std::string_view src)
        : src_(src)
    {}

    std::vector<Token> run()
    {
        std::vector<Token> out;
        for (;;) {
            skip();
            Token t;
            t.line = line_;
            t.column = col_;
            if (pos_ >= src_.size()) {
                out.push_back(t);
                return out;
            }
            const char c = src_[pos_];
            if (std::isdigit(static_cast<unsigned char>(c)) ||
                (c == '.' && pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
                t.kind = Tok::Number;
                t.number = number(t);
            } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                const std::size_t start = pos_;
                while (pos_ < src_.size() &&
                       (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_' || src_[pos_] == '\'')) {
                    step();
                }
                t.text = std::string(src_.substr(start, pos_ - start));
                t.kind = keyword(t.text);
            } else if (src_.substr(pos_, 2) == "\xCF\x80") { // pi
                step();
                step();
                if (pos_ < src_.size() && (src_[pos_] == '0' || src_[pos_] == '1')) {
                    t.kind = src_[pos_] == '0' ? Tok::Pi0 : Tok::Pi1;
                    step();
                } else {
                    throw SyntaxError("expected 0 or 1 after projection symbol", t.line, t.column);
                }
            } else if (src_.substr(pos_, 2) == "\xC2\xB7") { // middle dot
                step();
                step();
                t.kind = Tok::Star;
            } else if (src_.substr(pos_, 3) == "=:=") {
                step();
                step();
                step();
                t.kind = Tok::Observe;
            } else {
                switch (c) {
                case '(': t.kind = Tok::LParen; break;
                case ')': t.kind = Tok::RParen; break;
                case ',': t.kind = Tok::Comma; break;
                case '+': t.kind = Tok::Plus; break;
                case '-': t.kind = Tok::Minus; break;
                case '*': t.kind = Tok::Star; break;
                case ';': t.kind = Tok::Semi; break;
                case '=': t.kind = Tok::Eq; break;
                default:
                    throw SyntaxError(std::string("unexpected character '") + c + "'", t.line, t.column);
                }
                step();
            }
            out.push_back(t);
        }
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;

    void step()
    {
        const unsigned char c = static_cast<unsigned char>(src_[pos_]);
        ++pos_;
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else if ((c & 0xC0) != 0x80) {
            // continuation bytes do not start a new column
            ++col_;
        }
    }

    void skip()
    {
        while (pos_ < src_.size()) {
            if (std::isspace(static_cast<unsigned char>(src_[pos_]))) {
                step();
            } else if (src_.substr(pos_, 2) == "--") {
                while (pos_ < src_.size() && src_[pos_] != '\n') {
                    step();
                }
            } else {
                return;
            }
        }
    }

    double number(const Token& t)
    {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) {
            step();
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t look = pos_ + 1;
            if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) {
                ++look;
            }
            if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
                while (pos_ < look) {
                    step();
                }
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                    step();
                }
            }
        }
        const std::string text(src_.substr(start, pos_ - start));
        char* end = nullptr;
        const double v = std::strtod(text.c_str(), &end);
        if (end != text.c_str() + text.size() || !std::isfinite(v)) {
            throw SyntaxError("malformed number '" + text + "'", t.line, t.column);
        }
        return v;
    }

    static Tok keyword(const std::string& w)
    {
        if (w == "let") return Tok::Let;
        if (w == "in") return Tok::In;
        if (w == "normal") return Tok::Normal;
        if (w == "pi0") return Tok::Pi0;
        if (w == "pi1") return Tok::Pi1;
        return Tok::Ident;
    }
};

const char* describe(Tok t)
{
    switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::Let: return "'let'";
    case Tok::In: return "'in'";
    case Tok::Normal: return "'normal'";
    case Tok::Pi0: return "'pi0'";
    case Tok::Pi1: return "'pi1'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Semi: return "';'";
    case Tok::Eq: return "'='";
    case Tok::Observe: return "'=:='";
    case Tok::End: return "end of input";
    }
    return "?";
}

GplTermPtr node(TermKind kind, const Token& at, GplTermPtr lhs = nullptr, GplTermPtr rhs = nullptr)
{
    auto t = std::make_shared<GplTerm>();
    t->kind = kind;
    t->lhs = std::move(lhs);
    t->rhs = std::move(rhs);
    t->line = at.line;
    t->column = at.column;
    return t;
}

GplTermPtr scaled_term(double a, GplTermPtr e, const Token& at)
{
    auto t = std::make_shared<GplTerm>();
    if (e->kind == TermKind::Const) {
        *t = *e;
        t->value = a * e->value;
        return t;
    }
    if (e->kind == TermKind::Scale) {
        *t = *e;
        t->value = a * e->value;
        return t;
    }
    t->kind = TermKind::Scale;
    t->value = a;
    t->lhs = std::move(e);
    t->line = at.line;
    t->column = at.column;
    return t;
}

class Parser {
public:
    explicit Parser(std::vector<Token> toks)
        : toks_(std::move(toks))
    {}

    GplTermPtr program()
    {
        GplTermPtr t = expr();
        if (peek().kind != Tok::End) {
            fail(std::string("unexpected ") + describe(peek().kind));
        }
        return t;
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;

    const Token& peek() const { return toks_[pos_]; }
    const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    [[noreturn]] void fail(const std::string& msg) const
    {
        throw SyntaxError(msg, peek().line, peek().column);
    }

    const Token& expect(Tok k)
    {
        if (peek().kind != k) {
            fail(std::string("expected ") + describe(k) + ", found " + describe(peek().kind));
        }
        return next();
    }

    GplTermPtr expr()
    {
        if (peek().kind == Tok::Let) {
            return let_expr();
        }
        GplTermPtr first = observe();
        if (peek().kind == Tok::Semi) {
            const Token& at = next();
            return node(TermKind::Seq, at, first, expr());
        }
        return first;
    }

    GplTermPtr let_expr()
    {
        const Token at = expect(Tok::Let);
        const Token name = expect(Tok::Ident);
        expect(Tok::Eq);
        GplTermPtr bound = expr();
        expect(Tok::In);
        GplTermPtr body = expr();
        GplTermPtr t = node(TermKind::Let, at, bound, body);
        std::const_pointer_cast<GplTerm>(t)->name = name.text;
        return t;
    }

    GplTermPtr observe()
    {
        GplTermPtr lhs = sum();
        if (peek().kind == Tok::Observe) {
            const Token& at = next();
            return node(TermKind::Observe, at, lhs, sum());
        }
        return lhs;
    }

    GplTermPtr sum()
    {
        GplTermPtr t = unary();
        while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
            const Token at = next();
            GplTermPtr rhs = unary();
            if (at.kind == Tok::Minus) {
                rhs = scaled_term(-1.0, rhs, at);
            }
            t = node(TermKind::Add, at, t, rhs);
        }
        return t;
    }

    GplTermPtr unary()
    {
        const Token at = peek();
        switch (at.kind) {
        case Tok::Minus:
            next();
            return scaled_term(-1.0, unary(), at);
        case Tok::Number: {
            next();
            if (peek().kind == Tok::Star) {
                next();
                return scaled_term(at.number, unary(), at);
            }
            GplTermPtr c = node(TermKind::Const, at);
            std::const_pointer_cast<GplTerm>(c)->value = at.number;
            return c;
        }
        case Tok::Pi0:
        case Tok::Pi1: {
            next();
            GplTermPtr p = node(TermKind::Proj, at, unary());
            std::const_pointer_cast<GplTerm>(p)->index = at.kind == Tok::Pi0 ? 0 : 1;
            return p;
        }
        case Tok::Let: return let_expr();
        default: break;
        }
        GplTermPtr a = atom();
        if (peek().kind == Tok::Star) {
            fail("scaling needs a numeric literal on the left of '*'");
        }
        return a;
    }

    GplTermPtr atom()
    {
        const Token at = peek();
        switch (at.kind) {
        case Tok::Normal:
            next();
            expect(Tok::LParen);
            expect(Tok::RParen);
            return node(TermKind::Normal, at);
        case Tok::Ident: {
            next();
            GplTermPtr v = node(TermKind::Var, at);
            std::const_pointer_cast<GplTerm>(v)->name = at.text;
            return v;
        }
        case Tok::LParen: {
            next();
            if (peek().kind == Tok::RParen) {
                next();
                return node(TermKind::Unit, at);
            }
            GplTermPtr first = expr();
            if (peek().kind == Tok::Comma) {
                next();
                GplTermPtr second = expr();
                expect(Tok::RParen);
                return node(TermKind::Pair, at, first, second);
            }
            expect(Tok::RParen);
            return first;
        }
        default: fail(std::string("unexpected ") + describe(at.kind));
        }
    }
};

std::string fmt_real(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

GplTermPtr parse_gpl(std::string_view source)
{
    return Parser(Lexer(source).run()).program();
}

std::string print_term(const GplTerm& t)
{
    switch (t.kind) {
    case TermKind::Var: return t.name;
    case TermKind::Add: return "(" + print_term(*t.lhs) + " + " + print_term(*t.rhs) + ")";
    case TermKind::Scale: return "(" + fmt_real(t.value) + " * " + print_term(*t.lhs) + ")";
    case TermKind::Const: return t.value < 0 ? "(" + fmt_real(t.value) + ")" : fmt_real(t.value);
    case TermKind::Pair: return "(" + print_term(*t.lhs) + ", " + print_term(*t.rhs) + ")";
    case TermKind::Unit: return "()";
    case TermKind::Let:
        return "(let " + t.name + " = " + print_term(*t.lhs) + " in " + print_term(*t.rhs) + ")";
    case TermKind::Seq: return "(" + print_term(*t.lhs) + "; " + print_term(*t.rhs) + ")";
    case TermKind::Proj: return "(pi" + std::to_string(t.index) + " " + print_term(*t.lhs) + ")";
    case TermKind::Normal: return "normal()";
    case TermKind::Observe: return "(" + print_term(*t.lhs) + " =:= " + print_term(*t.rhs) + ")";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Typing

namespace {

[[noreturn]] void type_error(const std::string& rule, const std::string& what, const GplTerm& t)
{
    throw TypeError(std::to_string(t.line) + ":" + std::to_string(t.column) + ": rule " + rule + ": " + what +
                    " in '" + print_term(t) + "'");
}

void expect_real(const std::string& rule, const GplTypePtr& ty, const GplTerm& operand, const GplTerm& whole)
{
    if (ty->kind != GplType::Kind::R) {
        type_error(rule, "operand '" + print_term(operand) + "' has type " + ty->to_string() + ", expected R", whole);
    }
}

} // namespace

GplTypePtr typecheck(const GplContext& ctx, const GplTerm& t)
{
    switch (t.kind) {
    case TermKind::Var:
        for (auto it = ctx.rbegin(); it != ctx.rend(); ++it) {
            if (it->first == t.name) {
                return it->second;
            }
        }
        type_error("var", "unbound variable '" + t.name + "'", t);
    case TermKind::Add:
        expect_real("add", typecheck(ctx, *t.lhs), *t.lhs, t);
        expect_real("add", typecheck(ctx, *t.rhs), *t.rhs, t);
        return GplType::real();
    case TermKind::Scale:
        expect_real("scale", typecheck(ctx, *t.lhs), *t.lhs, t);
        return GplType::real();
    case TermKind::Const: return GplType::real();
    case TermKind::Normal: return GplType::real();
    case TermKind::Unit: return GplType::unit();
    case TermKind::Pair: return GplType::pair(typecheck(ctx, *t.lhs), typecheck(ctx, *t.rhs));
    case TermKind::Observe:
        expect_real("observe", typecheck(ctx, *t.lhs), *t.lhs, t);
        expect_real("observe", typecheck(ctx, *t.rhs), *t.rhs, t);
        return GplType::unit();
    case TermKind::Seq: {
        const GplTypePtr first = typecheck(ctx, *t.lhs);
        if (first->kind != GplType::Kind::I) {
            type_error("seq", "left side has type " + first->to_string() + ", expected I", t);
        }
        return typecheck(ctx, *t.rhs);
    }
    case TermKind::Let: {
        GplContext inner = ctx;
        inner.emplace_back(t.name, typecheck(ctx, *t.lhs));
        return typecheck(inner, *t.rhs);
    }
    case TermKind::Proj: {
        const GplTypePtr ty = typecheck(ctx, *t.lhs);
        if (ty->kind != GplType::Kind::Pair) {
            type_error("proj", "operand has type " + ty->to_string() + ", expected a pair", t);
        }
        return t.index == 0 ? ty->first : ty->second;
    }
    }
    type_error("?", "unknown term", t);
}

// ---------------------------------------------------------------------------
// Compilation

namespace {

std::size_t context_dim(const GplContext& ctx)
{
    std::size_t k = 0;
    for (const auto& entry : ctx) {
        k += entry.second->dim();
    }
    return k;
}

// Both operands read the whole context.
Diagram shared(std::size_t k, const Diagram& s, const Diagram& t)
{
    return seq(copy_bus(k), par(s, t));
}

} // namespace

Diagram compile(const GplContext& ctx, const GplTerm& t)
{
    const std::size_t k = context_dim(ctx);
    switch (t.kind) {
    case TermKind::Var: {
        std::size_t offset = k;
        std::size_t width = 0;
        for (std::size_t i = ctx.size(); i-- > 0;) {
            offset -= ctx[i].second->dim();
            if (ctx[i].first == t.name) {
                width = ctx[i].second->dim();
                return par(par(discard_bus(offset), id(width)), discard_bus(k - offset - width));
            }
        }
        type_error("var", "unbound variable '" + t.name + "'", t);
    }
    case TermKind::Add:
        return seq(shared(k, compile(ctx, *t.lhs), compile(ctx, *t.rhs)), gen(GeneratorKind::Add));
    case TermKind::Scale: return seq(compile(ctx, *t.lhs), scalar(t.value));
    case TermKind::Const: {
        const double c[] = {t.value};
        return seq(discard_bus(k), const_diagram(c));
    }
    case TermKind::Pair: return shared(k, compile(ctx, *t.lhs), compile(ctx, *t.rhs));
    case TermKind::Unit: return discard_bus(k);
    case TermKind::Normal: return seq(discard_bus(k), gen(GeneratorKind::Normal));
    case TermKind::Seq: return shared(k, compile(ctx, *t.lhs), compile(ctx, *t.rhs));
    case TermKind::Let: {
        const GplTypePtr bound = typecheck(ctx, *t.lhs);
        GplContext inner = ctx;
        inner.emplace_back(t.name, bound);
        const Diagram extend = seq(copy_bus(k), par(id(k), compile(ctx, *t.lhs)));
        return seq(extend, compile(inner, *t.rhs));
    }
    case TermKind::Proj: {
        const GplTypePtr ty = typecheck(ctx, *t.lhs);
        if (ty->kind != GplType::Kind::Pair) {
            type_error("proj", "operand has type " + ty->to_string() + ", expected a pair", t);
        }
        const std::size_t w0 = ty->first->dim();
        const std::size_t w1 = ty->second->dim();
        const Diagram select = t.index == 0 ? par(id(w0), discard_bus(w1)) : par(discard_bus(w0), id(w1));
        return seq(compile(ctx, *t.lhs), select);
    }
    case TermKind::Observe: {
        const Diagram diff = seq(par(id(1), scalar(-1.0)), gen(GeneratorKind::Add));
        return seq(seq(shared(k, compile(ctx, *t.lhs), compile(ctx, *t.rhs)), diff), gen(GeneratorKind::Cozero));
    }
    }
    type_error("?", "unknown term", t);
}

// ---------------------------------------------------------------------------
// Inference

InferenceResult infer(const GplTerm& program)
{
    InferenceResult r;
    r.type = typecheck({}, program);
    const QuadRelMorphism rel = interpret(compile({}, program));
    if (rel.name.infeasible) {
        throw InfeasibleObservation("observations are contradictory (score is infinite)");
    }
    r.score = rel.name.score;
    r.posterior = rel.name;
    r.posterior.score = 0.0;
    return r;
}

InferenceResult infer(std::string_view source)
{
    return infer(*parse_gpl(source));
}

} // namespace gqa
