#include "qs3/expr.hpp"

#include "qs3/errors.hpp"

#include <cctype>
#include <cmath>

namespace qs3 {

ExprPtr Expr::rat(const Rational& r) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Rat;
    e->value = r;
    return e;
}

ExprPtr Expr::coord_ref(std::uint32_t index) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Coord;
    e->coord = index;
    return e;
}

ExprPtr Expr::trig(Kind k, std::uint32_t index) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->coord = index;
    return e;
}

ExprPtr Expr::binary(Kind k, ExprPtr lhs, ExprPtr rhs) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->a = std::move(lhs);
    e->b = std::move(rhs);
    return e;
}

ExprPtr Expr::negate(ExprPtr inner) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Neg;
    e->a = std::move(inner);
    return e;
}

ScalarExpr normalize(const ExprPtr& e) {
    switch (e->kind) {
        case Expr::Kind::Rat: return ScalarExpr::from_rational(e->value);
        case Expr::Kind::Coord: return ScalarExpr::coord(e->coord);
        case Expr::Kind::Sin: return ScalarExpr::sin_of(e->coord);
        case Expr::Kind::Cos: return ScalarExpr::cos_of(e->coord);
        case Expr::Kind::Tan: return ScalarExpr::sin_of(e->coord) / ScalarExpr::cos_of(e->coord);
        case Expr::Kind::Cot: return ScalarExpr::cos_of(e->coord) / ScalarExpr::sin_of(e->coord);
        case Expr::Kind::Add: return normalize(e->a) + normalize(e->b);
        case Expr::Kind::Sub: return normalize(e->a) - normalize(e->b);
        case Expr::Kind::Mul: return normalize(e->a) * normalize(e->b);
        case Expr::Kind::Div: return normalize(e->a) / normalize(e->b);
        case Expr::Kind::Neg: return -normalize(e->a);
    }
    throw Error(ErrorCode::UnsupportedExpression, "unknown expression node");
}

double eval_tree(const ExprPtr& e, const std::vector<double>& point) {
    switch (e->kind) {
        case Expr::Kind::Rat: return to_double(e->value);
        case Expr::Kind::Coord: return point.at(e->coord);
        case Expr::Kind::Sin: return std::sin(point.at(e->coord));
        case Expr::Kind::Cos: return std::cos(point.at(e->coord));
        case Expr::Kind::Tan: return std::tan(point.at(e->coord));
        case Expr::Kind::Cot: return std::cos(point.at(e->coord)) / std::sin(point.at(e->coord));
        case Expr::Kind::Add: return eval_tree(e->a, point) + eval_tree(e->b, point);
        case Expr::Kind::Sub: return eval_tree(e->a, point) - eval_tree(e->b, point);
        case Expr::Kind::Mul: return eval_tree(e->a, point) * eval_tree(e->b, point);
        case Expr::Kind::Div: return eval_tree(e->a, point) / eval_tree(e->b, point);
        case Expr::Kind::Neg: return -eval_tree(e->a, point);
    }
    return 0.0;
}

namespace {

struct Token {
    enum class Kind { Ident, Int, Punct, End } kind;
    std::string text;
    char punct = 0;
    int col = 0;
};

class Lexer {
 public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& peek() const { return tok_; }

    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

    bool at_punct(char c) const { return tok_.kind == Token::Kind::Punct && tok_.punct == c; }

 private:
    void advance() {
        while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t')) ++pos_;
        tok_.col = static_cast<int>(pos_) + 1;
        if (pos_ >= src_.size() || src_[pos_] == '\n' || src_[pos_] == '#') {
            tok_.kind = Token::Kind::End;
            tok_.text.clear();
            return;
        }
        char c = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            tok_.kind = Token::Kind::Ident;
            tok_.text = src_.substr(start, pos_ - start);
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            tok_.kind = Token::Kind::Int;
            tok_.text = src_.substr(start, pos_ - start);
            return;
        }
        static const std::string puncts = "+-*/()=,[]";
        if (puncts.find(c) != std::string::npos) {
            tok_.kind = Token::Kind::Punct;
            tok_.punct = c;
            tok_.text = std::string(1, c);
            ++pos_;
            return;
        }
        throw Error(ErrorCode::SyntaxError,
                    "unexpected character '" + std::string(1, c) + "' at column " +
                        std::to_string(pos_ + 1));
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    Token tok_;
};

bool is_trig_name(const std::string& s) {
    return s == "sin" || s == "cos" || s == "tan" || s == "cot";
}

class Parser {
 public:
    Parser(const std::string& src, const ExprSymbols& syms, const std::vector<std::string>* basis)
        : lex_(src), syms_(syms), basis_(basis) {}

    ExprPtr parse_scalar() {
        ExprPtr e = expr();
        expect_end();
        return e;
    }

    std::vector<ExprPtr> parse_vector() {
        std::vector<ExprPtr> out(basis_->size());
        bool negative = false;
        if (lex_.at_punct('-')) {
            lex_.take();
            negative = true;
        }
        vterm(out, negative);
        while (lex_.at_punct('+') || lex_.at_punct('-')) {
            bool neg = lex_.take().punct == '-';
            vterm(out, neg);
        }
        expect_end();
        return out;
    }

 private:
    [[noreturn]] void fail(const std::string& msg, int col) {
        throw Error(ErrorCode::SyntaxError, msg + " at column " + std::to_string(col));
    }

    void expect_end() {
        if (lex_.peek().kind != Token::Kind::End)
            fail("unexpected trailing input", lex_.peek().col);
    }

    char expect_punct(const char* what) {
        Token t = lex_.take();
        if (t.kind != Token::Kind::Punct) fail(std::string("expected ") + what, t.col);
        return t.punct;
    }

    int coord_index(const std::string& name) const {
        if (!syms_.coords) return -1;
        for (std::size_t i = 0; i < syms_.coords->size(); ++i)
            if ((*syms_.coords)[i] == name) return static_cast<int>(i);
        return -1;
    }

    int basis_index(const std::string& name) const {
        if (!basis_) return -1;
        for (std::size_t i = 0; i < basis_->size(); ++i)
            if ((*basis_)[i] == name) return static_cast<int>(i);
        return -1;
    }

    ExprPtr expr() {
        ExprPtr e = term();
        while (lex_.at_punct('+') || lex_.at_punct('-')) {
            char op = lex_.take().punct;
            ExprPtr rhs = term();
            e = Expr::binary(op == '+' ? Expr::Kind::Add : Expr::Kind::Sub, e, rhs);
        }
        return e;
    }

    ExprPtr term() {
        ExprPtr e = factor();
        while (lex_.at_punct('*') || lex_.at_punct('/')) {
            char op = lex_.take().punct;
            ExprPtr rhs = factor();
            e = Expr::binary(op == '*' ? Expr::Kind::Mul : Expr::Kind::Div, e, rhs);
        }
        return e;
    }

    ExprPtr factor() {
        Token t = lex_.take();
        if (t.kind == Token::Kind::Int) {
            BigInt v = 0;
            for (char c : t.text) v = v * 10 + (c - '0');
            return Expr::rat(Rational(v));
        }
        if (t.kind == Token::Kind::Punct && t.punct == '-') return Expr::negate(factor());
        if (t.kind == Token::Kind::Punct && t.punct == '(') {
            ExprPtr e = expr();
            if (expect_punct("')'") != ')') fail("expected ')'", lex_.peek().col);
            return e;
        }
        if (t.kind == Token::Kind::Ident) {
            if (is_trig_name(t.text)) return trig_factor(t);
            int ci = coord_index(t.text);
            if (ci >= 0) return Expr::coord_ref(static_cast<std::uint32_t>(ci));
            if (syms_.params) {
                auto it = syms_.params->find(t.text);
                if (it != syms_.params->end()) return Expr::rat(it->second);
            }
            throw Error(ErrorCode::UndeclaredSymbol,
                        "'" + t.text + "' is not a declared coordinate or parameter (column " +
                            std::to_string(t.col) + ")");
        }
        fail("expected a factor", t.col);
    }

    ExprPtr trig_factor(const Token& name) {
        if (!lex_.at_punct('(')) fail("expected '(' after " + name.text, lex_.peek().col);
        lex_.take();
        Token arg = lex_.take();
        if (arg.kind != Token::Kind::Ident)
            throw Error(ErrorCode::UnsupportedExpression,
                        name.text + " argument must be a single coordinate (column " +
                            std::to_string(arg.col) + ")");
        int ci = coord_index(arg.text);
        if (ci < 0) {
            if (basis_index(arg.text) >= 0 || (syms_.params && syms_.params->count(arg.text)))
                throw Error(ErrorCode::UnsupportedExpression,
                            name.text + " argument must be a coordinate, got '" + arg.text + "'");
            throw Error(ErrorCode::UndeclaredSymbol, "'" + arg.text + "' is not a declared coordinate");
        }
        if (!lex_.at_punct(')'))
            throw Error(ErrorCode::UnsupportedExpression,
                        name.text + " argument must be a single coordinate (column " +
                            std::to_string(lex_.peek().col) + ")");
        lex_.take();
        Expr::Kind k = name.text == "sin"   ? Expr::Kind::Sin
                       : name.text == "cos" ? Expr::Kind::Cos
                       : name.text == "tan" ? Expr::Kind::Tan
                                            : Expr::Kind::Cot;
        return Expr::trig(k, static_cast<std::uint32_t>(ci));
    }

    // One additive term of a vector expression: a '*'/'/' chain with exactly
    // one basis field, or the literal 0.
    void vterm(std::vector<ExprPtr>& out, bool negative) {
        ExprPtr coeff;
        int basis = -1;
        char pending_op = '*';
        bool first = true;
        for (;;) {
            const Token& t = lex_.peek();
            int bi = (t.kind == Token::Kind::Ident && !is_trig_name(t.text)) ? basis_index(t.text) : -1;
            if (bi >= 0) {
                Token taken = lex_.take();
                if (basis >= 0) fail("more than one frame field in a term", taken.col);
                if (pending_op == '/') fail("frame field cannot be a divisor", taken.col);
                basis = bi;
            } else {
                ExprPtr f = factor();
                if (!coeff) {
                    if (pending_op == '/') f = Expr::binary(Expr::Kind::Div, Expr::rat(Rational(1)), f);
                    coeff = f;
                } else {
                    coeff = Expr::binary(pending_op == '*' ? Expr::Kind::Mul : Expr::Kind::Div, coeff, f);
                }
            }
            first = false;
            if (lex_.at_punct('*') || lex_.at_punct('/')) {
                pending_op = lex_.take().punct;
                continue;
            }
            break;
        }
        (void)first;
        if (basis < 0) {
            // Allow a literal zero term; anything else has no direction.
            if (coeff && coeff->kind == Expr::Kind::Rat && coeff->value == 0) return;
            fail("term does not name a frame field", lex_.peek().col);
        }
        if (!coeff) coeff = Expr::rat(Rational(1));
        if (negative) coeff = Expr::negate(coeff);
        out[basis] = out[basis] ? Expr::binary(Expr::Kind::Add, out[basis], coeff) : coeff;
    }

    Lexer lex_;
    ExprSymbols syms_;
    const std::vector<std::string>* basis_;
};

}  // namespace

ExprPtr parse_scalar_source(const std::string& src, const ExprSymbols& syms) {
    Parser p(src, syms, nullptr);
    return p.parse_scalar();
}

std::vector<ExprPtr> parse_vector_source(const std::string& src, const ExprSymbols& syms,
                                         const std::vector<std::string>& basis) {
    Parser p(src, syms, &basis);
    return p.parse_vector();
}

}  // namespace qs3
