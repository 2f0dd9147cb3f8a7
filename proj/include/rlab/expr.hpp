#pragma once

#include <memory>
#include <string>
#include <vector>

#include "rlab/field.hpp"

namespace rlab {

// Grammar:
//   expr   := term (("+" | "-") term)*
//   term   := factor (("*" | "/") factor)*
//   factor := atom ("^" signed-integer)?
//   atom   := integer | "p" | "pi" | "zeta" | "(" expr ")"
struct ExprNode {
    enum class Kind { Int, P, Pi, Zeta, Add, Sub, Mul, Div, Pow, Paren };
    Kind kind;
    mpz_class value;    // Int
    long exponent = 0;  // Pow
    std::vector<std::unique_ptr<ExprNode>> children;
};
using ExprPtr = std::unique_ptr<ExprNode>;

namespace detail {

struct Lexer {
    std::string src;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < src.size() && (src[pos] == ' ' || src[pos] == '\t')) ++pos;
    }
    std::size_t column() const { return pos + 1; }
    bool eof() {
        skip_ws();
        return pos >= src.size();
    }
    char peek() {
        skip_ws();
        return pos < src.size() ? src[pos] : '\0';
    }
    bool accept(char c) {
        if (peek() == c) { ++pos; return true; }
        return false;
    }
};

class Parser {
public:
    explicit Parser(std::string src) { lex_.src = std::move(src); }

    ExprPtr parse() {
        ExprPtr e = parse_expr();
        if (!lex_.eof())
            throw parse_error(std::string("unexpected '") + lex_.peek() + "'",
                              lex_.column());
        return e;
    }

private:
    ExprPtr parse_expr() {
        ExprPtr left = parse_term();
        for (;;) {
            if (lex_.accept('+')) left = binary(ExprNode::Kind::Add, std::move(left), parse_term());
            else if (lex_.accept('-')) left = binary(ExprNode::Kind::Sub, std::move(left), parse_term());
            else return left;
        }
    }
    ExprPtr parse_term() {
        ExprPtr left = parse_factor();
        for (;;) {
            if (lex_.accept('*')) left = binary(ExprNode::Kind::Mul, std::move(left), parse_factor());
            else if (lex_.accept('/')) left = binary(ExprNode::Kind::Div, std::move(left), parse_factor());
            else return left;
        }
    }
    ExprPtr parse_factor() {
        ExprPtr base = parse_atom();
        if (lex_.accept('^')) {
            bool negative = false;
            if (lex_.accept('-')) negative = true;
            else lex_.accept('+');
            if (!isdigit(static_cast<unsigned char>(lex_.peek())))
                throw parse_error("expected integer exponent", lex_.column());
            long v = 0;
            while (lex_.pos < lex_.src.size() &&
                   isdigit(static_cast<unsigned char>(lex_.src[lex_.pos])))
                v = v * 10 + (lex_.src[lex_.pos++] - '0');
            auto n = std::make_unique<ExprNode>();
            n->kind = ExprNode::Kind::Pow;
            n->exponent = negative ? -v : v;
            n->children.push_back(std::move(base));
            return n;
        }
        return base;
    }
    ExprPtr parse_atom() {
        char c = lex_.peek();
        std::size_t col = lex_.column();
        if (c == '(') {
            lex_.accept('(');
            ExprPtr inner = parse_expr();
            if (!lex_.accept(')')) throw parse_error("unbalanced parentheses", lex_.column());
            auto n = std::make_unique<ExprNode>();
            n->kind = ExprNode::Kind::Paren;
            n->children.push_back(std::move(inner));
            return n;
        }
        if (isdigit(static_cast<unsigned char>(c))) {
            std::string digits;
            while (lex_.pos < lex_.src.size() &&
                   isdigit(static_cast<unsigned char>(lex_.src[lex_.pos])))
                digits += lex_.src[lex_.pos++];
            auto n = std::make_unique<ExprNode>();
            n->kind = ExprNode::Kind::Int;
            n->value = mpz_class(digits);
            return n;
        }
        if (isalpha(static_cast<unsigned char>(c))) {
            std::string word;
            while (lex_.pos < lex_.src.size() &&
                   isalpha(static_cast<unsigned char>(lex_.src[lex_.pos])))
                word += lex_.src[lex_.pos++];
            auto n = std::make_unique<ExprNode>();
            if (word == "p") n->kind = ExprNode::Kind::P;
            else if (word == "pi") n->kind = ExprNode::Kind::Pi;
            else if (word == "zeta") n->kind = ExprNode::Kind::Zeta;
            else throw parse_error("unknown token '" + word + "'", col);
            return n;
        }
        throw parse_error(c == '\0' ? std::string("unexpected end of input")
                                    : "unexpected '" + std::string(1, c) + "'",
                          col);
    }

    static ExprPtr binary(ExprNode::Kind k, ExprPtr a, ExprPtr b) {
        auto n = std::make_unique<ExprNode>();
        n->kind = k;
        n->children.push_back(std::move(a));
        n->children.push_back(std::move(b));
        return n;
    }

    Lexer lex_;
};

}  // namespace detail

inline ExprPtr parse_expr(const std::string& src) {
    return detail::Parser(src).parse();
}

inline std::string print_expr(const ExprNode& n) {
    using K = ExprNode::Kind;
    switch (n.kind) {
        case K::Int: return n.value.get_str();
        case K::P: return "p";
        case K::Pi: return "pi";
        case K::Zeta: return "zeta";
        case K::Add: return print_expr(*n.children[0]) + "+" + print_expr(*n.children[1]);
        case K::Sub: return print_expr(*n.children[0]) + "-" + print_expr(*n.children[1]);
        case K::Mul: return print_expr(*n.children[0]) + "*" + print_expr(*n.children[1]);
        case K::Div: return print_expr(*n.children[0]) + "/" + print_expr(*n.children[1]);
        case K::Pow:
            return print_expr(*n.children[0]) + "^" + std::to_string(n.exponent);
        case K::Paren: return "(" + print_expr(*n.children[0]) + ")";
    }
    throw error("print_expr: bad node");
}

inline bool expr_equal(const ExprNode& a, const ExprNode& b) {
    if (a.kind != b.kind || a.value != b.value || a.exponent != b.exponent ||
        a.children.size() != b.children.size())
        return false;
    for (std::size_t i = 0; i < a.children.size(); ++i)
        if (!expr_equal(*a.children[i], *b.children[i])) return false;
    return true;
}

/// Evaluate in O_K[1/p]; division by anything distinguishable from zero is
/// allowed, domain checks happen at the command layer.
inline KElement eval_expr(const ExprNode& n, const TowerPtr& tower) {
    using K = ExprNode::Kind;
    switch (n.kind) {
        case K::Int: return tower->from_int(n.value);
        case K::P: return tower->from_int(tower->p());
        case K::Pi: return tower->pi();
        case K::Zeta: return tower->zeta();
        case K::Add: return add(eval_expr(*n.children[0], tower), eval_expr(*n.children[1], tower));
        case K::Sub: return sub(eval_expr(*n.children[0], tower), eval_expr(*n.children[1], tower));
        case K::Mul: return mul(eval_expr(*n.children[0], tower), eval_expr(*n.children[1], tower));
        case K::Div: return div(eval_expr(*n.children[0], tower), eval_expr(*n.children[1], tower));
        case K::Pow: return pow_elem(eval_expr(*n.children[0], tower), n.exponent);
        case K::Paren: return eval_expr(*n.children[0], tower);
    }
    throw error("eval_expr: bad node");
}

}  // namespace rlab
