#pragma once

// Textual serialization of expression trees, s-expression style. This is
// the exact grammar accepted by the CLI --fn flag and emitted in reports:
//
//   expr    := "z"                      the variable
//            | number                   constant
//            | "(+ " expr " " expr ")"  addition
//            | "(* " expr " " expr ")"  multiplication
//            | "(^ " expr " " int ")"   integer power, exponent nonzero
//            | "(exp " expr ")" | "(sin " expr ")" | "(cos " expr ")"
//            | "(poly " number* ")"     polynomial, lowest degree first
//            | "(wp " expr ")"          Weierstrass wp (equianharmonic)
//            | "(wpp " expr ")"         Weierstrass wp'
//            | "(shift " expr " " number ")"   evaluate expr at z + offset
//   number  := float | float ("+"|"-") float "i" | float "i"
//
// Numbers print with 15 significant digits.

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fermat/expr.hpp"

namespace fermat {

/// Format a complex constant: "1.5", "2i", "1+2i", "-1.5-0.5i".
inline std::string format_cplx(cplx v) {
    const double re = v.real() == 0.0 ? 0.0 : v.real();
    const double im = v.imag() == 0.0 ? 0.0 : v.imag();
    char buf[80];
    if (im == 0.0) {
        std::snprintf(buf, sizeof buf, "%.15g", re);
    } else if (re == 0.0) {
        std::snprintf(buf, sizeof buf, "%.15gi", im);
    } else {
        std::snprintf(buf, sizeof buf, "%.15g%+.15gi", re, im);
    }
    return buf;
}

/// Parse a complex literal; the whole string must be consumed.
inline cplx parse_cplx(std::string_view s) {
    const std::string tmp(s);
    const char* p = tmp.c_str();
    char* end = nullptr;
    const double first = std::strtod(p, &end);
    if (end == p) throw std::invalid_argument("bad complex literal: " + tmp);
    if (*end == '\0') return cplx(first, 0.0);
    if (*end == 'i' && end[1] == '\0') return cplx(0.0, first);
    if (*end == '+' || *end == '-') {
        const char* q = end;
        char* end2 = nullptr;
        const double second = std::strtod(q, &end2);
        if (end2 != q && *end2 == 'i' && end2[1] == '\0') return cplx(first, second);
    }
    throw std::invalid_argument("bad complex literal: " + tmp);
}

inline std::string to_sexpr(const Expr& e) {
    const Expr::Node& n = e.node();
    switch (n.type) {
        case NodeType::Constant:
            return format_cplx(n.value);
        case NodeType::Variable:
            return "z";
        case NodeType::Add:
            return "(+ " + to_sexpr(e.child_a()) + " " + to_sexpr(e.child_b()) + ")";
        case NodeType::Mul:
            return "(* " + to_sexpr(e.child_a()) + " " + to_sexpr(e.child_b()) + ")";
        case NodeType::Pow:
            return "(^ " + to_sexpr(e.child_a()) + " " + std::to_string(n.exponent) + ")";
        case NodeType::Exp:
            return "(exp " + to_sexpr(e.child_a()) + ")";
        case NodeType::Sin:
            return "(sin " + to_sexpr(e.child_a()) + ")";
        case NodeType::Cos:
            return "(cos " + to_sexpr(e.child_a()) + ")";
        case NodeType::Polynomial: {
            std::string out = "(poly";
            for (const cplx& c : n.coeffs) out += " " + format_cplx(c);
            return out + ")";
        }
        case NodeType::Wp:
            return "(wp " + to_sexpr(e.child_a()) + ")";
        case NodeType::WpPrime:
            return "(wpp " + to_sexpr(e.child_a()) + ")";
        case NodeType::Shift:
            return "(shift " + to_sexpr(e.child_a()) + " " + format_cplx(n.value) + ")";
    }
    throw std::logic_error("to_sexpr: malformed expression tree");
}

namespace detail {

struct SexprTokens {
    std::vector<std::string> toks;
    std::size_t pos = 0;

    explicit SexprTokens(std::string_view s) {
        std::string cur;
        auto flush = [&] {
            if (!cur.empty()) {
                toks.push_back(cur);
                cur.clear();
            }
        };
        for (char c : s) {
            if (c == '(' || c == ')') {
                flush();
                toks.push_back(std::string(1, c));
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                flush();
            } else {
                cur.push_back(c);
            }
        }
        flush();
    }
    bool done() const { return pos >= toks.size(); }
    const std::string& peek() const {
        if (done()) throw std::invalid_argument("s-expression: unexpected end of input");
        return toks[pos];
    }
    std::string next() {
        std::string t = peek();
        ++pos;
        return t;
    }
    void expect(const char* t) {
        if (next() != t) throw std::invalid_argument(std::string("s-expression: expected ") + t);
    }
};

inline Expr parse_sexpr_node(SexprTokens& t) {
    std::string tok = t.next();
    if (tok == "z") return Expr::variable();
    if (tok != "(") return Expr::constant(parse_cplx(tok));
    const std::string op = t.next();
    if (op == "+") {
        Expr a = parse_sexpr_node(t);
        Expr b = parse_sexpr_node(t);
        t.expect(")");
        return Expr::add(std::move(a), std::move(b));
    }
    if (op == "*") {
        Expr a = parse_sexpr_node(t);
        Expr b = parse_sexpr_node(t);
        t.expect(")");
        return Expr::mul(std::move(a), std::move(b));
    }
    if (op == "^") {
        Expr a = parse_sexpr_node(t);
        const std::string k = t.next();
        t.expect(")");
        std::size_t used = 0;
        int kk = 0;
        try {
            kk = std::stoi(k, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("s-expression: bad exponent " + k);
        }
        if (used != k.size()) throw std::invalid_argument("s-expression: bad exponent " + k);
        return Expr::pow(std::move(a), kk);
    }
    if (op == "exp" || op == "sin" || op == "cos" || op == "wp" || op == "wpp") {
        Expr a = parse_sexpr_node(t);
        t.expect(")");
        if (op == "exp") return Expr::exp(std::move(a));
        if (op == "sin") return Expr::sin(std::move(a));
        if (op == "cos") return Expr::cos(std::move(a));
        if (op == "wp") return Expr::wp(std::move(a));
        return Expr::wp_prime(std::move(a));
    }
    if (op == "poly") {
        std::vector<cplx> coeffs;
        while (t.peek() != ")") coeffs.push_back(parse_cplx(t.next()));
        t.expect(")");
        return Expr::polynomial(std::move(coeffs));
    }
    if (op == "shift") {
        Expr a = parse_sexpr_node(t);
        const cplx off = parse_cplx(t.next());
        t.expect(")");
        return Expr::shift(std::move(a), off);
    }
    throw std::invalid_argument("s-expression: unknown operator " + op);
}

}  // namespace detail

/// Parse the grammar above; throws std::invalid_argument on syntax errors.
inline Expr parse_expr(std::string_view s) {
    detail::SexprTokens t(s);
    Expr e = detail::parse_sexpr_node(t);
    if (!t.done()) throw std::invalid_argument("s-expression: trailing tokens");
    return e;
}

}  // namespace fermat
