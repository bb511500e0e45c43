#ifndef SCV_EXPR_HPP
#define SCV_EXPR_HPP

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "scv/errors.hpp"

namespace scv {

using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

// Ordered labeled tree for a mathematical expression. add/mul are n-ary
// (>= 2 children) and flattened; binary minus is desugared to add + neg.
struct ExprAst {
    enum class Kind { number, variable, add, mul, pow, neg, div, func };

    Kind kind = Kind::number;
    Rational value;            // number
    std::string name;          // variable or function
    std::vector<ExprAst> children;

    bool operator==(const ExprAst&) const = default;
};

inline ExprAst make_number(Rational v) {
    ExprAst e;
    e.kind = ExprAst::Kind::number;
    e.value = std::move(v);
    return e;
}

inline ExprAst make_variable(std::string name) {
    ExprAst e;
    e.kind = ExprAst::Kind::variable;
    e.name = std::move(name);
    return e;
}

inline ExprAst make_node(ExprAst::Kind kind, std::vector<ExprAst> children, std::string name = {}) {
    ExprAst e;
    e.kind = kind;
    e.name = std::move(name);
    e.children = std::move(children);
    return e;
}

// Flattens nested adds/muls and collapses singletons.
inline ExprAst make_nary(ExprAst::Kind kind, std::vector<ExprAst> parts) {
    std::vector<ExprAst> flat;
    for (auto& p : parts) {
        if (p.kind == kind)
            for (auto& c : p.children) flat.push_back(std::move(c));
        else
            flat.push_back(std::move(p));
    }
    if (flat.size() == 1) return std::move(flat[0]);
    return make_node(kind, std::move(flat));
}

inline std::size_t node_count(const ExprAst& t) {
    std::size_t n = 1;
    for (const auto& c : t.children) n += node_count(c);
    return n;
}

inline const std::set<std::string>& known_functions() {
    static const std::set<std::string> fns = {"sin", "cos", "tan", "exp", "log", "sqrt"};
    return fns;
}

namespace detail {

struct ExprParser {
    std::string_view src;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }

    char peek() {
        skip_ws();
        return pos < src.size() ? src[pos] : '\0';
    }

    bool starts_operand() {
        char c = peek();
        return std::isdigit(static_cast<unsigned char>(c)) ||
               std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '(';
    }

    [[noreturn]] void fail(const std::string& expected) {
        throw ParseError("parse error", pos, expected);
    }

    ExprAst parse_number() {
        std::size_t start = pos;
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
        Integer num = 0;
        for (std::size_t i = start; i < pos; ++i) num = num * 10 + (src[i] - '0');
        Integer den = 1;
        if (pos < src.size() && src[pos] == '.') {
            ++pos;
            std::size_t frac_start = pos;
            while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
            if (pos == frac_start) fail("digits after decimal point");
            for (std::size_t i = frac_start; i < pos; ++i) {
                num = num * 10 + (src[i] - '0');
                den *= 10;
            }
        }
        return make_number(Rational(num, den));
    }

    std::string parse_ident() {
        std::size_t start = pos;
        while (pos < src.size() &&
               (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
            ++pos;
        return std::string(src.substr(start, pos - start));
    }

    ExprAst parse_primary() {
        char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c))) return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string name = parse_ident();
            if (known_functions().count(name)) {
                skip_ws();
                if (pos >= src.size() || src[pos] != '(') fail("'(' after function name");
                ++pos;
                std::vector<ExprAst> args;
                args.push_back(parse_sum());
                while (peek() == ',') {
                    ++pos;
                    args.push_back(parse_sum());
                }
                if (peek() != ')') fail("')'");
                ++pos;
                return make_node(ExprAst::Kind::func, std::move(args), name);
            }
            return make_variable(name);
        }
        if (c == '(') {
            ++pos;
            ExprAst inner = parse_sum();
            if (peek() != ')') fail("')'");
            ++pos;
            return inner;
        }
        fail("operand");
    }

    ExprAst parse_power() {
        ExprAst base = parse_primary();
        if (peek() == '^') {
            ++pos;
            ExprAst exponent = parse_unary();  // right-associative; allows x^-2
            return make_node(ExprAst::Kind::pow, {std::move(base), std::move(exponent)});
        }
        return base;
    }

    ExprAst parse_unary() {
        if (peek() == '-') {
            ++pos;
            return make_node(ExprAst::Kind::neg, {parse_unary()});
        }
        return parse_power();
    }

    ExprAst parse_product() {
        ExprAst acc = parse_unary();
        std::vector<ExprAst> factors;
        factors.push_back(std::move(acc));
        for (;;) {
            char c = peek();
            if (c == '*') {
                ++pos;
                factors.push_back(parse_unary());
            } else if (c == '/') {
                ++pos;
                ExprAst denom = parse_unary();
                ExprAst numer = make_nary(ExprAst::Kind::mul, std::move(factors));
                factors.clear();
                factors.push_back(
                    make_node(ExprAst::Kind::div, {std::move(numer), std::move(denom)}));
            } else if (starts_operand()) {
                // implicit multiplication: 2x, (a+b)(a-b), 2(x+1)
                factors.push_back(parse_power());
            } else {
                break;
            }
        }
        return make_nary(ExprAst::Kind::mul, std::move(factors));
    }

    ExprAst parse_sum() {
        std::vector<ExprAst> terms;
        terms.push_back(parse_product());
        for (;;) {
            char c = peek();
            if (c == '+') {
                ++pos;
                terms.push_back(parse_product());
            } else if (c == '-') {
                ++pos;
                terms.push_back(make_node(ExprAst::Kind::neg, {parse_product()}));
            } else {
                break;
            }
        }
        return make_nary(ExprAst::Kind::add, std::move(terms));
    }
};

} // namespace detail

inline ExprAst parse_expr(std::string_view text) {
    detail::ExprParser p{text};
    if (p.peek() == '\0') throw ParseError("empty expression", 0, "operand");
    ExprAst e = p.parse_sum();
    if (p.peek() != '\0') p.fail("end of input");
    return e;
}

namespace detail {

// Rationals produced by the parser have denominators dividing a power of 10,
// so they render back as exact decimal literals.
inline std::string render_rational(const Rational& r) {
    Integer num = boost::multiprecision::numerator(r);
    Integer den = boost::multiprecision::denominator(r);
    std::string sign = num < 0 ? "-" : "";
    if (num < 0) num = -num;
    if (den == 1) return sign + num.str();
    Integer d = den;
    int twos = 0, fives = 0;
    while (d % 2 == 0) { d /= 2; ++twos; }
    while (d % 5 == 0) { d /= 5; ++fives; }
    if (d == 1) {
        int digits = std::max(twos, fives);
        Integer scale = 1;
        for (int i = 0; i < digits; ++i) scale *= 10;
        Integer scaled = num * scale / den;
        std::string s = scaled.str();
        while (int(s.size()) <= digits) s = "0" + s;
        s.insert(s.size() - std::size_t(digits), ".");
        return sign + s;
    }
    return "(" + sign + num.str() + "/" + den.str() + ")";
}

} // namespace detail

// Fully parenthesized rendering; parse(render(t)) == t for parser output.
inline std::string render(const ExprAst& t) {
    using K = ExprAst::Kind;
    switch (t.kind) {
        case K::number: return detail::render_rational(t.value);
        case K::variable: return t.name;
        case K::neg: return "(-" + render(t.children[0]) + ")";
        case K::pow: return "(" + render(t.children[0]) + "^" + render(t.children[1]) + ")";
        case K::div: return "(" + render(t.children[0]) + "/" + render(t.children[1]) + ")";
        case K::add:
        case K::mul: {
            const char* op = t.kind == K::add ? "+" : "*";
            std::string s = "(";
            for (std::size_t i = 0; i < t.children.size(); ++i) {
                if (i) s += op;
                s += render(t.children[i]);
            }
            return s + ")";
        }
        case K::func: {
            std::string s = t.name + "(";
            for (std::size_t i = 0; i < t.children.size(); ++i) {
                if (i) s += ",";
                s += render(t.children[i]);
            }
            return s + ")";
        }
    }
    return "?";
}

// Sorts add/mul children canonically (kind rank, then rendered form) so
// commutative reordering does not affect structural comparison.
inline ExprAst canonical_sort(const ExprAst& t) {
    ExprAst out = t;
    for (auto& c : out.children) c = canonical_sort(c);
    if (out.kind == ExprAst::Kind::add || out.kind == ExprAst::Kind::mul) {
        std::stable_sort(out.children.begin(), out.children.end(),
                         [](const ExprAst& a, const ExprAst& b) {
                             if (a.kind != b.kind) return int(a.kind) < int(b.kind);
                             return render(a) < render(b);
                         });
    }
    return out;
}

// TED node label
inline std::string expr_label(const ExprAst& t) {
    using K = ExprAst::Kind;
    switch (t.kind) {
        case K::number: return "num:" + detail::render_rational(t.value);
        case K::variable: return "var:" + t.name;
        case K::add: return "+";
        case K::mul: return "*";
        case K::pow: return "^";
        case K::neg: return "neg";
        case K::div: return "/";
        case K::func: return "fn:" + t.name;
    }
    return "?";
}

} // namespace scv

#endif
