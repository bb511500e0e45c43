#ifndef SCV_POLYNOMIAL_HPP
#define SCV_POLYNOMIAL_HPP

#include <map>
#include <optional>
#include <string>

#include "scv/expr.hpp"

namespace scv {

// Canonical multivariate polynomial over exact rationals. Monomial maps
// variable name to exponent; zero coefficients are never stored.
using Monomial = std::map<std::string, unsigned>;
using Poly = std::map<Monomial, Rational>;

inline Poly poly_const(const Rational& c) {
    Poly p;
    if (c != 0) p[Monomial{}] = c;
    return p;
}

inline Poly poly_var(const std::string& name) {
    Poly p;
    p[Monomial{{name, 1}}] = 1;
    return p;
}

inline Poly poly_add(const Poly& a, const Poly& b) {
    Poly out = a;
    for (const auto& [m, c] : b) {
        auto it = out.find(m);
        if (it == out.end()) {
            out.emplace(m, c);
        } else {
            it->second += c;
            if (it->second == 0) out.erase(it);
        }
    }
    return out;
}

inline Poly poly_neg(const Poly& a) {
    Poly out = a;
    for (auto& [m, c] : out) c = -c;
    return out;
}

inline Poly poly_mul(const Poly& a, const Poly& b) {
    Poly out;
    for (const auto& [ma, ca] : a) {
        for (const auto& [mb, cb] : b) {
            Monomial m = ma;
            for (const auto& [v, e] : mb) m[v] += e;
            auto it = out.find(m);
            if (it == out.end()) {
                out.emplace(std::move(m), ca * cb);
            } else {
                it->second += ca * cb;
                if (it->second == 0) out.erase(it);
            }
        }
    }
    return out;
}

inline Poly poly_pow(Poly base, unsigned e) {
    Poly out = poly_const(1);
    while (e) {
        if (e & 1) out = poly_mul(out, base);
        e >>= 1;
        if (e) base = poly_mul(base, base);
    }
    return out;
}

inline std::optional<Rational> poly_as_const(const Poly& p) {
    if (p.empty()) return Rational(0);
    if (p.size() == 1 && p.begin()->first.empty()) return p.begin()->second;
    return std::nullopt;
}

// Expands an AST into canonical polynomial form; nullopt when the expression
// is not a polynomial (functions, division by a non-constant, non-integer
// or oversized exponents).
inline std::optional<Poly> expand(const ExprAst& t) {
    using K = ExprAst::Kind;
    constexpr unsigned kMaxExponent = 200;
    switch (t.kind) {
        case K::number: return poly_const(t.value);
        case K::variable: return poly_var(t.name);
        case K::neg: {
            auto c = expand(t.children[0]);
            if (!c) return std::nullopt;
            return poly_neg(*c);
        }
        case K::add: {
            Poly acc;
            for (const auto& ch : t.children) {
                auto c = expand(ch);
                if (!c) return std::nullopt;
                acc = poly_add(acc, *c);
            }
            return acc;
        }
        case K::mul: {
            Poly acc = poly_const(1);
            for (const auto& ch : t.children) {
                auto c = expand(ch);
                if (!c) return std::nullopt;
                acc = poly_mul(acc, *c);
            }
            return acc;
        }
        case K::pow: {
            auto base = expand(t.children[0]);
            auto exp = expand(t.children[1]);
            if (!base || !exp) return std::nullopt;
            auto ec = poly_as_const(*exp);
            if (!ec || boost::multiprecision::denominator(*ec) != 1) return std::nullopt;
            Integer e = boost::multiprecision::numerator(*ec);
            if (e >= 0) {
                if (e > kMaxExponent) return std::nullopt;
                return poly_pow(*base, static_cast<unsigned>(e));
            }
            auto bc = poly_as_const(*base);
            if (!bc || *bc == 0 || -e > kMaxExponent) return std::nullopt;
            Rational inv = Rational(boost::multiprecision::denominator(*bc),
                                    boost::multiprecision::numerator(*bc));
            Poly invp = poly_const(inv);
            return poly_pow(invp, static_cast<unsigned>(-e));
        }
        case K::div: {
            auto num = expand(t.children[0]);
            auto den = expand(t.children[1]);
            if (!num || !den) return std::nullopt;
            auto dc = poly_as_const(*den);
            if (!dc || *dc == 0) return std::nullopt;
            Rational inv = Rational(boost::multiprecision::denominator(*dc),
                                    boost::multiprecision::numerator(*dc));
            return poly_mul(*num, poly_const(inv));
        }
        case K::func: return std::nullopt;
    }
    return std::nullopt;
}

inline std::string canonical_string(const Poly& p) {
    if (p.empty()) return "0";
    std::string out;
    for (const auto& [m, c] : p) {
        if (!out.empty()) out += " + ";
        out += c.str();
        for (const auto& [v, e] : m) {
            out += "*" + v;
            if (e != 1) out += "^" + std::to_string(e);
        }
    }
    return out;
}

} // namespace scv

#endif
