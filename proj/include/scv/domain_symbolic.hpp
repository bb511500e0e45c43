#ifndef SCV_DOMAIN_SYMBOLIC_HPP
#define SCV_DOMAIN_SYMBOLIC_HPP

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "scv/errors.hpp"
#include "scv/expr.hpp"
#include "scv/polynomial.hpp"
#include "scv/rng.hpp"
#include "scv/tree_edit.hpp"
#include "scv/trace_model.hpp"

namespace scv {

enum class Equivalence { equivalent, not_equivalent, equivalent_with_domain_caveat };

inline const char* to_string(Equivalence e) {
    switch (e) {
        case Equivalence::equivalent: return "equivalent";
        case Equivalence::not_equivalent: return "not_equivalent";
        case Equivalence::equivalent_with_domain_caveat: return "equivalent_with_domain_caveat";
    }
    return "?";
}

struct EquivOptions {
    std::uint64_t seed = 0x73637665ULL;
    int points = 12;
};

namespace detail {

using Float = boost::multiprecision::cpp_bin_float_50;

inline void collect_variables(const ExprAst& t, std::set<std::string>& out) {
    if (t.kind == ExprAst::Kind::variable) out.insert(t.name);
    for (const auto& c : t.children) collect_variables(c, out);
}

// An integer-literal exponent (possibly negated) keeps evaluation exact.
inline std::optional<Integer> literal_int_exponent(const ExprAst& e) {
    if (e.kind == ExprAst::Kind::number && boost::multiprecision::denominator(e.value) == 1)
        return boost::multiprecision::numerator(e.value);
    if (e.kind == ExprAst::Kind::neg) {
        if (auto inner = literal_int_exponent(e.children[0])) return -*inner;
    }
    return std::nullopt;
}

inline bool needs_numeric_eval(const ExprAst& t) {
    if (t.kind == ExprAst::Kind::func) return true;
    if (t.kind == ExprAst::Kind::pow && !literal_int_exponent(t.children[1])) return true;
    for (const auto& c : t.children)
        if (needs_numeric_eval(c)) return true;
    return false;
}

inline Rational rational_pow(const Rational& base, Integer e) {
    bool invert = e < 0;
    if (invert) e = -e;
    Rational out = 1, b = base;
    while (e > 0) {
        if (e & 1) out *= b;
        e >>= 1;
        if (e > 0) b *= b;
    }
    if (invert) out = Rational(1) / out;
    return out;
}

// nullopt means the expression is undefined at this point.
inline std::optional<Rational> eval_rational(const ExprAst& t,
                                             const std::map<std::string, Rational>& env) {
    using K = ExprAst::Kind;
    switch (t.kind) {
        case K::number: return t.value;
        case K::variable: {
            auto it = env.find(t.name);
            if (it == env.end()) return Rational(0);
            return it->second;
        }
        case K::neg: {
            auto c = eval_rational(t.children[0], env);
            if (!c) return std::nullopt;
            return -*c;
        }
        case K::add: {
            Rational acc = 0;
            for (const auto& ch : t.children) {
                auto c = eval_rational(ch, env);
                if (!c) return std::nullopt;
                acc += *c;
            }
            return acc;
        }
        case K::mul: {
            Rational acc = 1;
            for (const auto& ch : t.children) {
                auto c = eval_rational(ch, env);
                if (!c) return std::nullopt;
                acc *= *c;
            }
            return acc;
        }
        case K::div: {
            auto num = eval_rational(t.children[0], env);
            auto den = eval_rational(t.children[1], env);
            if (!num || !den || *den == 0) return std::nullopt;
            return *num / *den;
        }
        case K::pow: {
            auto base = eval_rational(t.children[0], env);
            auto e = literal_int_exponent(t.children[1]);
            if (!base || !e) return std::nullopt;
            if (*base == 0 && *e <= 0) return std::nullopt;
            return rational_pow(*base, *e);
        }
        case K::func: return std::nullopt;  // callers take the numeric path
    }
    return std::nullopt;
}

inline std::optional<Float> eval_float(const ExprAst& t, const std::map<std::string, Float>& env) {
    using K = ExprAst::Kind;
    using boost::multiprecision::abs;
    switch (t.kind) {
        case K::number:
            return Float(boost::multiprecision::numerator(t.value)) /
                   Float(boost::multiprecision::denominator(t.value));
        case K::variable: {
            auto it = env.find(t.name);
            if (it == env.end()) return Float(0);
            return it->second;
        }
        case K::neg: {
            auto c = eval_float(t.children[0], env);
            if (!c) return std::nullopt;
            return -*c;
        }
        case K::add: {
            Float acc = 0;
            for (const auto& ch : t.children) {
                auto c = eval_float(ch, env);
                if (!c) return std::nullopt;
                acc += *c;
            }
            return acc;
        }
        case K::mul: {
            Float acc = 1;
            for (const auto& ch : t.children) {
                auto c = eval_float(ch, env);
                if (!c) return std::nullopt;
                acc *= *c;
            }
            return acc;
        }
        case K::div: {
            auto num = eval_float(t.children[0], env);
            auto den = eval_float(t.children[1], env);
            if (!num || !den || abs(*den) < Float("1e-40")) return std::nullopt;
            return *num / *den;
        }
        case K::pow: {
            auto base = eval_float(t.children[0], env);
            auto exp = eval_float(t.children[1], env);
            if (!base || !exp) return std::nullopt;
            if (auto e = literal_int_exponent(t.children[1])) {
                if (*base == 0 && *e <= 0) return std::nullopt;
                if (*e > 1000000 || *e < -1000000) return std::nullopt;
                return boost::multiprecision::pow(*base, e->convert_to<int>());
            }
            if (*base > 0) return boost::multiprecision::exp(*exp * boost::multiprecision::log(*base));
            if (*base == 0 && *exp > 0) return Float(0);
            return std::nullopt;  // negative base with non-integer exponent
        }
        case K::func: {
            auto a = eval_float(t.children[0], env);
            if (!a) return std::nullopt;
            if (t.name == "sin") return boost::multiprecision::sin(*a);
            if (t.name == "cos") return boost::multiprecision::cos(*a);
            if (t.name == "tan") {
                Float c = boost::multiprecision::cos(*a);
                if (abs(c) < Float("1e-40")) return std::nullopt;
                return boost::multiprecision::sin(*a) / c;
            }
            if (t.name == "exp") return boost::multiprecision::exp(*a);
            if (t.name == "log") {
                if (*a <= 0) return std::nullopt;
                return boost::multiprecision::log(*a);
            }
            if (t.name == "sqrt") {
                if (*a < 0) return std::nullopt;
                return boost::multiprecision::sqrt(*a);
            }
            return std::nullopt;
        }
    }
    return std::nullopt;
}

inline std::string domain_key(const ExprAst& e) {
    if (auto p = expand(e)) return canonical_string(*p);
    return render(canonical_sort(e));
}

// Constraints under which the expression is undefined or domain-restricted:
// non-constant denominators, log/sqrt/tan arguments, non-integer powers.
inline void singularity_signature(const ExprAst& t, std::set<std::string>& out) {
    using K = ExprAst::Kind;
    if (t.kind == K::div) {
        const ExprAst& den = t.children[1];
        auto p = expand(den);
        if (!p || !poly_as_const(*p)) out.insert("div:" + domain_key(den));
    } else if (t.kind == K::func && (t.name == "log" || t.name == "sqrt" || t.name == "tan")) {
        const ExprAst& arg = t.children[0];
        auto p = expand(arg);
        if (!p || !poly_as_const(*p)) out.insert(t.name + ":" + domain_key(arg));
    } else if (t.kind == K::pow && !literal_int_exponent(t.children[1])) {
        auto p = expand(t.children[0]);
        if (!p || !poly_as_const(*p)) out.insert("pow:" + domain_key(t.children[0]));
    }
    for (const auto& c : t.children) singularity_signature(c, out);
}

} // namespace detail

// Randomized decision at fixed-seed rational points; one-sided error (a
// not_equivalent verdict is certain, an equivalent verdict is probabilistic).
// Equivalence that holds away from differing singular sets earns the caveat.
inline Equivalence randomized_equivalence(const ExprAst& t1, const ExprAst& t2,
                                          const EquivOptions& opts = {}) {
    std::set<std::string> vars;
    detail::collect_variables(t1, vars);
    detail::collect_variables(t2, vars);
    const bool numeric = detail::needs_numeric_eval(t1) || detail::needs_numeric_eval(t2);

    Rng rng(opts.seed);
    const int max_attempts = 2 * opts.points;
    int defined = 0;
    for (int attempt = 0; attempt < max_attempts && defined < opts.points; ++attempt) {
        std::map<std::string, Rational> env;
        for (const auto& v : vars)
            env[v] = Rational(rng.range(-50, 50), rng.range(1, 20));
        if (numeric) {
            std::map<std::string, detail::Float> fenv;
            for (const auto& [k, r] : env)
                fenv[k] = detail::Float(boost::multiprecision::numerator(r)) /
                          detail::Float(boost::multiprecision::denominator(r));
            auto a = detail::eval_float(t1, fenv);
            auto b = detail::eval_float(t2, fenv);
            if (!a || !b) continue;
            detail::Float scale = 1;
            if (boost::multiprecision::abs(*a) > scale) scale = boost::multiprecision::abs(*a);
            if (boost::multiprecision::abs(*b) > scale) scale = boost::multiprecision::abs(*b);
            if (boost::multiprecision::abs(*a - *b) > detail::Float("1e-30") * scale)
                return Equivalence::not_equivalent;
        } else {
            auto a = detail::eval_rational(t1, env);
            auto b = detail::eval_rational(t2, env);
            if (!a || !b) continue;
            if (*a != *b) return Equivalence::not_equivalent;
        }
        ++defined;
    }
    if (defined < opts.points)
        throw EvaluationError("more than half of the sampled evaluation points were undefined");

    std::set<std::string> sig1, sig2;
    detail::singularity_signature(t1, sig1);
    detail::singularity_signature(t2, sig2);
    return sig1 == sig2 ? Equivalence::equivalent : Equivalence::equivalent_with_domain_caveat;
}

// Polynomial inputs are decided exactly by canonical expansion; everything
// else falls back to randomized evaluation.
inline Equivalence algebraic_equivalence(const ExprAst& t1, const ExprAst& t2,
                                         const EquivOptions& opts = {}) {
    auto p1 = expand(t1);
    auto p2 = expand(t2);
    if (p1 && p2) return *p1 == *p2 ? Equivalence::equivalent : Equivalence::not_equivalent;
    return randomized_equivalence(t1, t2, opts);
}

// 1 - TED/(|t1|+|t2|) over canonically sorted trees; null means empty tree.
inline double tree_similarity(const ExprAst* t1, const ExprAst* t2) {
    if (!t1 && !t2) return 1.0;
    if (!t1 || !t2) return 0.0;
    LabelTree a = to_label_tree(canonical_sort(*t1));
    LabelTree b = to_label_tree(canonical_sort(*t2));
    std::size_t total = label_tree_size(a) + label_tree_size(b);
    return 1.0 - double(tree_edit_distance(a, b)) / double(total);
}

inline double tree_similarity(const ExprAst& t1, const ExprAst& t2) {
    return tree_similarity(&t1, &t2);
}

struct SymbolicScore {
    double tree_similarity = 1.0;
    double algebraic_equivalence = 1.0;
    double lambda = 0.5;
    double combined = 1.0;
    bool domain_caveat = false;
    bool degenerate = false;            // fewer than 2 parseable answers
    std::vector<std::string> warnings;  // excluded traces, failed evaluations
};

// Scores over final-answer expressions: TS = mean pairwise tree similarity,
// AE = fraction of pairs judged equivalent (caveat counts, sets the flag).
inline SymbolicScore sc_symbolic(const TraceSet& set, double lambda,
                                 const EquivOptions& opts = {}) {
    if (lambda < 0 || lambda > 1) throw DomainError("lambda must lie in [0,1]");
    SymbolicScore score;
    score.lambda = lambda;
    std::vector<ExprAst> answers;
    for (const auto& t : set.traces) {
        try {
            answers.push_back(parse_expr(t.final_answer));
        } catch (const ParseError& e) {
            score.warnings.push_back("trace '" + t.trace_id + "' excluded: " + e.what());
        }
    }
    const std::size_t k = answers.size();
    if (k < 2) {
        score.degenerate = true;
        score.combined = lambda * score.tree_similarity + (1 - lambda) * score.algebraic_equivalence;
        return score;
    }
    double ts_sum = 0;
    std::size_t eq_pairs = 0, pairs = 0;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            ++pairs;
            ts_sum += tree_similarity(answers[i], answers[j]);
            try {
                Equivalence e = algebraic_equivalence(answers[i], answers[j], opts);
                if (e != Equivalence::not_equivalent) {
                    ++eq_pairs;
                    if (e == Equivalence::equivalent_with_domain_caveat) score.domain_caveat = true;
                }
            } catch (const EvaluationError& e) {
                score.warnings.push_back(std::string("pair evaluation failed: ") + e.what());
            }
        }
    }
    score.tree_similarity = ts_sum / double(pairs);
    score.algebraic_equivalence = double(eq_pairs) / double(pairs);
    score.combined = lambda * score.tree_similarity + (1 - lambda) * score.algebraic_equivalence;
    return score;
}

} // namespace scv

#endif
