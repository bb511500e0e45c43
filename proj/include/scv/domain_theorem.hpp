#ifndef SCV_DOMAIN_THEOREM_HPP
#define SCV_DOMAIN_THEOREM_HPP

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scv/consistency.hpp"
#include "scv/domain_symbolic.hpp"
#include "scv/errors.hpp"
#include "scv/trace_model.hpp"

namespace scv {

enum class InferenceRule {
    modus_ponens,
    and_intro,
    and_elim,
    or_intro,
    substitution_of_equals,
    hypothesis,
    arithmetic_fact,
    unknown
};

inline InferenceRule inference_rule_from(const std::string& s) {
    if (s == "modus_ponens") return InferenceRule::modus_ponens;
    if (s == "and_intro") return InferenceRule::and_intro;
    if (s == "and_elim") return InferenceRule::and_elim;
    if (s == "or_intro") return InferenceRule::or_intro;
    if (s == "substitution_of_equals") return InferenceRule::substitution_of_equals;
    if (s == "hypothesis") return InferenceRule::hypothesis;
    if (s == "arithmetic_fact") return InferenceRule::arithmetic_fact;
    return InferenceRule::unknown;
}

namespace detail {

inline std::string normalize_prop(const std::string& text) {
    std::string out;
    for (char ch : text) {
        unsigned char c = static_cast<unsigned char>(ch);
        if (std::isspace(c)) {
            if (!out.empty() && out.back() != ' ') out += ' ';
        } else {
            out += char(std::tolower(c));
        }
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

inline std::string strip_parens(std::string s);

// Splits a normalized proposition on a top-level connective (respecting
// parentheses). Connectives: "->"/"=>"/"implies", "and"/"&", "or"/"|".
inline std::optional<std::pair<std::string, std::string>> split_top(
    const std::string& prop, const std::vector<std::string>& connectives) {
    int depth = 0;
    for (std::size_t i = 0; i < prop.size(); ++i) {
        if (prop[i] == '(') ++depth;
        if (prop[i] == ')') --depth;
        if (depth != 0) continue;
        for (const auto& conn : connectives) {
            if (prop.compare(i, conn.size(), conn) != 0) continue;
            // word connectives need surrounding spaces already normalized in
            if (std::isalpha(static_cast<unsigned char>(conn[0]))) {
                bool left_ok = i > 0 && prop[i - 1] == ' ';
                bool right_ok = i + conn.size() < prop.size() && prop[i + conn.size()] == ' ';
                if (!left_ok || !right_ok) continue;
            }
            std::string lhs = prop.substr(0, i);
            std::string rhs = prop.substr(i + conn.size());
            while (!lhs.empty() && lhs.back() == ' ') lhs.pop_back();
            while (!rhs.empty() && rhs.front() == ' ') rhs.erase(rhs.begin());
            if (lhs.empty() || rhs.empty()) continue;
            return std::make_pair(strip_parens(lhs), strip_parens(rhs));
        }
    }
    return std::nullopt;
}

inline std::string strip_parens(std::string s) {
    while (s.size() >= 2 && s.front() == '(' && s.back() == ')') {
        int depth = 0;
        bool wraps = true;
        for (std::size_t i = 0; i + 1 < s.size(); ++i) {
            if (s[i] == '(') ++depth;
            if (s[i] == ')') --depth;
            if (depth == 0) {
                wraps = false;
                break;
            }
        }
        if (!wraps) break;
        s = s.substr(1, s.size() - 2);
        while (!s.empty() && s.front() == ' ') s.erase(s.begin());
        while (!s.empty() && s.back() == ' ') s.pop_back();
    }
    return s;
}

inline std::optional<std::pair<std::string, std::string>> split_implication(const std::string& p) {
    return split_top(p, {"->", "=>", "implies"});
}

inline std::optional<std::pair<std::string, std::string>> split_conjunction(const std::string& p) {
    return split_top(p, {"and", "&"});
}

inline std::optional<std::pair<std::string, std::string>> split_disjunction(const std::string& p) {
    return split_top(p, {"or", "|"});
}

inline std::string replace_all(std::string hay, const std::string& from, const std::string& to) {
    if (from.empty()) return hay;
    std::size_t pos = 0;
    while ((pos = hay.find(from, pos)) != std::string::npos) {
        hay.replace(pos, from.size(), to);
        pos += to.size();
    }
    return hay;
}

// "lhs OP rhs" with an exact-rational comparison; no variables allowed.
inline bool check_arithmetic_fact(const std::string& text) {
    static const std::vector<std::pair<std::string, int>> ops = {
        {"<=", 1}, {">=", 2}, {"!=", 3}, {"=", 0}, {"<", 4}, {">", 5}};
    for (const auto& [op, code] : ops) {
        std::size_t pos = text.find(op);
        if (pos == std::string::npos) continue;
        std::string lhs = text.substr(0, pos), rhs = text.substr(pos + op.size());
        try {
            ExprAst el = parse_expr(lhs), er = parse_expr(rhs);
            std::set<std::string> vars;
            collect_variables(el, vars);
            collect_variables(er, vars);
            if (!vars.empty()) return false;
            auto a = eval_rational(el, {}), b = eval_rational(er, {});
            if (!a || !b) return false;
            switch (code) {
                case 0: return *a == *b;
                case 1: return *a <= *b;
                case 2: return *a >= *b;
                case 3: return *a != *b;
                case 4: return *a < *b;
                case 5: return *a > *b;
            }
        } catch (const ParseError&) {
            return false;
        }
    }
    return false;
}

} // namespace detail

struct ProofStep {
    const Statement* statement = nullptr;
    InferenceRule rule = InferenceRule::unknown;
    std::vector<const Statement*> premises;
};

struct SoundnessResult {
    double score = 1.0;
    bool vacuous = false;  // no checkable (non-hypothesis) steps
    std::vector<std::string> invalid_steps;
};

namespace detail {

inline bool validate_step(const ProofStep& step) {
    const std::string goal = normalize_prop(step.statement->text);
    std::vector<std::string> premises;
    for (const auto* p : step.premises) premises.push_back(normalize_prop(p->text));
    auto has_premise = [&](const std::string& p) {
        return std::find(premises.begin(), premises.end(), p) != premises.end();
    };
    switch (step.rule) {
        case InferenceRule::hypothesis:
            return step.premises.empty();
        case InferenceRule::modus_ponens:
            for (const auto& p : premises) {
                auto imp = split_implication(p);
                if (imp && imp->second == strip_parens(goal) && has_premise(imp->first))
                    return true;
            }
            return false;
        case InferenceRule::and_intro: {
            auto conj = split_conjunction(goal);
            return conj && has_premise(conj->first) && has_premise(conj->second);
        }
        case InferenceRule::and_elim:
            for (const auto& p : premises) {
                auto conj = split_conjunction(p);
                if (conj && (conj->first == strip_parens(goal) || conj->second == strip_parens(goal)))
                    return true;
            }
            return false;
        case InferenceRule::or_intro: {
            auto disj = split_disjunction(goal);
            return disj && (has_premise(disj->first) || has_premise(disj->second));
        }
        case InferenceRule::substitution_of_equals: {
            for (const auto& eq : premises) {
                auto sides = split_top(eq, {"="});
                if (!sides) continue;
                for (const auto& src : premises) {
                    if (src == eq) continue;
                    if (replace_all(src, sides->first, sides->second) == goal) return true;
                    if (replace_all(src, sides->second, sides->first) == goal) return true;
                }
            }
            return false;
        }
        case InferenceRule::arithmetic_fact:
            return check_arithmetic_fact(normalize_prop(step.statement->text));
        case InferenceRule::unknown:
            return false;  // conservative
    }
    return false;
}

} // namespace detail

// Builds ProofSteps from statement annotations. Premises must reference
// statements that precede the step in topological order; a violation makes
// the step invalid rather than aborting the whole check.
inline SoundnessResult check_soundness(const ReasoningTrace& trace) {
    ReasoningGraph graph = build_graph(trace);
    std::map<std::string, std::size_t> topo_pos;
    for (std::size_t i = 0; i < graph.topo_order.size(); ++i)
        topo_pos[trace.statements[std::size_t(graph.topo_order[i])].id] = i;

    SoundnessResult result;
    std::size_t checkable = 0, valid = 0;
    for (const auto& s : trace.statements) {
        InferenceRule rule = s.rule ? inference_rule_from(*s.rule) : InferenceRule::unknown;
        if (rule == InferenceRule::hypothesis) continue;
        ++checkable;
        ProofStep step;
        step.statement = &s;
        step.rule = rule;
        bool premises_ok = true;
        for (const auto& pid : s.premises) {
            const Statement* p = trace.find(pid);
            if (!p || topo_pos[pid] >= topo_pos[s.id]) {
                premises_ok = false;
                break;
            }
            step.premises.push_back(p);
        }
        if (premises_ok && detail::validate_step(step)) {
            ++valid;
        } else {
            result.invalid_steps.push_back(s.id);
        }
    }
    if (checkable == 0) {
        result.vacuous = true;
        result.score = 1.0;
    } else {
        result.score = double(valid) / double(checkable);
    }
    return result;
}

struct TheoremScore {
    double sc_proof = 1.0;
    double soundness = 1.0;
    double beta = 0.5;
    double combined = 1.0;
    bool degenerate = false;  // k < 2, sc_proof vacuous
    bool vacuous_soundness = false;
};

inline TheoremScore sc_theorem(const TraceSet& set, double beta,
                               const SimilarityProvider& provider, const IsoOptions& iso = {},
                               unsigned jobs = 1) {
    if (beta < 0 || beta > 1) throw DomainError("beta must lie in [0,1]");
    TheoremScore score;
    score.beta = beta;
    if (set.k() < 2) {
        score.degenerate = true;
        score.sc_proof = 1.0;
    } else {
        score.sc_proof = psi_global(set, provider, iso, jobs);
    }
    double sum = 0;
    bool all_vacuous = true;
    for (const auto& t : set.traces) {
        SoundnessResult r = check_soundness(t);
        sum += r.score;
        all_vacuous = all_vacuous && r.vacuous;
    }
    score.soundness = sum / double(set.k());
    score.vacuous_soundness = all_vacuous;
    score.combined = beta * score.sc_proof + (1 - beta) * score.soundness;
    return score;
}

} // namespace scv

#endif
