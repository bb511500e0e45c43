#ifndef SCV_EQUIVALENCE_HPP
#define SCV_EQUIVALENCE_HPP

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "scv/errors.hpp"
#include "scv/expr.hpp"
#include "scv/parallel.hpp"
#include "scv/polynomial.hpp"
#include "scv/trace_model.hpp"

namespace scv {

// Decides when two statements denote the same mathematical statement.
// similarity() is symmetric, bounded in [0,1], and 1 on identical input.
class SimilarityProvider {
public:
    SimilarityProvider(std::string name, double threshold)
        : name_(std::move(name)), threshold_(threshold) {}
    virtual ~SimilarityProvider() = default;

    const std::string& name() const { return name_; }
    double threshold() const { return threshold_; }

    double similarity(const Statement& a, const Statement& b) const {
        if (a.kind != b.kind) return 0.0;
        if (a.text == b.text) return 1.0;
        return std::clamp(score(a, b), 0.0, 1.0);
    }

    bool equivalent(const Statement& a, const Statement& b) const {
        return similarity(a, b) >= threshold_;
    }

protected:
    virtual double score(const Statement& a, const Statement& b) const = 0;

private:
    std::string name_;
    double threshold_;
};

namespace detail {

inline std::set<std::string> tokenize(const std::string& text) {
    std::set<std::string> tokens;
    std::string cur;
    for (char ch : text) {
        unsigned char c = static_cast<unsigned char>(ch);
        if (std::isalnum(c) || ch == '_' || ch == '.') {
            cur += char(std::tolower(c));
        } else {
            if (!cur.empty()) tokens.insert(cur);
            cur.clear();
            if (!std::isspace(c)) tokens.insert(std::string(1, ch));
        }
    }
    if (!cur.empty()) tokens.insert(cur);
    return tokens;
}

inline double jaccard(const std::string& a, const std::string& b) {
    auto ta = tokenize(a), tb = tokenize(b);
    if (ta.empty() && tb.empty()) return 1.0;
    std::size_t inter = 0;
    for (const auto& t : ta) inter += tb.count(t);
    std::size_t uni = ta.size() + tb.size() - inter;
    return uni == 0 ? 1.0 : double(inter) / double(uni);
}

} // namespace detail

// Normalized token Jaccard; pairs at or above the threshold snap to 1.
class TokenProvider : public SimilarityProvider {
public:
    explicit TokenProvider(double threshold = 0.85)
        : SimilarityProvider("token", threshold) {}

protected:
    double score(const Statement& a, const Statement& b) const override {
        double j = detail::jaccard(a.text, b.text);
        return j >= threshold() ? 1.0 : j;
    }
};

// Token provider plus canonical-form equality: explicit canonical strings,
// polynomial canonicalization for expressions, exact values for numerics.
class CanonicalProvider : public SimilarityProvider {
public:
    explicit CanonicalProvider(double threshold = 0.85)
        : SimilarityProvider("canonical", threshold) {}

    static std::string canonical_form(const Statement& s) {
        if (s.canonical) return "c:" + *s.canonical;
        if (s.kind == StatementKind::numeric && s.value) {
            char buf[40];
            std::snprintf(buf, sizeof buf, "n:%.17g", *s.value);
            return buf;
        }
        if (s.kind == StatementKind::expression) {
            try {
                ExprAst ast = parse_expr(s.text);
                if (auto p = expand(ast)) return "p:" + canonical_string(*p);
                return "e:" + render(canonical_sort(ast));
            } catch (const ParseError&) {
                return {};
            }
        }
        return {};
    }

protected:
    double score(const Statement& a, const Statement& b) const override {
        std::string ca = canonical_form(a);
        if (!ca.empty() && ca == canonical_form(b)) return 1.0;
        double j = detail::jaccard(a.text, b.text);
        return j >= threshold() ? 1.0 : j;
    }
};

struct StatementKey {
    std::string trace_id;
    std::string statement_id;
    auto operator<=>(const StatementKey&) const = default;
};

struct AlignmentClass {
    StatementKey representative;          // lexicographically smallest member
    Statement rep_statement;
    std::vector<StatementKey> members;    // sorted
    std::set<std::string> trace_ids;      // traces contributing a member
};

struct AlignmentMap {
    std::vector<AlignmentClass> classes;  // sorted by representative
    std::map<StatementKey, int> class_of;
};

namespace detail {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[std::size_t(x)] != x) {
            parent[std::size_t(x)] = parent[std::size_t(parent[std::size_t(x)])];
            x = parent[std::size_t(x)];
        }
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::size_t(std::max(a, b))] = std::min(a, b);
    }
};

} // namespace detail

// Single-linkage clustering over pairs with similarity >= threshold.
// Returns a class id per item, numbered by first occurrence.
inline std::vector<int> single_linkage(const std::vector<const Statement*>& items,
                                       const SimilarityProvider& provider, unsigned jobs = 1) {
    const std::size_t n = items.size();
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    std::vector<char> hit(pairs.size(), 0);
    parallel_for(pairs.size(), jobs, [&](std::size_t p) {
        hit[p] = provider.similarity(*items[pairs[p].first], *items[pairs[p].second]) >=
                 provider.threshold();
    });
    detail::UnionFind uf(n);
    for (std::size_t p = 0; p < pairs.size(); ++p)
        if (hit[p]) uf.unite(int(pairs[p].first), int(pairs[p].second));
    std::vector<int> cls(n, -1);
    std::map<int, int> renumber;
    for (std::size_t i = 0; i < n; ++i) {
        int root = uf.find(int(i));
        auto [it, fresh] = renumber.emplace(root, int(renumber.size()));
        cls[i] = it->second;
        (void)fresh;
    }
    return cls;
}

// Partitions all statements of all traces into equivalence classes.
// Deterministic: single-linkage over the pairwise similarity matrix with
// the lexicographically smallest (trace_id, statement_id) as representative.
inline AlignmentMap align(const TraceSet& set, const SimilarityProvider& provider,
                          unsigned jobs = 1) {
    std::vector<const Statement*> items;
    std::vector<StatementKey> keys;
    for (const auto& t : set.traces) {
        for (const auto& s : t.statements) {
            items.push_back(&s);
            keys.push_back({t.trace_id, s.id});
        }
    }
    std::vector<int> cls = single_linkage(items, provider, jobs);

    int nclasses = cls.empty() ? 0 : *std::max_element(cls.begin(), cls.end()) + 1;
    std::vector<AlignmentClass> classes{std::size_t(nclasses)};
    std::vector<int> rep_item(std::size_t(nclasses), -1);
    for (std::size_t i = 0; i < items.size(); ++i) {
        auto& c = classes[std::size_t(cls[i])];
        c.members.push_back(keys[i]);
        c.trace_ids.insert(keys[i].trace_id);
        int& r = rep_item[std::size_t(cls[i])];
        if (r < 0 || keys[i] < keys[std::size_t(r)]) r = int(i);
    }
    for (int c = 0; c < nclasses; ++c) {
        classes[std::size_t(c)].representative = keys[std::size_t(rep_item[std::size_t(c)])];
        classes[std::size_t(c)].rep_statement = *items[std::size_t(rep_item[std::size_t(c)])];
        std::sort(classes[std::size_t(c)].members.begin(), classes[std::size_t(c)].members.end());
    }
    std::sort(classes.begin(), classes.end(),
              [](const AlignmentClass& a, const AlignmentClass& b) {
                  return a.representative < b.representative;
              });
    AlignmentMap map;
    map.classes = std::move(classes);
    for (std::size_t c = 0; c < map.classes.size(); ++c)
        for (const auto& k : map.classes[c].members) map.class_of[k] = int(c);
    return map;
}

} // namespace scv

#endif
