#ifndef SCV_TESTS_HELPERS_HPP
#define SCV_TESTS_HELPERS_HPP

// Shared builders and independent reference implementations (oracles) used
// by both the unit tests and the acceptance checks. Oracles re-derive the
// scores directly from their definitions, sharing no scoring code with the
// library; summation orders mirror the library's documented deterministic
// order so comparisons can be exact.

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "scv/consistency.hpp"
#include "scv/equivalence.hpp"
#include "scv/graph_iso.hpp"
#include "scv/rng.hpp"
#include "scv/trace_model.hpp"
#include "scv/tree_edit.hpp"

namespace helpers {

inline scv::Statement stmt(std::string id, std::string text,
                           scv::StatementKind kind = scv::StatementKind::claim) {
    scv::Statement s;
    s.id = std::move(id);
    s.text = std::move(text);
    s.kind = kind;
    return s;
}

// Chain trace s0 -> s1 -> ... with the given statement texts.
inline scv::ReasoningTrace chain_trace(std::string trace_id, const std::vector<std::string>& texts,
                                       std::string final_answer) {
    scv::ReasoningTrace t;
    t.trace_id = std::move(trace_id);
    t.final_answer = std::move(final_answer);
    for (std::size_t i = 0; i < texts.size(); ++i)
        t.statements.push_back(stmt("s" + std::to_string(i), texts[i]));
    for (std::size_t i = 0; i + 1 < texts.size(); ++i)
        t.edges.push_back({"s" + std::to_string(i), "s" + std::to_string(i + 1)});
    return t;
}

inline scv::TraceSet make_set(std::vector<scv::ReasoningTrace> traces,
                              scv::Domain domain = scv::Domain::generic) {
    scv::TraceSet set;
    set.query = "q";
    set.domain = domain;
    set.traces = std::move(traces);
    return set;
}

// Random DAG trace whose statement texts are drawn without replacement from a
// pool; distinct texts keep the exhaustive MCS oracle cheap.
inline scv::ReasoningTrace random_trace(scv::Rng& rng, std::string trace_id, int n_statements,
                                        const std::vector<std::string>& pool, double edge_prob,
                                        int n_answers = 3) {
    std::vector<std::size_t> picks(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) picks[i] = i;
    for (std::size_t i = picks.size(); i > 1; --i)
        std::swap(picks[i - 1], picks[rng.below(i)]);

    scv::ReasoningTrace t;
    t.trace_id = std::move(trace_id);
    t.final_answer = "answer_" + std::to_string(rng.below(std::uint64_t(n_answers)));
    for (int i = 0; i < n_statements; ++i)
        t.statements.push_back(
            stmt("s" + std::to_string(i), pool[picks[std::size_t(i)]]));
    for (int i = 0; i < n_statements; ++i)
        for (int j = i + 1; j < n_statements; ++j)
            if (rng.bernoulli(edge_prob))
                t.edges.push_back({"s" + std::to_string(i), "s" + std::to_string(j)});
    return t;
}

namespace oracle {

// Transitive closure over the pairwise similarity matrix; class ids numbered
// by first occurrence (same numbering convention the library documents).
inline std::vector<int> cluster(const std::vector<const scv::Statement*>& items,
                                const scv::SimilarityProvider& provider) {
    const std::size_t n = items.size();
    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            adj[i][j] = i == j || provider.similarity(*items[i], *items[j]) >= provider.threshold();
    std::vector<int> cls(n, -1);
    int next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (cls[i] >= 0) continue;
        // BFS over the symmetric closure
        std::vector<std::size_t> queue = {i};
        cls[i] = next;
        while (!queue.empty()) {
            std::size_t u = queue.back();
            queue.pop_back();
            for (std::size_t v = 0; v < n; ++v)
                if (cls[v] < 0 && (adj[u][v] || adj[v][u])) {
                    cls[v] = next;
                    queue.push_back(v);
                }
        }
        ++next;
    }
    return cls;
}

struct MiniGraph {
    std::vector<int> cls;                 // class id per vertex
    std::vector<std::vector<char>> edge;  // directed adjacency
};

inline MiniGraph mini_graph(const scv::ReasoningGraph& g, const std::vector<int>& classes,
                            std::size_t offset) {
    MiniGraph m;
    m.cls.assign(classes.begin() + long(offset), classes.begin() + long(offset + g.n));
    m.edge.assign(g.n, std::vector<char>(g.n, 0));
    for (const auto& [u, v] : g.edges) m.edge[std::size_t(u)][std::size_t(v)] = 1;
    return m;
}

// Exhaustive search for the maximum common node-induced subgraph: every
// injective class-compatible mapping with directed-edge consistency.
inline void mcs_recurse(const MiniGraph& a, const MiniGraph& b, std::size_t u,
                        std::vector<int>& map_to, std::vector<char>& used, int depth, int& best) {
    if (u == a.cls.size()) {
        best = std::max(best, depth);
        return;
    }
    mcs_recurse(a, b, u + 1, map_to, used, depth, best);
    for (std::size_t v = 0; v < b.cls.size(); ++v) {
        if (used[v] || a.cls[u] != b.cls[v]) continue;
        bool ok = true;
        for (std::size_t w = 0; w < u && ok; ++w) {
            if (map_to[w] < 0) continue;
            auto mv = std::size_t(map_to[w]);
            if (a.edge[u][w] != b.edge[v][mv] || a.edge[w][u] != b.edge[mv][v]) ok = false;
        }
        if (!ok) continue;
        used[v] = 1;
        map_to[u] = int(v);
        mcs_recurse(a, b, u + 1, map_to, used, depth + 1, best);
        map_to[u] = -1;
        used[v] = 0;
    }
}

// Iso(G1,G2) = |MCS| / union count, where the union counts each equivalence
// class at its larger per-graph multiplicity.
inline double iso(const scv::ReasoningGraph& g1, const scv::ReasoningGraph& g2,
                  const scv::SimilarityProvider& provider) {
    std::vector<const scv::Statement*> items;
    for (std::size_t v = 0; v < g1.n; ++v) items.push_back(&g1.statement(int(v)));
    for (std::size_t v = 0; v < g2.n; ++v) items.push_back(&g2.statement(int(v)));
    if (items.empty()) return 1.0;
    std::vector<int> classes = cluster(items, provider);
    MiniGraph a = mini_graph(g1, classes, 0);
    MiniGraph b = mini_graph(g2, classes, g1.n);
    std::map<int, std::pair<int, int>> mult;
    for (int c : a.cls) mult[c].first++;
    for (int c : b.cls) mult[c].second++;
    int uni = 0;
    for (const auto& [_, m] : mult) uni += std::max(m.first, m.second);
    std::vector<int> map_to(a.cls.size(), -1);
    std::vector<char> used(b.cls.size(), 0);
    int best = 0;
    mcs_recurse(a, b, 0, map_to, used, 0, best);
    return uni == 0 ? 1.0 : double(best) / double(uni);
}

struct Report {
    std::map<std::string, double> per_statement;
    std::map<std::pair<std::string, std::string>, double> per_edge;
    double psi = 0.0;
    double phi = 0.0;
    double combined = 0.0;
};

// Direct re-computation of the atomic/logical/global scores from their
// definitions, using only the oracle clustering and MCS above.
inline Report full_report(const scv::TraceSet& set, const scv::SimilarityProvider& provider,
                          double alpha = 0.5) {
    Report out;
    const std::size_t k = set.traces.size();

    std::vector<const scv::Statement*> items;
    std::vector<std::pair<std::string, std::string>> keys;
    for (const auto& t : set.traces)
        for (const auto& s : t.statements) {
            items.push_back(&s);
            keys.emplace_back(t.trace_id, s.id);
        }
    std::vector<int> cls = cluster(items, provider);
    int nclasses = cls.empty() ? 0 : *std::max_element(cls.begin(), cls.end()) + 1;

    std::vector<std::string> class_key{std::size_t(nclasses)};
    for (int c = 0; c < nclasses; ++c) {
        std::pair<std::string, std::string> rep;
        bool first = true;
        for (std::size_t i = 0; i < keys.size(); ++i)
            if (cls[i] == c && (first || keys[i] < rep)) {
                rep = keys[i];
                first = false;
            }
        class_key[std::size_t(c)] = rep.first + "/" + rep.second;
    }

    for (int c = 0; c < nclasses; ++c) {
        std::size_t m = 0;
        for (const auto& t : set.traces) {
            bool present = false;
            for (std::size_t i = 0; i < keys.size(); ++i)
                if (cls[i] == c && keys[i].first == t.trace_id) present = true;
            if (present) ++m;
        }
        out.per_statement[class_key[std::size_t(c)]] = double(m) / double(k);
    }

    std::set<std::pair<int, int>> edge_classes;
    auto class_of = [&](const std::string& trace_id, const std::string& sid) {
        for (std::size_t i = 0; i < keys.size(); ++i)
            if (keys[i].first == trace_id && keys[i].second == sid) return cls[i];
        return -1;
    };
    for (const auto& t : set.traces)
        for (const auto& e : t.edges)
            edge_classes.emplace(class_of(t.trace_id, e.from), class_of(t.trace_id, e.to));
    for (const auto& [ci, cj] : edge_classes) {
        std::size_t m = 0;
        for (const auto& t : set.traces) {
            bool found = false;
            for (const auto& e : t.edges)
                if (class_of(t.trace_id, e.from) == ci && class_of(t.trace_id, e.to) == cj)
                    found = true;
            if (found) ++m;
        }
        out.per_edge[{class_key[std::size_t(ci)], class_key[std::size_t(cj)]}] =
            double(m) / double(k);
    }

    std::vector<scv::ReasoningGraph> graphs;
    for (const auto& t : set.traces) graphs.push_back(scv::build_graph(t));
    double sum = 0;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) sum += iso(graphs[i], graphs[j], provider);
    out.psi = sum * 2.0 / (double(k) * double(k - 1));

    std::vector<scv::Statement> answers;
    for (const auto& t : set.traces) answers.push_back(scv::final_answer_statement(t));
    std::vector<const scv::Statement*> aptrs;
    for (const auto& a : answers) aptrs.push_back(&a);
    std::vector<int> acls = cluster(aptrs, provider);
    int na = acls.empty() ? 0 : *std::max_element(acls.begin(), acls.end()) + 1;
    double entropy = 0;
    for (int c = 0; c < na; ++c) {
        std::size_t m = std::size_t(std::count(acls.begin(), acls.end(), c));
        double p = double(m) / double(k);
        entropy -= p * std::log(p);
    }
    out.phi = std::clamp(1.0 - entropy / std::log(double(k)), 0.0, 1.0);
    out.combined = alpha * out.psi + (1 - alpha) * out.phi;
    return out;
}

// Classic recursive forest edit distance (exponential; tiny inputs only).
inline std::size_t forest_size(const std::vector<scv::LabelTree>& f) {
    std::size_t n = 0;
    for (const auto& t : f) n += scv::label_tree_size(t);
    return n;
}

inline std::size_t naive_fed(std::vector<scv::LabelTree> f1, std::vector<scv::LabelTree> f2) {
    if (f1.empty()) return forest_size(f2);
    if (f2.empty()) return forest_size(f1);
    scv::LabelTree t1 = f1.back();
    scv::LabelTree t2 = f2.back();

    auto del = f1;
    del.pop_back();
    for (const auto& c : t1.children) del.push_back(c);
    std::size_t best = naive_fed(del, f2) + 1;

    auto ins = f2;
    ins.pop_back();
    for (const auto& c : t2.children) ins.push_back(c);
    best = std::min(best, naive_fed(f1, ins) + 1);

    auto r1 = f1;
    r1.pop_back();
    auto r2 = f2;
    r2.pop_back();
    std::size_t match = naive_fed(r1, r2) + naive_fed(t1.children, t2.children) +
                        (t1.label == t2.label ? 0 : 1);
    return std::min(best, match);
}

inline std::size_t naive_ted(const scv::LabelTree& a, const scv::LabelTree& b) {
    return naive_fed({a}, {b});
}

inline double binom_cdf(int n, double p, int upto) {
    double total = 0;
    for (int i = 0; i <= upto; ++i) {
        double c = 1;
        for (int j = 0; j < i; ++j) c = c * double(n - j) / double(j + 1);
        total += c * std::pow(p, i) * std::pow(1 - p, n - i);
    }
    return total;
}

inline std::vector<double> ranks(const std::vector<double>& xs) {
    std::vector<std::size_t> order(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    std::vector<double> r(xs.size(), 0.0);
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
        double avg = (double(i) + double(j)) / 2.0 + 1.0;  // ties share the mean rank
        for (std::size_t t = i; t <= j; ++t) r[order[t]] = avg;
        i = j + 1;
    }
    return r;
}

inline double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
    auto rx = ranks(xs), ry = ranks(ys);
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= double(rx.size());
    my /= double(ry.size());
    double num = 0, dx = 0, dy = 0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        num += (rx[i] - mx) * (ry[i] - my);
        dx += (rx[i] - mx) * (rx[i] - mx);
        dy += (ry[i] - my) * (ry[i] - my);
    }
    if (dx == 0 || dy == 0) return 0;
    return num / std::sqrt(dx * dy);
}

} // namespace oracle
} // namespace helpers

#endif
