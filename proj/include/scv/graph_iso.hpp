#ifndef SCV_GRAPH_ISO_HPP
#define SCV_GRAPH_ISO_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "scv/equivalence.hpp"
#include "scv/errors.hpp"
#include "scv/trace_model.hpp"

namespace scv {

struct IsoResult {
    enum class Method { exact, spectral };
    double score = 0.0;
    std::vector<std::pair<int, int>> mapping;  // vertex of g1 -> vertex of g2
    Method method = Method::exact;
};

struct IsoOptions {
    enum class Mode { exact, spectral, auto_select };
    Mode mode = Mode::auto_select;
    int exact_cap = 24;  // max |V1| + |V2| for the exact branch and bound
};

namespace detail {

struct PairClasses {
    std::vector<int> c1, c2;  // class id per vertex
    int union_count = 0;      // sum over classes of max multiplicity per side
};

inline PairClasses vertex_classes(const ReasoningGraph& g1, const ReasoningGraph& g2,
                                  const SimilarityProvider& provider) {
    std::vector<const Statement*> items;
    for (std::size_t v = 0; v < g1.n; ++v) items.push_back(&g1.statement(int(v)));
    for (std::size_t v = 0; v < g2.n; ++v) items.push_back(&g2.statement(int(v)));
    std::vector<int> cls = single_linkage(items, provider);
    PairClasses pc;
    pc.c1.assign(cls.begin(), cls.begin() + long(g1.n));
    pc.c2.assign(cls.begin() + long(g1.n), cls.end());
    std::map<int, std::pair<int, int>> mult;
    for (int c : pc.c1) mult[c].first++;
    for (int c : pc.c2) mult[c].second++;
    for (const auto& [_, m] : mult) pc.union_count += std::max(m.first, m.second);
    return pc;
}

// Directed induced consistency between a new pair and all mapped pairs.
inline bool pair_consistent(const ReasoningGraph& g1, const ReasoningGraph& g2, int u, int v,
                            const std::vector<std::pair<int, int>>& mapped) {
    for (const auto& [pu, pv] : mapped) {
        if (g1.has_edge(u, pu) != g2.has_edge(v, pv)) return false;
        if (g1.has_edge(pu, u) != g2.has_edge(pv, v)) return false;
    }
    return true;
}

inline int preserved_edges(const ReasoningGraph& g1,
                           const std::vector<std::pair<int, int>>& mapping) {
    int count = 0;
    for (const auto& [u1, v1] : mapping)
        for (const auto& [u2, v2] : mapping) {
            (void)v1;
            (void)v2;
            if (g1.has_edge(u1, u2)) ++count;
        }
    return count;
}

struct ExactSearch {
    const ReasoningGraph& g1;
    const ReasoningGraph& g2;
    const PairClasses& pc;
    std::vector<std::vector<int>> candidates;  // per g1 vertex, class-compatible g2 vertices
    std::vector<char> used;
    std::vector<std::pair<int, int>> current;
    std::vector<std::pair<int, int>> best;
    int best_edges = -1;

    void run() {
        candidates.assign(g1.n, {});
        for (std::size_t u = 0; u < g1.n; ++u)
            for (std::size_t v = 0; v < g2.n; ++v)
                if (pc.c1[u] == pc.c2[v]) candidates[u].push_back(int(v));
        used.assign(g2.n, 0);
        recurse(0);
    }

    int upper_bound(std::size_t next) const {
        int ub = int(current.size());
        std::map<int, int> avail;
        for (std::size_t v = 0; v < g2.n; ++v)
            if (!used[v]) avail[pc.c2[v]]++;
        std::map<int, int> want;
        for (std::size_t u = next; u < g1.n; ++u) want[pc.c1[u]]++;
        for (const auto& [c, w] : want) {
            auto it = avail.find(c);
            if (it != avail.end()) ub += std::min(w, it->second);
        }
        return ub;
    }

    void consider_current() {
        if (int(current.size()) < int(best.size())) return;
        int edges = preserved_edges(g1, current);
        if (int(current.size()) > int(best.size()) ||
            (int(current.size()) == int(best.size()) && edges > best_edges)) {
            best = current;
            best_edges = edges;
        }
    }

    void recurse(std::size_t u) {
        if (u == g1.n) {
            consider_current();
            return;
        }
        if (upper_bound(u) < int(best.size())) return;
        for (int v : candidates[u]) {
            if (used[std::size_t(v)]) continue;
            if (!pair_consistent(g1, g2, int(u), v, current)) continue;
            used[std::size_t(v)] = 1;
            current.emplace_back(int(u), v);
            recurse(u + 1);
            current.pop_back();
            used[std::size_t(v)] = 0;
        }
        recurse(u + 1);  // leave u unmapped
    }
};

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Per-vertex features: coordinates of the smallest nontrivial Laplacian
// eigenvectors plus a content hash coordinate, with deterministic sign fixing.
inline std::vector<std::vector<double>> spectral_features(const ReasoningGraph& g, int dims) {
    const int n = int(g.n);
    std::vector<std::vector<double>> feat(std::size_t(n), std::vector<double>(std::size_t(dims) + 1, 0.0));
    if (n > 1) {
        Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
        for (const auto& [u, v] : g.edges) {
            lap(u, v) -= 1.0;
            lap(v, u) -= 1.0;
            lap(u, u) += 1.0;
            lap(v, v) += 1.0;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap);
        const Eigen::MatrixXd& vec = solver.eigenvectors();
        int d = std::min(dims, n - 1);
        for (int k = 0; k < d; ++k) {
            Eigen::VectorXd col = vec.col(k + 1);  // skip the trivial eigenvector
            int pivot = 0;
            for (int i = 1; i < n; ++i)
                if (std::abs(col(i)) > std::abs(col(pivot)) + 1e-12) pivot = i;
            if (col(pivot) < 0) col = -col;
            for (int i = 0; i < n; ++i) feat[std::size_t(i)][std::size_t(k)] = col(i);
        }
    }
    for (int i = 0; i < n; ++i) {
        const Statement& s = g.statement(i);
        std::uint64_t h = fnv1a(s.text + "\x1f" + to_string(s.kind));
        feat[std::size_t(i)][std::size_t(dims)] = double(h >> 11) * 0x1.0p-53;
    }
    return feat;
}

} // namespace detail

// Checks that a mapping is a feasible common-subgraph witness: injective,
// class-compatible, and directed-edge preserving in both directions.
inline bool validate_mapping(const ReasoningGraph& g1, const ReasoningGraph& g2,
                             const SimilarityProvider& provider,
                             const std::vector<std::pair<int, int>>& mapping) {
    auto pc = detail::vertex_classes(g1, g2, provider);
    std::vector<char> used1(g1.n, 0), used2(g2.n, 0);
    for (const auto& [u, v] : mapping) {
        if (u < 0 || v < 0 || std::size_t(u) >= g1.n || std::size_t(v) >= g2.n) return false;
        if (used1[std::size_t(u)] || used2[std::size_t(v)]) return false;
        used1[std::size_t(u)] = used2[std::size_t(v)] = 1;
        if (pc.c1[std::size_t(u)] != pc.c2[std::size_t(v)]) return false;
    }
    for (const auto& [u1, v1] : mapping)
        for (const auto& [u2, v2] : mapping) {
            if (g1.has_edge(u1, u2) != g2.has_edge(v1, v2)) return false;
        }
    return true;
}

// Exact maximum common node-induced subgraph under statement-equivalence
// compatibility. Maximizes vertex count, then preserved edge count.
inline IsoResult iso_exact(const ReasoningGraph& g1, const ReasoningGraph& g2,
                           const SimilarityProvider& provider, const IsoOptions& opts = {}) {
    if (int(g1.n + g2.n) > opts.exact_cap)
        throw SizeCapError("graph pair has " + std::to_string(g1.n + g2.n) +
                           " vertices, above the exact cap of " + std::to_string(opts.exact_cap));
    IsoResult result;
    result.method = IsoResult::Method::exact;
    if (g1.n == 0 && g2.n == 0) {
        result.score = 1.0;
        return result;
    }
    auto pc = detail::vertex_classes(g1, g2, provider);
    detail::ExactSearch search{g1, g2, pc, {}, {}, {}, {}, 0};
    search.run();
    result.mapping = std::move(search.best);
    result.score = pc.union_count == 0 ? 1.0 : double(result.mapping.size()) / pc.union_count;
    return result;
}

// Polynomial-time approximation: greedy bipartite matching on spectral +
// content features restricted to equivalence-compatible pairs, followed by
// greedy removal of pairs violating edge preservation. The result is always
// feasible, so its score never exceeds the exact score.
inline IsoResult iso_spectral(const ReasoningGraph& g1, const ReasoningGraph& g2,
                              const SimilarityProvider& provider) {
    IsoResult result;
    result.method = IsoResult::Method::spectral;
    if (g1.n == 0 && g2.n == 0) {
        result.score = 1.0;
        return result;
    }
    if (g1.n == 0 || g2.n == 0) {
        result.score = 0.0;
        return result;
    }
    auto pc = detail::vertex_classes(g1, g2, provider);
    const int dims = std::min(4, int(std::max(g1.n, g2.n)) - 1);
    auto f1 = detail::spectral_features(g1, dims);
    auto f2 = detail::spectral_features(g2, dims);

    struct Cand {
        double dist;
        int u, v;
    };
    std::vector<Cand> cands;
    for (std::size_t u = 0; u < g1.n; ++u)
        for (std::size_t v = 0; v < g2.n; ++v) {
            if (pc.c1[u] != pc.c2[v]) continue;
            double d2 = 0;
            for (std::size_t k = 0; k < f1[u].size(); ++k) {
                double d = f1[u][k] - f2[v][k];
                d2 += d * d;
            }
            cands.push_back({std::sqrt(d2), int(u), int(v)});
        }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        if (a.dist != b.dist) return a.dist < b.dist;
        if (a.u != b.u) return a.u < b.u;
        return a.v < b.v;
    });
    std::vector<char> used1(g1.n, 0), used2(g2.n, 0);
    std::vector<Cand> mapped;
    for (const auto& c : cands) {
        if (used1[std::size_t(c.u)] || used2[std::size_t(c.v)]) continue;
        used1[std::size_t(c.u)] = used2[std::size_t(c.v)] = 1;
        mapped.push_back(c);
    }

    // drop violating pairs until the mapping is edge-preserving
    for (;;) {
        std::vector<int> violations(mapped.size(), 0);
        bool any = false;
        for (std::size_t i = 0; i < mapped.size(); ++i)
            for (std::size_t j = 0; j < mapped.size(); ++j) {
                if (i == j) continue;
                if (g1.has_edge(mapped[i].u, mapped[j].u) != g2.has_edge(mapped[i].v, mapped[j].v)) {
                    ++violations[i];
                    any = true;
                }
            }
        if (!any) break;
        std::size_t worst = 0;
        for (std::size_t i = 1; i < mapped.size(); ++i) {
            if (violations[i] > violations[worst] ||
                (violations[i] == violations[worst] && mapped[i].dist > mapped[worst].dist)) {
                worst = i;
            }
        }
        mapped.erase(mapped.begin() + long(worst));
    }

    for (const auto& c : mapped) result.mapping.emplace_back(c.u, c.v);
    std::sort(result.mapping.begin(), result.mapping.end());
    result.score = pc.union_count == 0 ? 1.0 : double(result.mapping.size()) / pc.union_count;
    return result;
}

inline IsoResult iso_score(const ReasoningGraph& g1, const ReasoningGraph& g2,
                           const SimilarityProvider& provider, const IsoOptions& opts = {}) {
    switch (opts.mode) {
        case IsoOptions::Mode::exact: return iso_exact(g1, g2, provider, opts);
        case IsoOptions::Mode::spectral: return iso_spectral(g1, g2, provider);
        case IsoOptions::Mode::auto_select:
            if (int(g1.n + g2.n) <= opts.exact_cap) return iso_exact(g1, g2, provider, opts);
            return iso_spectral(g1, g2, provider);
    }
    return iso_spectral(g1, g2, provider);
}

} // namespace scv

#endif
