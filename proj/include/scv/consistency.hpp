#ifndef SCV_CONSISTENCY_HPP
#define SCV_CONSISTENCY_HPP

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "scv/equivalence.hpp"
#include "scv/errors.hpp"
#include "scv/graph_iso.hpp"
#include "scv/parallel.hpp"
#include "scv/trace_model.hpp"

namespace scv {

struct ConsistencyConfig {
    double alpha = 0.5;
    double flag_threshold = 0.5;
    IsoOptions iso;
    unsigned jobs = 1;
    // k = 1 is vacuously self-consistent: report 1.0 with a degenerate marker
    // instead of propagating DegenerateSampleError.
    bool allow_degenerate = true;
};

struct ConsistencyReport {
    // keyed by class representative "trace_id/statement_id"
    std::map<std::string, double> per_statement;
    std::map<std::pair<std::string, std::string>, double> per_edge;
    double psi = 0.0;
    double phi = 0.0;
    double combined = 0.0;
    double alpha = 0.5;
    std::set<std::string> flagged;
    bool degenerate = false;
    AlignmentMap alignment;
};

inline std::string class_key(const AlignmentClass& c) {
    return c.representative.trace_id + "/" + c.representative.statement_id;
}

// Fraction of traces containing a member of the class; exactly m/k.
inline double sc_atomic(const AlignmentClass& cls, const TraceSet& set) {
    std::size_t m = 0;
    for (const auto& t : set.traces)
        if (cls.trace_ids.count(t.trace_id)) ++m;
    return double(m) / double(set.k());
}

// Fraction of traces whose graph has an edge from a member of class_i to a
// member of class_j.
inline double sc_logical(int class_i, int class_j, const AlignmentMap& alignment,
                         const TraceSet& set) {
    std::size_t m = 0;
    for (const auto& t : set.traces) {
        bool found = false;
        for (const auto& e : t.edges) {
            auto fi = alignment.class_of.find({t.trace_id, e.from});
            auto ti = alignment.class_of.find({t.trace_id, e.to});
            if (fi != alignment.class_of.end() && ti != alignment.class_of.end() &&
                fi->second == class_i && ti->second == class_j) {
                found = true;
                break;
            }
        }
        if (found) ++m;
    }
    return double(m) / double(set.k());
}

// Mean pairwise Iso over all unordered trace pairs.
inline double psi_global(const TraceSet& set, const SimilarityProvider& provider,
                         const IsoOptions& iso = {}, unsigned jobs = 1) {
    const std::size_t k = set.k();
    if (k < 2) throw DegenerateSampleError("psi_global requires k >= 2");
    std::vector<ReasoningGraph> graphs;
    graphs.reserve(k);
    for (const auto& t : set.traces) graphs.push_back(build_graph(t));
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) pairs.emplace_back(i, j);
    std::vector<double> scores(pairs.size(), 0.0);
    parallel_for(pairs.size(), jobs, [&](std::size_t p) {
        scores[p] = iso_score(graphs[pairs[p].first], graphs[pairs[p].second], provider, iso).score;
    });
    double sum = 0;
    for (double s : scores) sum += s;  // fixed order, independent of jobs
    return sum * 2.0 / (double(k) * double(k - 1));
}

// Final answers viewed as statements for response-level clustering: parseable
// answers compare as expressions, the rest as plain claims.
inline Statement final_answer_statement(const ReasoningTrace& trace) {
    Statement s;
    s.id = trace.trace_id;
    s.text = trace.final_answer;
    s.kind = StatementKind::claim;
    try {
        (void)parse_expr(trace.final_answer);
        s.kind = StatementKind::expression;
    } catch (const ParseError&) {
    }
    return s;
}

// Phi = 1 - H(P_hat)/log(k), with responses clustered by final-answer
// equivalence and H in nats.
inline double phi_entropy(const TraceSet& set, const SimilarityProvider& provider) {
    const std::size_t k = set.k();
    if (k < 2) throw DegenerateSampleError("phi_entropy requires k >= 2");
    std::vector<Statement> answers;
    answers.reserve(k);
    for (const auto& t : set.traces) answers.push_back(final_answer_statement(t));
    std::vector<const Statement*> ptrs;
    for (const auto& a : answers) ptrs.push_back(&a);
    std::vector<int> cls = single_linkage(ptrs, provider);
    std::map<int, std::size_t> sizes;
    for (int c : cls) sizes[c]++;
    double entropy = 0;
    for (const auto& [_, n] : sizes) {
        double p = double(n) / double(k);
        entropy -= p * std::log(p);
    }
    double phi = 1.0 - entropy / std::log(double(k));
    return std::clamp(phi, 0.0, 1.0);
}

inline double lambda_combined(double psi, double phi, double alpha) {
    if (psi < 0 || psi > 1 || phi < 0 || phi > 1 || alpha < 0 || alpha > 1)
        throw DomainError("lambda_combined inputs must lie in [0,1]");
    return alpha * psi + (1 - alpha) * phi;
}

inline ConsistencyReport full_report(const TraceSet& set, const SimilarityProvider& provider,
                                     const ConsistencyConfig& config = {}) {
    ConsistencyReport report;
    report.alpha = config.alpha;
    report.alignment = align(set, provider, config.jobs);

    for (const auto& cls : report.alignment.classes) {
        double score = sc_atomic(cls, set);
        report.per_statement[class_key(cls)] = score;
        if (score < config.flag_threshold) report.flagged.insert(class_key(cls));
    }

    std::set<std::pair<int, int>> edge_classes;
    for (const auto& t : set.traces) {
        for (const auto& e : t.edges) {
            auto fi = report.alignment.class_of.find({t.trace_id, e.from});
            auto ti = report.alignment.class_of.find({t.trace_id, e.to});
            if (fi != report.alignment.class_of.end() && ti != report.alignment.class_of.end())
                edge_classes.emplace(fi->second, ti->second);
        }
    }
    for (const auto& [ci, cj] : edge_classes) {
        report.per_edge[{class_key(report.alignment.classes[std::size_t(ci)]),
                         class_key(report.alignment.classes[std::size_t(cj)])}] =
            sc_logical(ci, cj, report.alignment, set);
    }

    if (set.k() < 2) {
        if (!config.allow_degenerate)
            throw DegenerateSampleError("consistency scores require k >= 2");
        report.psi = report.phi = 1.0;
        report.degenerate = true;
    } else {
        report.psi = psi_global(set, provider, config.iso, config.jobs);
        report.phi = phi_entropy(set, provider);
    }
    report.combined = lambda_combined(report.psi, report.phi, config.alpha);
    return report;
}

} // namespace scv

#endif
