#ifndef SCV_REPAIR_HPP
#define SCV_REPAIR_HPP

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "scv/consistency.hpp"
#include "scv/equivalence.hpp"
#include "scv/errors.hpp"
#include "scv/trace_model.hpp"

namespace scv {

// Replaces statements of the target whose equivalence class scores below the
// threshold with material from high-consistency classes elsewhere in the
// sample set; statements with no viable replacement are removed and their
// incident edges re-routed through retained neighbors.
//
// Alignment and atomic scores are recomputed against the current target
// content (substituted into the set), so repairing an already-repaired trace
// is a no-op; the caller's report is the source of configuration only.
inline ReasoningTrace repair_trace(const ReasoningTrace& target, const TraceSet& set,
                                   const ConsistencyReport& report,
                                   const SimilarityProvider& provider, double threshold = 0.5) {
    if (threshold < 0 || threshold > 1) throw DomainError("repair threshold must lie in [0,1]");
    (void)report;

    TraceSet working = set;
    bool substituted = false;
    for (auto& t : working.traces) {
        if (t.trace_id == target.trace_id) {
            t = target;
            substituted = true;
        }
    }
    if (!substituted) working.traces.push_back(target);
    AlignmentMap alignment = align(working, provider);
    std::vector<double> scores(alignment.classes.size());
    for (std::size_t c = 0; c < alignment.classes.size(); ++c)
        scores[c] = sc_atomic(alignment.classes[c], working);

    std::set<int> target_classes;
    for (const auto& s : target.statements) {
        auto it = alignment.class_of.find({target.trace_id, s.id});
        if (it != alignment.class_of.end()) target_classes.insert(it->second);
    }
    std::vector<int> candidates;
    for (std::size_t c = 0; c < alignment.classes.size(); ++c) {
        if (target_classes.count(int(c))) continue;
        if (scores[c] >= threshold) candidates.push_back(int(c));
    }

    ReasoningTrace repaired = target;
    std::set<std::string> removed;
    for (auto& s : repaired.statements) {
        auto it = alignment.class_of.find({target.trace_id, s.id});
        if (it == alignment.class_of.end()) continue;
        if (scores[std::size_t(it->second)] >= threshold) continue;

        // best replacement: highest similarity to the broken statement, then
        // highest class score, then smallest representative (candidate order)
        int best = -1;
        double best_sim = -1, best_score = -1;
        for (int c : candidates) {
            const AlignmentClass& cls = alignment.classes[std::size_t(c)];
            double sim = provider.similarity(s, cls.rep_statement);
            if (sim > best_sim || (sim == best_sim && scores[std::size_t(c)] > best_score)) {
                best = c;
                best_sim = sim;
                best_score = scores[std::size_t(c)];
            }
        }
        if (best >= 0) {
            const Statement& rep = alignment.classes[std::size_t(best)].rep_statement;
            s.text = rep.text;
            s.kind = rep.kind;
            s.canonical = rep.canonical;
            s.value = rep.value;
            s.rule = rep.rule;
            s.premises.clear();
        } else {
            removed.insert(s.id);
        }
    }

    if (removed.size() == repaired.statements.size())
        throw IrreparableError("repair would remove every statement of trace '" + target.trace_id +
                               "'");

    if (!removed.empty()) {
        // re-route each parent->child path that ran through a removed node;
        // processing removals in topological order resolves removal chains
        ReasoningGraph graph = build_graph(target);
        std::map<std::string, std::set<std::string>> parents;
        for (const auto& e : repaired.edges) parents[e.to].insert(e.from);
        for (int v : graph.topo_order) {
            const std::string& id = target.statements[std::size_t(v)].id;
            if (!removed.count(id)) continue;
            for (int c : graph.children[std::size_t(v)]) {
                const std::string& child = target.statements[std::size_t(c)].id;
                for (const auto& p : parents[id]) parents[child].insert(p);
            }
        }
        std::vector<Statement> kept;
        for (auto& s : repaired.statements)
            if (!removed.count(s.id)) kept.push_back(std::move(s));
        repaired.statements = std::move(kept);
        std::vector<TraceEdge> edges;
        for (const auto& s : repaired.statements)
            for (const auto& p : parents[s.id])
                if (!removed.count(p) && p != s.id) edges.push_back({p, s.id});
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        repaired.edges = std::move(edges);
        // drop premise annotations referencing removed statements
        for (auto& s : repaired.statements) {
            std::vector<std::string> premises;
            for (const auto& p : s.premises)
                if (!removed.count(p)) premises.push_back(p);
            s.premises = std::move(premises);
        }
    }

    validate_trace(repaired);
    return repaired;
}

} // namespace scv

#endif
