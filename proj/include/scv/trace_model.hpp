#ifndef SCV_TRACE_MODEL_HPP
#define SCV_TRACE_MODEL_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "scv/errors.hpp"

namespace scv {

enum class StatementKind { claim, expression, numeric };

inline const char* to_string(StatementKind k) {
    switch (k) {
        case StatementKind::claim: return "claim";
        case StatementKind::expression: return "expression";
        case StatementKind::numeric: return "numeric";
    }
    return "?";
}

inline StatementKind statement_kind_from(const std::string& s) {
    if (s == "claim") return StatementKind::claim;
    if (s == "expression") return StatementKind::expression;
    if (s == "numeric") return StatementKind::numeric;
    throw SchemaError("unknown statement kind '" + s + "'");
}

enum class Domain { theorem, symbolic, numeric, generic };

inline const char* to_string(Domain d) {
    switch (d) {
        case Domain::theorem: return "theorem";
        case Domain::symbolic: return "symbolic";
        case Domain::numeric: return "numeric";
        case Domain::generic: return "generic";
    }
    return "?";
}

inline Domain domain_from(const std::string& s) {
    if (s == "theorem") return Domain::theorem;
    if (s == "symbolic") return Domain::symbolic;
    if (s == "numeric") return Domain::numeric;
    if (s == "generic") return Domain::generic;
    throw SchemaError("unknown domain '" + s + "'");
}

struct Statement {
    std::string id;
    std::string text;
    StatementKind kind = StatementKind::claim;
    std::optional<std::string> canonical;
    std::optional<double> value;
    // proof annotations, used only by the theorem domain
    std::optional<std::string> rule;
    std::vector<std::string> premises;

    bool operator==(const Statement&) const = default;
};

struct TraceEdge {
    std::string from;
    std::string to;
    auto operator<=>(const TraceEdge&) const = default;
};

struct ReasoningTrace {
    std::string trace_id;
    std::vector<Statement> statements;
    std::vector<TraceEdge> edges;
    std::string final_answer;

    bool operator==(const ReasoningTrace&) const = default;

    const Statement* find(const std::string& id) const {
        for (const auto& s : statements)
            if (s.id == id) return &s;
        return nullptr;
    }
};

struct TraceSet {
    std::string query;
    Domain domain = Domain::generic;
    std::vector<ReasoningTrace> traces;

    bool operator==(const TraceSet&) const = default;
    std::size_t k() const { return traces.size(); }
};

// DAG view of one trace. Vertices are statement indices in trace order.
struct ReasoningGraph {
    const ReasoningTrace* trace = nullptr;
    std::size_t n = 0;
    std::vector<std::pair<int, int>> edges;          // index pairs
    std::vector<std::vector<int>> children;
    std::vector<std::vector<int>> parents;
    std::vector<int> topo_order;

    const Statement& statement(int v) const { return trace->statements[std::size_t(v)]; }

    bool has_edge(int u, int v) const {
        for (int c : children[std::size_t(u)])
            if (c == v) return true;
        return false;
    }
};

namespace detail {

// Kahn's algorithm, preferring lower statement index so ties resolve to
// input order (degenerate DAGs return the input order unchanged).
inline bool topo_sort(std::size_t n, const std::vector<std::vector<int>>& children,
                      std::vector<int>& order) {
    std::vector<int> indeg(n, 0);
    for (std::size_t u = 0; u < n; ++u)
        for (int v : children[u]) ++indeg[std::size_t(v)];
    std::set<int> ready;
    for (std::size_t v = 0; v < n; ++v)
        if (indeg[v] == 0) ready.insert(int(v));
    order.clear();
    while (!ready.empty()) {
        int u = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(u);
        for (int v : children[std::size_t(u)])
            if (--indeg[std::size_t(v)] == 0) ready.insert(v);
    }
    return order.size() == n;
}

} // namespace detail

// Validates trace invariants: unique non-empty ids, numeric statements carry
// values, edges reference known ids, no self-loops/duplicates, acyclic.
inline void validate_trace(const ReasoningTrace& trace) {
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < trace.statements.size(); ++i) {
        const auto& s = trace.statements[i];
        if (s.id.empty()) throw SchemaError("trace '" + trace.trace_id + "': empty statement id");
        if (!index.emplace(s.id, int(i)).second)
            throw SchemaError("trace '" + trace.trace_id + "': duplicate statement id '" + s.id + "'");
        if (s.kind == StatementKind::numeric && !s.value)
            throw SchemaError("trace '" + trace.trace_id + "': numeric statement '" + s.id +
                              "' has no value");
    }
    std::set<TraceEdge> seen;
    std::vector<std::vector<int>> children(trace.statements.size());
    for (const auto& e : trace.edges) {
        auto fi = index.find(e.from);
        if (fi == index.end()) throw DanglingEdgeError(e.from, e.to, e.from);
        auto ti = index.find(e.to);
        if (ti == index.end()) throw DanglingEdgeError(e.from, e.to, e.to);
        if (e.from == e.to)
            throw SchemaError("trace '" + trace.trace_id + "': self-loop on '" + e.from + "'");
        if (!seen.insert(e).second)
            throw SchemaError("trace '" + trace.trace_id + "': duplicate edge " + e.from + " -> " + e.to);
        children[std::size_t(fi->second)].push_back(ti->second);
    }
    std::vector<int> order;
    if (!detail::topo_sort(trace.statements.size(), children, order)) {
        // name one edge on a cycle: smallest unfinished edge
        std::set<int> placed(order.begin(), order.end());
        for (const auto& e : trace.edges) {
            if (!placed.count(index[e.from]) && !placed.count(index[e.to]))
                throw CycleError(e.from, e.to);
        }
        throw CycleError("?", "?");
    }
}

inline ReasoningGraph build_graph(const ReasoningTrace& trace) {
    ReasoningGraph g;
    g.trace = &trace;
    g.n = trace.statements.size();
    g.children.assign(g.n, {});
    g.parents.assign(g.n, {});
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < g.n; ++i) index[trace.statements[i].id] = int(i);
    for (const auto& e : trace.edges) {
        int u = index.at(e.from), v = index.at(e.to);
        g.edges.emplace_back(u, v);
        g.children[std::size_t(u)].push_back(v);
        g.parents[std::size_t(v)].push_back(u);
    }
    detail::topo_sort(g.n, g.children, g.topo_order);
    return g;
}

namespace detail {

inline void reject_unknown(const nlohmann::json& obj, std::initializer_list<const char*> allowed,
                           const char* where, bool strict) {
    if (!strict) return;
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed)
            if (it.key() == a) ok = true;
        if (!ok) throw SchemaError(std::string("unknown field '") + it.key() + "' in " + where);
    }
}

inline std::string require_string(const nlohmann::json& obj, const char* key, const char* where) {
    if (!obj.contains(key) || !obj[key].is_string())
        throw SchemaError(std::string(where) + ": missing or non-string field '" + key + "'");
    return obj[key].get<std::string>();
}

} // namespace detail

inline ReasoningTrace parse_trace_object(const nlohmann::json& jt, bool strict = true) {
    if (!jt.is_object()) throw SchemaError("trace must be an object");
    detail::reject_unknown(jt, {"trace_id", "final_answer", "statements", "edges"}, "trace", strict);
    ReasoningTrace trace;
    trace.trace_id = detail::require_string(jt, "trace_id", "trace");
    trace.final_answer = detail::require_string(jt, "final_answer", "trace");
    if (!jt.contains("statements") || !jt["statements"].is_array())
        throw SchemaError("trace '" + trace.trace_id + "': missing statements array");
    for (const auto& js : jt["statements"]) {
        if (!js.is_object()) throw SchemaError("statement must be an object");
        detail::reject_unknown(js, {"id", "text", "kind", "canonical", "value", "rule", "premises"},
                               "statement", strict);
        Statement s;
        s.id = detail::require_string(js, "id", "statement");
        s.text = detail::require_string(js, "text", "statement");
        s.kind = statement_kind_from(detail::require_string(js, "kind", "statement"));
        if (js.contains("canonical")) s.canonical = js["canonical"].get<std::string>();
        if (js.contains("value")) {
            if (!js["value"].is_number())
                throw SchemaError("statement '" + s.id + "': value must be a number");
            s.value = js["value"].get<double>();
        }
        if (js.contains("rule")) s.rule = js["rule"].get<std::string>();
        if (js.contains("premises")) {
            if (!js["premises"].is_array())
                throw SchemaError("statement '" + s.id + "': premises must be an array");
            for (const auto& p : js["premises"]) s.premises.push_back(p.get<std::string>());
        }
        trace.statements.push_back(std::move(s));
    }
    if (jt.contains("edges")) {
        if (!jt["edges"].is_array())
            throw SchemaError("trace '" + trace.trace_id + "': edges must be an array");
        for (const auto& je : jt["edges"]) {
            detail::reject_unknown(je, {"from", "to"}, "edge", strict);
            trace.edges.push_back({detail::require_string(je, "from", "edge"),
                                   detail::require_string(je, "to", "edge")});
        }
    }
    validate_trace(trace);
    return trace;
}

inline TraceSet parse_trace_set(std::string_view document, bool strict = true) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(document);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw SchemaError("document root must be an object");
    detail::reject_unknown(doc, {"query", "domain", "traces"}, "document", strict);
    TraceSet set;
    set.query = detail::require_string(doc, "query", "document");
    set.domain = domain_from(detail::require_string(doc, "domain", "document"));
    if (!doc.contains("traces") || !doc["traces"].is_array() || doc["traces"].empty())
        throw SchemaError("document requires a non-empty traces array");
    std::set<std::string> ids;
    for (const auto& jt : doc["traces"]) {
        auto trace = parse_trace_object(jt, strict);
        if (!ids.insert(trace.trace_id).second)
            throw SchemaError("duplicate trace_id '" + trace.trace_id + "'");
        set.traces.push_back(std::move(trace));
    }
    return set;
}

inline nlohmann::ordered_json trace_to_json(const ReasoningTrace& trace) {
    nlohmann::ordered_json jt;
    jt["trace_id"] = trace.trace_id;
    jt["final_answer"] = trace.final_answer;
    jt["statements"] = nlohmann::ordered_json::array();
    for (const auto& s : trace.statements) {
        nlohmann::ordered_json js;
        js["id"] = s.id;
        js["text"] = s.text;
        js["kind"] = to_string(s.kind);
        if (s.canonical) js["canonical"] = *s.canonical;
        if (s.value) js["value"] = *s.value;
        if (s.rule) js["rule"] = *s.rule;
        if (!s.premises.empty()) js["premises"] = s.premises;
        jt["statements"].push_back(std::move(js));
    }
    jt["edges"] = nlohmann::ordered_json::array();
    for (const auto& e : trace.edges) jt["edges"].push_back({{"from", e.from}, {"to", e.to}});
    return jt;
}

inline std::string serialize_trace_set(const TraceSet& set) {
    nlohmann::ordered_json doc;
    doc["query"] = set.query;
    doc["domain"] = to_string(set.domain);
    doc["traces"] = nlohmann::ordered_json::array();
    for (const auto& t : set.traces) doc["traces"].push_back(trace_to_json(t));
    return doc.dump(2) + "\n";
}

} // namespace scv

#endif
