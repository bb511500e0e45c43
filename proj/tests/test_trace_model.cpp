#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "helpers.hpp"
#include "scv/rng.hpp"
#include "scv/trace_model.hpp"

namespace {

const char* kMinimalDoc = R"({
  "query": "q",
  "domain": "generic",
  "traces": [
    {
      "trace_id": "t1",
      "final_answer": "done",
      "statements": [
        {"id": "a", "text": "first", "kind": "claim"},
        {"id": "b", "text": "second", "kind": "claim"}
      ],
      "edges": [{"from": "a", "to": "b"}]
    }
  ]
})";

} // namespace

TEST_CASE("minimal document parses with k=1") {
    scv::TraceSet set = scv::parse_trace_set(kMinimalDoc);
    REQUIRE(set.k() == 1);
    CHECK(set.traces[0].statements.size() == 2);
    CHECK(set.traces[0].edges.size() == 1);
    CHECK(set.traces[0].final_answer == "done");
}

TEST_CASE("serialize then parse is the identity") {
    scv::TraceSet set = scv::parse_trace_set(kMinimalDoc);
    CHECK(scv::parse_trace_set(scv::serialize_trace_set(set)) == set);
}

TEST_CASE("round trip preserves optional statement fields") {
    scv::TraceSet set = helpers::make_set({helpers::chain_trace("t", {"x", "y"}, "ans")},
                                          scv::Domain::theorem);
    set.traces[0].statements[0].canonical = "canon";
    set.traces[0].statements[1].kind = scv::StatementKind::numeric;
    set.traces[0].statements[1].value = 2.5;
    set.traces[0].statements[1].rule = "arithmetic_fact";
    set.traces[0].statements[1].premises = {"s0"};
    CHECK(scv::parse_trace_set(scv::serialize_trace_set(set)) == set);
}

TEST_CASE("cyclic edges raise CycleError naming an offending edge") {
    std::string doc = R"({"query":"q","domain":"generic","traces":[{
        "trace_id":"t","final_answer":"x",
        "statements":[{"id":"a","text":"a","kind":"claim"},{"id":"b","text":"b","kind":"claim"}],
        "edges":[{"from":"a","to":"b"},{"from":"b","to":"a"}]}]})";
    try {
        scv::parse_trace_set(doc);
        FAIL("expected CycleError");
    } catch (const scv::CycleError& e) {
        CHECK((e.from == "a" || e.from == "b"));
        CHECK(std::string(e.what()).find("cycle") != std::string::npos);
    }
}

TEST_CASE("edge to unknown id raises DanglingEdgeError") {
    std::string doc = R"({"query":"q","domain":"generic","traces":[{
        "trace_id":"t","final_answer":"x",
        "statements":[{"id":"a","text":"a","kind":"claim"}],
        "edges":[{"from":"a","to":"z"}]}]})";
    CHECK_THROWS_AS(scv::parse_trace_set(doc), scv::DanglingEdgeError);
}

TEST_CASE("schema violations raise SchemaError") {
    CHECK_THROWS_AS(scv::parse_trace_set("not json"), scv::SchemaError);
    CHECK_THROWS_AS(scv::parse_trace_set("[1,2]"), scv::SchemaError);
    CHECK_THROWS_AS(scv::parse_trace_set(R"({"query":"q","domain":"generic","traces":[]})"),
                    scv::SchemaError);
    CHECK_THROWS_AS(scv::parse_trace_set(R"({"query":"q","domain":"nope","traces":[{}]})"),
                    scv::SchemaError);
}

TEST_CASE("duplicate edges are rejected, not deduplicated") {
    scv::ReasoningTrace t = helpers::chain_trace("t", {"a", "b"}, "x");
    t.edges.push_back(t.edges[0]);
    CHECK_THROWS_AS(scv::validate_trace(t), scv::SchemaError);
}

TEST_CASE("self-loops, duplicate ids, and valueless numerics are rejected") {
    scv::ReasoningTrace t = helpers::chain_trace("t", {"a", "b"}, "x");
    t.edges[0].to = "s0";
    CHECK_THROWS_AS(scv::validate_trace(t), scv::SchemaError);

    scv::ReasoningTrace u = helpers::chain_trace("t", {"a", "b"}, "x");
    u.statements[1].id = "s0";
    CHECK_THROWS_AS(scv::validate_trace(u), scv::SchemaError);

    scv::ReasoningTrace v = helpers::chain_trace("t", {"a"}, "x");
    v.statements[0].kind = scv::StatementKind::numeric;
    CHECK_THROWS_AS(scv::validate_trace(v), scv::SchemaError);
}

TEST_CASE("duplicate trace ids are rejected") {
    scv::TraceSet set = helpers::make_set(
        {helpers::chain_trace("t", {"a"}, "x"), helpers::chain_trace("t", {"a"}, "x")});
    CHECK_THROWS_AS(scv::parse_trace_set(scv::serialize_trace_set(set)), scv::SchemaError);
}

TEST_CASE("unknown fields are rejected in strict mode and ignored in lenient mode") {
    std::string doc = R"({"query":"q","domain":"generic","extra":1,"traces":[{
        "trace_id":"t","final_answer":"x",
        "statements":[{"id":"a","text":"a","kind":"claim"}],"edges":[]}]})";
    CHECK_THROWS_AS(scv::parse_trace_set(doc), scv::SchemaError);
    CHECK(scv::parse_trace_set(doc, false).k() == 1);
}

TEST_CASE("chain topo order follows the chain") {
    scv::ReasoningGraph g = scv::build_graph(helpers::chain_trace("t", {"a", "b", "c"}, "x"));
    CHECK(g.topo_order == std::vector<int>{0, 1, 2});
}

TEST_CASE("edgeless trace keeps input order") {
    scv::ReasoningTrace t;
    t.trace_id = "t";
    t.final_answer = "x";
    for (const char* id : {"z", "m", "a"}) t.statements.push_back(helpers::stmt(id, id));
    scv::ReasoningGraph g = scv::build_graph(t);
    CHECK(g.topo_order == std::vector<int>{0, 1, 2});
}

TEST_CASE("diamond topo order starts at the source and ends at the sink") {
    scv::ReasoningTrace t;
    t.trace_id = "t";
    t.final_answer = "x";
    for (const char* id : {"a", "b", "c", "d"}) t.statements.push_back(helpers::stmt(id, id));
    t.edges = {{"a", "b"}, {"a", "c"}, {"b", "d"}, {"c", "d"}};
    scv::ReasoningGraph g = scv::build_graph(t);
    REQUIRE(g.topo_order.size() == 4);
    CHECK(g.topo_order.front() == 0);
    CHECK(g.topo_order.back() == 3);
}

TEST_CASE("graph preserves vertex and edge counts") {
    scv::ReasoningTrace t = helpers::chain_trace("t", {"a", "b", "c", "d"}, "x");
    scv::ReasoningGraph g = scv::build_graph(t);
    CHECK(g.n == t.statements.size());
    CHECK(g.edges.size() == t.edges.size());
}

TEST_CASE("random DAGs always build valid graphs with consistent topo order") {
    scv::Rng rng(2024);
    std::vector<std::string> pool;
    for (int i = 0; i < 12; ++i) pool.push_back("fact " + std::to_string(i));
    for (int iter = 0; iter < 200; ++iter) {
        int n = 1 + int(rng.below(8));
        scv::ReasoningTrace t = helpers::random_trace(rng, "t", n, pool, 0.4);
        REQUIRE_NOTHROW(scv::validate_trace(t));
        scv::ReasoningGraph g = scv::build_graph(t);
        REQUIRE(g.topo_order.size() == g.n);
        std::vector<int> pos(g.n);
        for (std::size_t i = 0; i < g.n; ++i) pos[std::size_t(g.topo_order[i])] = int(i);
        for (const auto& [u, v] : g.edges) REQUIRE(pos[std::size_t(u)] < pos[std::size_t(v)]);
    }
}
