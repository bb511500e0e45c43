#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "helpers.hpp"
#include "scv/domain_symbolic.hpp"
#include "scv/rng.hpp"

using scv::Equivalence;

namespace {

Equivalence decide(const char* a, const char* b) {
    return scv::algebraic_equivalence(scv::parse_expr(a), scv::parse_expr(b));
}

// Random polynomial with small integer coefficients, rendered as text.
std::string random_poly_text(scv::Rng& rng, int vars, int degree) {
    const char* names[] = {"x", "y", "z"};
    std::string out;
    int terms = 1 + int(rng.below(4));
    for (int t = 0; t < terms; ++t) {
        std::string term = std::to_string(rng.range(-5, 5));
        for (int v = 0; v < vars; ++v) {
            int e = int(rng.below(std::uint64_t(degree) + 1));
            if (e > 0) term += std::string("*") + names[v] + "^" + std::to_string(e);
        }
        out += (t ? " + " : "") + term;
    }
    return out;
}

} // namespace

TEST_CASE("showcase: expansion proves the square identity") {
    CHECK(decide("x^2+2x+1", "(x+1)^2") == Equivalence::equivalent);
}

TEST_CASE("showcase: a sign slip is caught") {
    CHECK(decide("(a-b)(c-d)", "ac-ad-bc-bd") == Equivalence::not_equivalent);
}

TEST_CASE("showcase: cancelling a factor earns the domain caveat") {
    CHECK(decide("(x^2-1)/(x-1)", "x+1") == Equivalence::equivalent_with_domain_caveat);
}

TEST_CASE("pythagorean identity is equivalent without caveat") {
    CHECK(decide("sin(x)^2 + cos(x)^2", "1") == Equivalence::equivalent);
}

TEST_CASE("tan versus sin over cos differ only in singular sets") {
    CHECK(decide("tan(x)", "sin(x)/cos(x)") == Equivalence::equivalent_with_domain_caveat);
}

TEST_CASE("numeric path rejects near misses") {
    CHECK(decide("sin(2x)", "2*sin(x)*cos(x)") == Equivalence::equivalent);
    CHECK(decide("sin(2x)", "2*sin(x)") == Equivalence::not_equivalent);
    CHECK(decide("log(exp(x))", "x") == Equivalence::equivalent_with_domain_caveat);
}

TEST_CASE("totally undefined expressions raise EvaluationError") {
    CHECK_THROWS_AS(decide("1/(x-x)", "1/(x-x)"), scv::EvaluationError);
    CHECK_THROWS_AS(decide("sqrt(-1-x^2)", "sqrt(-1-x^2)"), scv::EvaluationError);
}

TEST_CASE("randomized path is deterministic in the seed") {
    auto a = scv::parse_expr("(x^3-1)/(x-1)");
    auto b = scv::parse_expr("x^2+x+1");
    scv::EquivOptions opts;
    CHECK(scv::randomized_equivalence(a, b, opts) ==
          Equivalence::equivalent_with_domain_caveat);
    CHECK(scv::randomized_equivalence(a, b, opts) == scv::randomized_equivalence(a, b, opts));
}

TEST_CASE("randomized verdicts agree with the expansion oracle on polynomials") {
    scv::Rng rng(2718);
    int disagreements = 0;
    for (int iter = 0; iter < 100; ++iter) {
        std::string ta = random_poly_text(rng, 1 + int(rng.below(3)), 3);
        std::string tb = rng.bernoulli(0.5) ? ta + " + 0" : random_poly_text(rng, 2, 3);
        auto a = scv::parse_expr(ta);
        auto b = scv::parse_expr(tb);
        auto pa = scv::expand(a);
        auto pb = scv::expand(b);
        REQUIRE(pa.has_value());
        REQUIRE(pb.has_value());
        bool truth = *pa == *pb;
        auto verdict = scv::randomized_equivalence(a, b);
        if ((verdict == Equivalence::equivalent) != truth) ++disagreements;
    }
    CHECK(disagreements == 0);
}

TEST_CASE("tree similarity matches the spec example and the naive oracle") {
    auto a = scv::parse_expr("x+1");
    auto b = scv::parse_expr("x+2");
    CHECK(scv::tree_similarity(a, b) == Catch::Approx(1.0 - 1.0 / 6.0));

    scv::Rng rng(1618);
    const char* corpus[] = {"x+1", "x+2", "2x", "x^2", "sin(x)", "x*y+1", "-x", "x/2", "(x+y)^2"};
    for (int iter = 0; iter < 40; ++iter) {
        auto t1 = scv::parse_expr(corpus[rng.below(9)]);
        auto t2 = scv::parse_expr(corpus[rng.below(9)]);
        scv::LabelTree l1 = scv::to_label_tree(scv::canonical_sort(t1));
        scv::LabelTree l2 = scv::to_label_tree(scv::canonical_sort(t2));
        std::size_t want = helpers::oracle::naive_ted(l1, l2);
        REQUIRE(scv::tree_edit_distance(l1, l2) == want);
    }
}

TEST_CASE("tree similarity is symmetric, bounded, and 1 on equal trees") {
    const char* corpus[] = {"x+1", "2x+3y", "sin(x)+1", "x^2/2", "(a+b)(a-b)"};
    for (const char* sa : corpus) {
        auto a = scv::parse_expr(sa);
        CHECK(scv::tree_similarity(a, a) == 1.0);
        for (const char* sb : corpus) {
            auto b = scv::parse_expr(sb);
            double s = scv::tree_similarity(a, b);
            CHECK(s >= 0.0);
            CHECK(s <= 1.0);
            CHECK(s == scv::tree_similarity(b, a));
        }
    }
    CHECK(scv::tree_similarity(nullptr, nullptr) == 1.0);
    auto x = scv::parse_expr("x");
    CHECK(scv::tree_similarity(&x, nullptr) == 0.0);
}

TEST_CASE("commutative reordering costs nothing in tree similarity") {
    auto a = scv::parse_expr("x + 2y + z^2");
    auto b = scv::parse_expr("z^2 + x + 2y");
    CHECK(scv::tree_similarity(a, b) == 1.0);
}

TEST_CASE("sc_symbolic blends TS and AE over answer pairs") {
    scv::TraceSet set = helpers::make_set(
        {
            helpers::chain_trace("t1", {"work"}, "x+1"),
            helpers::chain_trace("t2", {"work"}, "(x+1)"),
            helpers::chain_trace("t3", {"work"}, "x+2"),
        },
        scv::Domain::symbolic);
    auto s = scv::sc_symbolic(set, 0.5);
    // pairs: (t1,t2) identical, (t1,t3) and (t2,t3) differ by one leaf
    CHECK(s.algebraic_equivalence == Catch::Approx(1.0 / 3.0));
    CHECK(s.tree_similarity == Catch::Approx((1.0 + 5.0 / 6.0 + 5.0 / 6.0) / 3.0));
    CHECK(s.combined == Catch::Approx(0.5 * s.tree_similarity + 0.5 * s.algebraic_equivalence));
    CHECK_FALSE(s.domain_caveat);
    CHECK_FALSE(s.degenerate);

    CHECK_THROWS_AS(scv::sc_symbolic(set, 1.5), scv::DomainError);
}

TEST_CASE("sc_symbolic flags domain caveats and lambda boundaries work") {
    scv::TraceSet set = helpers::make_set(
        {
            helpers::chain_trace("t1", {"work"}, "(x^2-1)/(x-1)"),
            helpers::chain_trace("t2", {"work"}, "x+1"),
        },
        scv::Domain::symbolic);
    auto s = scv::sc_symbolic(set, 0.5);
    CHECK(s.algebraic_equivalence == 1.0);
    CHECK(s.domain_caveat);

    auto ts_only = scv::sc_symbolic(set, 1.0);
    CHECK(ts_only.combined == ts_only.tree_similarity);
    auto ae_only = scv::sc_symbolic(set, 0.0);
    CHECK(ae_only.combined == 1.0);
}

TEST_CASE("unparseable answers are excluded with warnings") {
    scv::TraceSet set = helpers::make_set(
        {
            helpers::chain_trace("t1", {"work"}, "x+1"),
            helpers::chain_trace("t2", {"work"}, "x+1"),
            helpers::chain_trace("t3", {"work"}, "no idea @@"),
        },
        scv::Domain::symbolic);
    auto s = scv::sc_symbolic(set, 0.5);
    CHECK(s.combined == 1.0);
    REQUIRE(s.warnings.size() == 1);
    CHECK(s.warnings[0].find("t3") != std::string::npos);

    scv::TraceSet lone = helpers::make_set(
        {
            helpers::chain_trace("t1", {"work"}, "x+1"),
            helpers::chain_trace("t2", {"work"}, "also not parseable !!"),
        },
        scv::Domain::symbolic);
    auto d = scv::sc_symbolic(lone, 0.5);
    CHECK(d.degenerate);
    CHECK(d.combined == 1.0);
}
