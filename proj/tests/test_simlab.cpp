#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "scv/sampler.hpp"
#include "scv/simlab.hpp"

TEST_CASE("bound_error matches the worked example and rejects bad tau") {
    CHECK(scv::bound_error(0.3, 11) == Catch::Approx(0.4148).margin(5e-5));
    CHECK(scv::bound_error(0.0, 10) == Catch::Approx(std::exp(-5.0)));
    CHECK(scv::bound_error(0.3, 0) == 1.0);
    CHECK_THROWS_AS(scv::bound_error(0.5, 5), scv::DomainError);
    CHECK_THROWS_AS(scv::bound_error(-0.1, 5), scv::DomainError);
}

TEST_CASE("sample_complexity matches the worked examples") {
    CHECK(scv::sample_complexity(0.3, 0.01) == Catch::Approx(57.57).margin(0.01));
    CHECK(scv::sample_complexity(0.3, 1.0) == 0.0);
    CHECK(scv::sample_complexity(0.0, std::exp(-2.0)) == Catch::Approx(4.0));
    CHECK_THROWS_AS(scv::sample_complexity(0.5, 0.01), scv::DomainError);
    CHECK_THROWS_AS(scv::sample_complexity(0.3, 0.0), scv::DomainError);
    CHECK_THROWS_AS(scv::sample_complexity(0.3, 1.5), scv::DomainError);
}

TEST_CASE("majority simulation tracks the exact binomial probability") {
    scv::SimSpec spec;
    spec.p_correct = 0.8;
    spec.k = 5;
    spec.trials = 20000;
    spec.seed = 42;
    auto r = scv::simulate_majority(spec);
    double exact = helpers::oracle::binom_cdf(5, 0.8, 2);
    CHECK(exact == Catch::Approx(0.05792).margin(1e-5));
    CHECK(std::abs(r.empirical - exact) <= r.ci_halfwidth);
    CHECK(r.satisfied);
    CHECK(r.theoretical_bound == Catch::Approx(std::exp(-5.0 * 0.36 / 2.0)));
}

TEST_CASE("majority with tau zero never errs; k=1 errs at rate tau") {
    scv::SimSpec spec;
    spec.tau = 0.0;
    spec.k = 5;
    spec.trials = 2000;
    CHECK(scv::simulate_majority(spec).empirical == 0.0);

    spec.tau = 0.3;
    spec.k = 1;
    spec.trials = 50000;
    auto r = scv::simulate_majority(spec);
    CHECK(r.empirical == Catch::Approx(0.3).margin(0.01));
}

TEST_CASE("ties count against the majority") {
    scv::SimSpec spec;
    spec.p_correct = 0.5;
    spec.p_incorrect = 0.5;
    spec.k = 2;
    spec.trials = 50000;
    spec.seed = 9;
    auto r = scv::simulate_majority(spec);
    // wrong unless both draws are correct: 1 - 0.25
    CHECK(r.empirical == Catch::Approx(0.75).margin(0.01));
}

TEST_CASE("chain propagation bound is exact at T=5, eps=0.1") {
    scv::SimSpec spec;
    spec.epsilon = 0.1;
    spec.dag.kind = scv::DagSpec::Kind::chain;
    spec.dag.nodes = 5;
    spec.trials = 20000;
    spec.seed = 3;
    auto r = scv::simulate_propagation(spec);
    CHECK(r.theoretical_bound == Catch::Approx(0.40951).margin(1e-12));
    CHECK(std::abs(r.empirical - 0.40951) <= r.ci_halfwidth);
    CHECK(r.satisfied);
}

TEST_CASE("single-node chain bound equals epsilon exactly") {
    scv::DagSpec d;
    d.kind = scv::DagSpec::Kind::chain;
    d.nodes = 1;
    auto shape = scv::build_dag(d, 0);
    CHECK(scv::propagation_bound(0.07, shape) == Catch::Approx(0.07).margin(1e-15));
}

TEST_CASE("diamond and random DAGs satisfy the propagation bound") {
    scv::SimSpec spec;
    spec.epsilon = 0.1;
    spec.trials = 20000;
    spec.seed = 17;
    spec.dag.kind = scv::DagSpec::Kind::diamond;
    auto d = scv::simulate_propagation(spec);
    CHECK(d.satisfied);

    spec.dag.kind = scv::DagSpec::Kind::random;
    spec.dag.nodes = 7;
    spec.dag.edge_prob = 0.3;
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        spec.seed = seed;
        CHECK(scv::simulate_propagation(spec).satisfied);
    }
}

TEST_CASE("propagation bound is invalid once d*epsilon reaches one") {
    scv::DagSpec d;
    d.kind = scv::DagSpec::Kind::diamond;  // max in-degree 2
    auto shape = scv::build_dag(d, 0);
    CHECK_THROWS_AS(scv::propagation_bound(0.5, shape), scv::BoundInvalidError);
    CHECK_NOTHROW(scv::propagation_bound(0.49, shape));
}

TEST_CASE("intermediate benefit reports the ratio and claimed factor") {
    scv::SimSpec spec;
    spec.epsilon = 0.2;
    spec.dag.kind = scv::DagSpec::Kind::chain;
    spec.dag.nodes = 5;
    spec.trials = 20000;
    spec.seed = 5;
    auto b = scv::intermediate_benefit(spec, 0.05);
    CHECK(b.error_at_epsilon > b.error_at_epsilon_prime);
    CHECK(b.empirical_ratio > 1.0);
    CHECK(b.claimed_factor == Catch::Approx(std::pow(0.95 / 0.8, 5.0)));

    CHECK_THROWS_AS(scv::intermediate_benefit(spec, 0.3), scv::DomainError);
    CHECK_THROWS_AS(scv::intermediate_benefit(spec, 0.0), scv::DegenerateError);
}

TEST_CASE("entropy reduction holds exactly on random joints") {
    auto r = scv::entropy_reduction_check(200, 7);
    CHECK(r.satisfied);
    CHECK(r.empirical <= 1e-9);
    CHECK_THROWS_AS(scv::entropy_reduction_check(0, 7), scv::DomainError);
}

TEST_CASE("convergence stays under the Hoeffding bound") {
    scv::SimSpec spec;
    spec.trials = 20000;
    spec.seed = 11;
    for (double delta : {0.05, 0.1, 0.2}) {
        for (int k : {10, 50, 200}) {
            spec.k = k;
            auto r = scv::convergence_check(spec, 0.7, delta);
            CHECK(r.empirical <= r.theoretical_bound + r.ci_halfwidth);
            CHECK(r.satisfied);
        }
    }
    spec.k = 10;
    CHECK(scv::convergence_check(spec, 0.7, 1.0).empirical == 0.0);
}

TEST_CASE("simulations are jobs-invariant") {
    scv::SimSpec a;
    a.tau = 0.25;
    a.k = 7;
    a.trials = 5000;
    a.seed = 13;
    auto serial = scv::simulate_majority(a);
    a.jobs = 4;
    auto parallel = scv::simulate_majority(a);
    CHECK(serial.empirical == parallel.empirical);

    scv::SimSpec p;
    p.epsilon = 0.15;
    p.dag.kind = scv::DagSpec::Kind::random;
    p.dag.nodes = 6;
    p.trials = 5000;
    p.seed = 13;
    auto s1 = scv::simulate_propagation(p);
    p.jobs = 4;
    auto s2 = scv::simulate_propagation(p);
    CHECK(s1.empirical == s2.empirical);

    auto e1 = scv::entropy_reduction_check(50, 3, 3, 1);
    auto e2 = scv::entropy_reduction_check(50, 3, 3, 4);
    CHECK(e1.empirical == e2.empirical);
}

TEST_CASE("psi falls as corruption rises across mock sample sets") {
    scv::TokenProvider provider;
    auto truth = helpers::chain_trace(
        "truth", {"set up the problem", "apply the identity", "simplify the result"}, "7");
    std::vector<double> rates, psis;
    int idx = 0;
    for (double rate : {0.0, 0.1, 0.2, 0.35, 0.5, 0.7}) {
        for (std::uint64_t rep = 0; rep < 5; ++rep) {
            scv::MockBackend backend(truth, rate, 1000 + std::uint64_t(idx++));
            scv::TraceSet set;
            set.query = "q";
            set.domain = scv::Domain::generic;
            for (int i = 0; i < 5; ++i) set.traces.push_back(backend.generate("q", i));
            rates.push_back(rate);
            psis.push_back(scv::psi_global(set, provider));
        }
    }
    double rho = helpers::oracle::spearman(rates, psis);
    CHECK(rho < -0.8);  // strongly negative: more corruption, less agreement
}
