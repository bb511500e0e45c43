#ifndef SCV_SIMLAB_HPP
#define SCV_SIMLAB_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "scv/errors.hpp"
#include "scv/parallel.hpp"
#include "scv/rng.hpp"

namespace scv {

// Bernoulli-DAG error model for validating the concentration and propagation
// bounds by simulation. Every trial owns a sub-seed derived from
// (seed, trial index), so parallel and serial runs agree bit for bit.

struct DagSpec {
    enum class Kind { chain, diamond, random };
    Kind kind = Kind::chain;
    int nodes = 5;
    double edge_prob = 0.3;  // random DAGs only
};

struct SimSpec {
    double tau = 0.3;        // per-statement error rate, < 0.5
    double epsilon = 0.1;    // per-step error rate (propagation model)
    double p_correct = 0.0;  // binary-correctness variant; 0 means "use 1 - tau"
    double p_incorrect = 0.0;
    int k = 5;
    int trials = 10000;
    DagSpec dag;
    double delta_target = 0.01;
    std::uint64_t seed = 0;
    unsigned jobs = 1;
};

struct SimResult {
    double empirical = 0.0;
    double theoretical_bound = 1.0;
    double ci_halfwidth = 0.0;  // 95% normal approximation
    bool satisfied = true;      // empirical <= bound + ci_halfwidth
};

namespace detail {

inline double proportion_ci(double p, int n) {
    return 1.96 * std::sqrt(p * (1.0 - p) / double(n));
}

inline SimResult make_result(double empirical, double bound, int trials) {
    SimResult r;
    r.empirical = empirical;
    r.theoretical_bound = bound;
    r.ci_halfwidth = proportion_ci(empirical, trials);
    r.satisfied = empirical <= bound + r.ci_halfwidth;
    return r;
}

} // namespace detail

// exp(-k(1-2tau)^2/2): majority-estimate error bound.
inline double bound_error(double tau, int k) {
    if (tau >= 0.5 || tau < 0) throw DomainError("bound_error requires 0 <= tau < 0.5");
    double margin = 1.0 - 2.0 * tau;
    return std::exp(-double(k) * margin * margin / 2.0);
}

// 2 ln(1/delta) / (1-2tau)^2: samples needed for error probability delta.
inline double sample_complexity(double tau, double delta) {
    if (tau >= 0.5 || tau < 0) throw DomainError("sample_complexity requires 0 <= tau < 0.5");
    if (delta <= 0 || delta > 1) throw DomainError("sample_complexity requires 0 < delta <= 1");
    double margin = 1.0 - 2.0 * tau;
    return 2.0 * std::log(1.0 / delta) / (margin * margin);
}

// Majority vote over k correctness draws; empirical probability the majority
// is wrong vs exp(-k(p_c - p_i)^2/2) (which reduces to bound_error when
// p_c = 1 - tau).
inline SimResult simulate_majority(const SimSpec& spec) {
    double pc = spec.p_correct > 0 ? spec.p_correct : 1.0 - spec.tau;
    double pi = spec.p_incorrect > 0 ? spec.p_incorrect : 1.0 - pc;
    std::vector<char> wrong(std::size_t(spec.trials), 0);
    parallel_for(std::size_t(spec.trials), spec.jobs, [&](std::size_t trial) {
        Rng rng(derive_seed(spec.seed, trial));
        int correct = 0;
        for (int i = 0; i < spec.k; ++i)
            if (rng.bernoulli(pc)) ++correct;
        wrong[trial] = correct * 2 <= spec.k;  // ties count against the majority
    });
    long long sum = 0;
    for (char w : wrong) sum += w;
    double margin = pc - pi;
    double bound = std::exp(-double(spec.k) * margin * margin / 2.0);
    return detail::make_result(double(sum) / double(spec.trials), bound, spec.trials);
}

struct DagShape {
    int nodes = 0;
    std::vector<std::pair<int, int>> edges;
    int max_in_degree = 0;
};

inline DagShape build_dag(const DagSpec& spec, std::uint64_t seed) {
    DagShape d;
    switch (spec.kind) {
        case DagSpec::Kind::chain:
            d.nodes = spec.nodes;
            for (int i = 0; i + 1 < spec.nodes; ++i) d.edges.emplace_back(i, i + 1);
            break;
        case DagSpec::Kind::diamond:
            d.nodes = 4;
            d.edges = {{0, 1}, {0, 2}, {1, 3}, {2, 3}};
            break;
        case DagSpec::Kind::random: {
            d.nodes = spec.nodes;
            Rng rng(derive_seed(seed, 0x4441475fULL));
            for (int i = 0; i < spec.nodes; ++i)
                for (int j = i + 1; j < spec.nodes; ++j)
                    if (rng.bernoulli(spec.edge_prob)) d.edges.emplace_back(i, j);
            break;
        }
    }
    std::vector<int> indeg(std::size_t(d.nodes), 0);
    for (const auto& [_, v] : d.edges) ++indeg[std::size_t(v)];
    for (int v : indeg) d.max_in_degree = std::max(d.max_in_degree, v);
    if (d.max_in_degree == 0) d.max_in_degree = 1;  // bound degenerates gracefully
    return d;
}

// 1 - (1-eps)^T (1-d*eps)^(|E|-T+1): error-propagation bound. Exact for
// chains, where the exponent of the second factor is zero.
inline double propagation_bound(double epsilon, const DagShape& dag) {
    double de = dag.max_in_degree * epsilon;
    if (de >= 1.0)
        throw BoundInvalidError("propagation bound invalid: d*epsilon >= 1");
    int exponent = int(dag.edges.size()) - dag.nodes + 1;
    double bound = 1.0 - std::pow(1.0 - epsilon, dag.nodes) * std::pow(1.0 - de, exponent);
    return std::clamp(bound, 0.0, 1.0);
}

namespace detail {

inline double propagation_error_rate(const DagShape& dag, double epsilon, std::uint64_t seed,
                                     int trials, unsigned jobs) {
    std::vector<char> wrong(std::size_t(trials), 0);
    parallel_for(std::size_t(trials), jobs, [&](std::size_t trial) {
        Rng rng(derive_seed(seed, trial));
        std::vector<char> err(std::size_t(dag.nodes), 0);
        for (int v = 0; v < dag.nodes; ++v)
            if (rng.bernoulli(epsilon)) err[std::size_t(v)] = 1;
        // edges are topologically ordered (i < j), so one pass propagates
        for (const auto& [u, v] : dag.edges)
            if (err[std::size_t(u)]) err[std::size_t(v)] = 1;
        wrong[trial] = err[std::size_t(dag.nodes - 1)];
    });
    long long sum = 0;
    for (char w : wrong) sum += w;
    return double(sum) / double(trials);
}

} // namespace detail

// Worst-case propagation on the specified DAG; empirical final-node error
// against the propagation bound.
inline SimResult simulate_propagation(const SimSpec& spec) {
    DagShape dag = build_dag(spec.dag, spec.seed);
    if (dag.nodes < 1) throw DomainError("propagation DAG requires at least one node");
    double bound = propagation_bound(spec.epsilon, dag);
    double empirical =
        detail::propagation_error_rate(dag, spec.epsilon, spec.seed, spec.trials, spec.jobs);
    return detail::make_result(empirical, bound, spec.trials);
}

struct BenefitResult {
    double error_at_epsilon = 0.0;
    double error_at_epsilon_prime = 0.0;
    double empirical_ratio = 0.0;
    double claimed_factor = 0.0;  // ((1-eps')/(1-eps))^T; reported, not asserted
};

// Reduction of final error when the per-step rate drops from epsilon to
// epsilon'. Both the empirical ratio and the claimed lower-bound factor are
// reported; the claimed direction does not hold universally, so nothing is
// asserted here.
inline BenefitResult intermediate_benefit(const SimSpec& spec, double epsilon_prime) {
    if (epsilon_prime > spec.epsilon)
        throw DomainError("intermediate_benefit requires epsilon' <= epsilon");
    DagShape dag = build_dag(spec.dag, spec.seed);
    BenefitResult out;
    out.error_at_epsilon =
        detail::propagation_error_rate(dag, spec.epsilon, spec.seed, spec.trials, spec.jobs);
    out.error_at_epsilon_prime = detail::propagation_error_rate(
        dag, epsilon_prime, derive_seed(spec.seed, 0x626e66ULL), spec.trials, spec.jobs);
    out.claimed_factor =
        std::pow((1.0 - epsilon_prime) / (1.0 - spec.epsilon), double(dag.nodes));
    if (out.error_at_epsilon_prime == 0.0)
        throw DegenerateError("no errors observed at epsilon' over " +
                              std::to_string(spec.trials) + " trials; ratio undefined");
    out.empirical_ratio = out.error_at_epsilon / out.error_at_epsilon_prime;
    return out;
}

// Exact conditional entropies over randomized discrete joints of
// (X, Y, C_1..C_n): checks the per-level decrease and the cumulative
// chain-rule inequality for every trial.
inline SimResult entropy_reduction_check(int trials, std::uint64_t seed, int n_constraints = 3,
                                         unsigned jobs = 1) {
    if (trials < 1) throw DomainError("entropy_reduction_check requires trials >= 1");
    const int nx = 2, ny = 4;
    const int cells = nx * ny * (1 << n_constraints);
    std::vector<double> worst(std::size_t(trials), 0.0);
    parallel_for(std::size_t(trials), jobs, [&](std::size_t trial) {
        Rng rng(derive_seed(seed, trial));
        std::vector<double> joint(std::size_t(cells), 0.0);
        double total = 0;
        for (auto& p : joint) {
            p = -std::log(1.0 - rng.uniform());  // Exp(1); Dirichlet(1,...,1) after normalizing
            total += p;
        }
        for (auto& p : joint) p /= total;

        // H(Y | X, C_1..C_i) for i = 0..n, exactly from the joint
        auto cond_entropy = [&](int i) {
            std::map<long long, std::map<int, double>> by_context;  // (x, c_1..c_i) -> y -> p
            for (int cell = 0; cell < cells; ++cell) {
                int x = cell % nx;
                int y = (cell / nx) % ny;
                int cbits = cell / (nx * ny);
                long long context = x * (1 << n_constraints) + (cbits & ((1 << i) - 1));
                by_context[context][y] += joint[std::size_t(cell)];
            }
            double h = 0;
            for (const auto& [_, dist] : by_context) {
                double mass = 0;
                for (const auto& [_, p] : dist) mass += p;
                if (mass <= 0) continue;
                for (const auto& [_, p] : dist)
                    if (p > 0) h -= p * std::log(p / mass);
            }
            return h;
        };

        std::vector<double> h(std::size_t(n_constraints) + 1);
        for (int i = 0; i <= n_constraints; ++i) h[std::size_t(i)] = cond_entropy(i);
        double violation = 0;
        double info_sum = 0;
        for (int i = 1; i <= n_constraints; ++i) {
            violation = std::max(violation, h[std::size_t(i)] - h[std::size_t(i - 1)]);
            info_sum += h[std::size_t(i - 1)] - h[std::size_t(i)];
        }
        // cumulative form: H(Y|X,C_1..C_n) <= H(Y|X) - sum of conditional informations
        violation = std::max(violation,
                             h[std::size_t(n_constraints)] - (h[0] - info_sum));
        worst[trial] = violation;
    });
    double max_violation = 0;
    for (double w : worst) max_violation = std::max(max_violation, w);
    SimResult r;
    r.empirical = max_violation;
    r.theoretical_bound = 1e-9;
    r.ci_halfwidth = 0.0;
    r.satisfied = max_violation <= r.theoretical_bound;
    return r;
}

// P(|f - f_hat| > delta) over trials of k appearance draws at rate f,
// against the two-sided Hoeffding bound 2 exp(-2 k delta^2).
inline SimResult convergence_check(const SimSpec& spec, double f, double delta) {
    std::vector<char> deviated(std::size_t(spec.trials), 0);
    parallel_for(std::size_t(spec.trials), spec.jobs, [&](std::size_t trial) {
        Rng rng(derive_seed(spec.seed, trial));
        int hits = 0;
        for (int i = 0; i < spec.k; ++i)
            if (rng.bernoulli(f)) ++hits;
        double f_hat = double(hits) / double(spec.k);
        deviated[trial] = std::abs(f - f_hat) > delta;
    });
    long long sum = 0;
    for (char d : deviated) sum += d;
    double bound = std::min(1.0, 2.0 * std::exp(-2.0 * double(spec.k) * delta * delta));
    return detail::make_result(double(sum) / double(spec.trials), bound, spec.trials);
}

} // namespace scv

#endif
