#ifndef SCV_SAMPLER_HPP
#define SCV_SAMPLER_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "scv/consistency.hpp"
#include "scv/errors.hpp"
#include "scv/rng.hpp"
#include "scv/trace_model.hpp"

namespace scv {

struct SamplerConfig {
    int k0 = 3;
    int k_max = 10;
    double tau_low = 0.5;
    double tau_high = 0.85;
    double rate = 1.0;  // the step-size factor (renamed from the sampler's alpha)
    std::uint64_t seed = 0;
};

// Pluggable source of traces; the mock backend is deterministic per
// (seed, sample_index), the HTTP backend idempotent per request id.
class GeneratorBackend {
public:
    virtual ~GeneratorBackend() = default;
    virtual ReasoningTrace generate(const std::string& query, int sample_index) = 0;
};

// Simulated corruptor over a ground-truth trace: each statement is corrupted
// independently with the given rate and corruption propagates to all
// descendants (worst-case propagation). A corrupted sink corrupts the final
// answer.
class MockBackend : public GeneratorBackend {
public:
    MockBackend(ReasoningTrace truth, double corruption_rate, std::uint64_t seed)
        : truth_(std::move(truth)), rate_(corruption_rate), seed_(seed) {
        validate_trace(truth_);
        graph_ = build_graph(truth_);
    }

    ReasoningTrace generate(const std::string& /*query*/, int sample_index) override {
        Rng rng(derive_seed(seed_, std::uint64_t(sample_index)));
        const std::size_t n = truth_.statements.size();
        std::vector<char> corrupted(n, 0);
        for (int v : graph_.topo_order) {
            for (int p : graph_.parents[std::size_t(v)])
                if (corrupted[std::size_t(p)]) corrupted[std::size_t(v)] = 1;
            if (!corrupted[std::size_t(v)] && rng.bernoulli(rate_)) corrupted[std::size_t(v)] = 1;
        }
        ReasoningTrace out = truth_;
        char buf[32];
        std::snprintf(buf, sizeof buf, "s%04d", sample_index);
        out.trace_id = buf;
        bool sink_corrupted = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (!corrupted[i]) continue;
            auto& s = out.statements[i];
            char tag[40];
            std::snprintf(tag, sizeof tag, "corrupt_%s_%llx", s.id.c_str(),
                          static_cast<unsigned long long>(rng.next_u64() & 0xffffffULL));
            s.text = tag;
            s.kind = StatementKind::claim;
            s.canonical.reset();
            s.value.reset();
            s.rule.reset();
            if (graph_.children[i].empty()) sink_corrupted = true;
        }
        if (sink_corrupted) {
            char tag[40];
            std::snprintf(tag, sizeof tag, "corrupt_ans_%llx",
                          static_cast<unsigned long long>(rng.next_u64() & 0xffffffULL));
            out.final_answer = tag;
        }
        return out;
    }

    const ReasoningTrace& truth() const { return truth_; }

private:
    ReasoningTrace truth_;
    double rate_;
    std::uint64_t seed_;
    ReasoningGraph graph_;
};

// delta = max(1, ceil(rate * (tau_low - min(lambda, tau_low)) * k_max))
inline int step_size(double lambda_t, const SamplerConfig& config) {
    if (lambda_t < 0 || lambda_t > 1) throw DomainError("lambda must lie in [0,1]");
    double gap = config.tau_low - std::min(lambda_t, config.tau_low);
    double raw = config.rate * gap * double(config.k_max);
    int delta = int(std::ceil(raw - 1e-9));
    return std::max(1, delta);
}

struct SamplerRound {
    int t = 0;
    double lambda = 0.0;
    int delta = 0;  // samples requested for the next round; 0 on the final round
};

enum class StopReason { high_consistency, budget_exhausted };

inline const char* to_string(StopReason r) {
    return r == StopReason::high_consistency ? "high_consistency" : "budget_exhausted";
}

struct SamplerOutcome {
    TraceSet traces;
    std::vector<SamplerRound> rounds;
    StopReason stop_reason = StopReason::budget_exhausted;
    int total_samples = 0;
    ReasoningTrace consensus;
};

// Highest mean per-statement atomic consistency; ties go to the smallest
// trace_id.
inline const ReasoningTrace& select_consensus(const TraceSet& set,
                                              const ConsistencyReport& report) {
    const ReasoningTrace* best = nullptr;
    double best_score = -1;
    for (const auto& t : set.traces) {
        double sum = 0;
        for (const auto& s : t.statements) {
            auto it = report.alignment.class_of.find({t.trace_id, s.id});
            if (it == report.alignment.class_of.end()) continue;
            sum += report.per_statement.at(
                class_key(report.alignment.classes[std::size_t(it->second)]));
        }
        double mean = t.statements.empty() ? 0 : sum / double(t.statements.size());
        if (!best || mean > best_score || (mean == best_score && t.trace_id < best->trace_id)) {
            best = &t;
            best_score = mean;
        }
    }
    return *best;
}

using ConsistencyScorer = std::function<ConsistencyReport(const TraceSet&)>;

inline ConsistencyScorer default_scorer(const SimilarityProvider& provider,
                                        const ConsistencyConfig& config = {}) {
    return [&provider, config](const TraceSet& set) { return full_report(set, provider, config); };
}

// Adaptive sampling loop: start with k0 samples, add delta samples while the
// combined score stays at or below tau_high and the budget allows, never
// exceeding k_max.
inline SamplerOutcome run_adaptive(const std::string& query, GeneratorBackend& backend,
                                   const SamplerConfig& config, const ConsistencyScorer& scorer,
                                   Domain domain = Domain::generic) {
    if (config.k0 < 1 || config.k0 > config.k_max)
        throw DomainError("sampler requires 1 <= k0 <= k_max");
    if (config.tau_low > config.tau_high)
        throw DomainError("sampler requires tau_low <= tau_high");
    SamplerOutcome outcome;
    outcome.traces.query = query;
    outcome.traces.domain = domain;
    int t = 0;
    auto draw = [&](int count) {
        for (int i = 0; i < count; ++i) outcome.traces.traces.push_back(backend.generate(query, t++));
    };
    draw(config.k0);
    ConsistencyReport report = scorer(outcome.traces);
    double lambda = report.combined;
    while (t < config.k_max && lambda <= config.tau_high) {
        int delta = std::min(step_size(lambda, config), config.k_max - t);
        outcome.rounds.push_back({t, lambda, delta});
        draw(delta);
        report = scorer(outcome.traces);
        lambda = report.combined;
    }
    outcome.rounds.push_back({t, lambda, 0});
    outcome.total_samples = t;
    outcome.stop_reason =
        lambda > config.tau_high ? StopReason::high_consistency : StopReason::budget_exhausted;
    outcome.consensus = select_consensus(outcome.traces, report);
    return outcome;
}

} // namespace scv

#endif
