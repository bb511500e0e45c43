// scv: structured consistency verification for sampled reasoning traces.
// Subcommands: verify | sample | simulate | repair | report.
// Exit codes: 0 success, 2 input/validation error, 3 internal error.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scv/consistency.hpp"
#include "scv/domain_numeric.hpp"
#include "scv/domain_symbolic.hpp"
#include "scv/domain_theorem.hpp"
#include "scv/remote.hpp"
#include "scv/repair.hpp"
#include "scv/report_io.hpp"
#include "scv/sampler.hpp"
#include "scv/simlab.hpp"
#include "scv/trace_model.hpp"

namespace {

namespace fs = std::filesystem;

struct GlobalOpts {
    std::uint64_t seed = 0;
    unsigned jobs = 1;
    std::string output_dir = ".";
    std::string format = "both";
};

struct ProviderOpts {
    std::string provider = "token";
    double threshold = 0.85;
    std::string embed_url;
};

std::unique_ptr<scv::SimilarityProvider> make_provider(const ProviderOpts& opts) {
    if (opts.provider == "token")
        return std::make_unique<scv::TokenProvider>(opts.threshold);
    if (opts.provider == "canonical")
        return std::make_unique<scv::CanonicalProvider>(opts.threshold);
    if (opts.provider == "remote") {
        if (opts.embed_url.empty())
            throw scv::DomainError("remote provider requires --embed-url or SCV_EMBED_URL");
        return std::make_unique<scv::RemoteProvider>(opts.embed_url, opts.threshold);
    }
    throw scv::DomainError("unknown similarity provider '" + opts.provider + "'");
}

scv::IsoOptions make_iso(const std::string& method, int cap) {
    scv::IsoOptions iso;
    iso.exact_cap = cap;
    if (method == "exact")
        iso.mode = scv::IsoOptions::Mode::exact;
    else if (method == "spectral")
        iso.mode = scv::IsoOptions::Mode::spectral;
    else if (method == "auto")
        iso.mode = scv::IsoOptions::Mode::auto_select;
    else
        throw scv::DomainError("unknown iso method '" + method + "'");
    return iso;
}

void write_outputs(const GlobalOpts& g, const std::string& stem,
                   const nlohmann::ordered_json* json, const std::string* csv) {
    fs::create_directories(g.output_dir);
    if (json && (g.format == "json" || g.format == "both"))
        scv::write_file((fs::path(g.output_dir) / (stem + ".json")).string(), json->dump(2) + "\n");
    if (csv && (g.format == "csv" || g.format == "both"))
        scv::write_file((fs::path(g.output_dir) / (stem + ".csv")).string(), *csv);
}

scv::DagSpec parse_dag(const std::string& text) {
    scv::DagSpec dag;
    if (text == "diamond") {
        dag.kind = scv::DagSpec::Kind::diamond;
        dag.nodes = 4;
        return dag;
    }
    if (text.rfind("chain:", 0) == 0) {
        dag.kind = scv::DagSpec::Kind::chain;
        dag.nodes = std::stoi(text.substr(6));
        if (dag.nodes < 1) throw scv::DomainError("chain needs at least one node");
        return dag;
    }
    if (text.rfind("random:", 0) == 0) {
        dag.kind = scv::DagSpec::Kind::random;
        auto rest = text.substr(7);
        auto comma = rest.find(',');
        if (comma == std::string::npos)
            throw scv::DomainError("random DAG spec is random:<nodes>,<edge-prob>");
        dag.nodes = std::stoi(rest.substr(0, comma));
        dag.edge_prob = std::stod(rest.substr(comma + 1));
        if (dag.nodes < 1 || dag.edge_prob < 0 || dag.edge_prob > 1)
            throw scv::DomainError("random DAG spec out of range");
        return dag;
    }
    throw scv::DomainError("unknown DAG spec '" + text + "' (chain:T | diamond | random:n,p)");
}

int cmd_verify(const GlobalOpts& g, const ProviderOpts& popts, const std::string& traces_path,
               bool lenient, double alpha, double flag_threshold, const std::string& iso_method,
               int iso_cap, double beta, double sym_lambda, double numeric_rel_tol) {
    scv::TraceSet set = scv::parse_trace_set(scv::read_file(traces_path), !lenient);
    for (const auto& t : set.traces) scv::validate_trace(t);
    auto provider = make_provider(popts);

    scv::ConsistencyConfig config;
    config.alpha = alpha;
    config.flag_threshold = flag_threshold;
    config.iso = make_iso(iso_method, iso_cap);
    config.jobs = g.jobs;
    scv::ConsistencyReport report = scv::full_report(set, *provider, config);

    nlohmann::ordered_json j = scv::report_to_json(report);
    std::string csv = scv::report_to_csv(report);
    j["domain"] = scv::to_string(set.domain);
    switch (set.domain) {
        case scv::Domain::theorem: {
            scv::TheoremScore ts = scv::sc_theorem(set, beta, *provider, config.iso, g.jobs);
            j["theorem"] = {{"sc_proof", ts.sc_proof},
                            {"soundness", ts.soundness},
                            {"beta", ts.beta},
                            {"combined", ts.combined},
                            {"vacuous_soundness", ts.vacuous_soundness}};
            csv += "domain,theorem.sc_proof," + scv::fmt_num(ts.sc_proof) + ",0\n";
            csv += "domain,theorem.soundness," + scv::fmt_num(ts.soundness) + ",0\n";
            csv += "domain,theorem.combined," + scv::fmt_num(ts.combined) + ",0\n";
            break;
        }
        case scv::Domain::symbolic: {
            scv::SymbolicScore ss = scv::sc_symbolic(set, sym_lambda);
            j["symbolic"] = {{"tree_similarity", ss.tree_similarity},
                             {"algebraic_equivalence", ss.algebraic_equivalence},
                             {"lambda", ss.lambda},
                             {"combined", ss.combined},
                             {"domain_caveat", ss.domain_caveat},
                             {"warnings", ss.warnings}};
            csv += "domain,symbolic.tree_similarity," + scv::fmt_num(ss.tree_similarity) + ",0\n";
            csv += "domain,symbolic.algebraic_equivalence," +
                   scv::fmt_num(ss.algebraic_equivalence) + ",0\n";
            csv += "domain,symbolic.combined," + scv::fmt_num(ss.combined) + ",0\n";
            break;
        }
        case scv::Domain::numeric: {
            std::vector<double> answers;
            for (const auto& t : set.traces) {
                try {
                    answers.push_back(std::stod(t.final_answer));
                } catch (const std::exception&) {
                }
            }
            if (!answers.empty()) {
                scv::NumericSample ns = scv::sc_numerical(answers);
                double tc = scv::threshold_consistency(answers, numeric_rel_tol);
                j["numeric"] = {{"mean", ns.mean},
                                {"std_dev", ns.std_dev},
                                {"score", ns.score},
                                {"threshold_consistency", tc}};
                csv += "domain,numeric.score," + scv::fmt_num(ns.score) + ",0\n";
                csv += "domain,numeric.threshold_consistency," + scv::fmt_num(tc) + ",0\n";
            }
            break;
        }
        case scv::Domain::generic:
            break;
    }
    write_outputs(g, "report", &j, &csv);
    std::cout << "combined " << scv::fmt_num(report.combined) << " (psi "
              << scv::fmt_num(report.psi) << ", phi " << scv::fmt_num(report.phi) << "), "
              << report.flagged.size() << " flagged\n";
    return 0;
}

int cmd_sample(const GlobalOpts& g, const ProviderOpts& popts, const std::string& backend_kind,
               const std::string& query, const std::string& truth_path, double corruption,
               const scv::SamplerConfig& sampler_config, const std::string& gen_url,
               const std::string& gen_token, const std::vector<double>& sweep, int runs) {
    auto provider = make_provider(popts);
    scv::ConsistencyConfig cc;
    cc.jobs = g.jobs;
    auto scorer = scv::default_scorer(*provider, cc);

    auto make_backend = [&](double rate, std::uint64_t seed) -> std::unique_ptr<scv::GeneratorBackend> {
        if (backend_kind == "http") {
            if (gen_url.empty())
                throw scv::DomainError("http backend requires --gen-url or SCV_GEN_URL");
            return std::make_unique<scv::HttpBackend>(gen_url, gen_token, seed);
        }
        if (backend_kind != "mock")
            throw scv::DomainError("unknown backend '" + backend_kind + "'");
        if (truth_path.empty()) throw scv::DomainError("mock backend requires --truth");
        scv::TraceSet truth_doc = scv::parse_trace_set(scv::read_file(truth_path));
        scv::ReasoningTrace truth = truth_doc.traces.front();
        return std::make_unique<scv::MockBackend>(truth, rate, seed);
    };

    fs::create_directories(g.output_dir);
    if (!sweep.empty()) {
        std::string csv = "rate,run,total_samples,stop_reason\n";
        for (double rate : sweep) {
            for (int run = 0; run < runs; ++run) {
                scv::SamplerConfig cfg = sampler_config;
                cfg.seed = scv::derive_seed(g.seed, std::uint64_t(run));
                auto backend = make_backend(rate, cfg.seed);
                scv::SamplerOutcome outcome =
                    scv::run_adaptive(query, *backend, cfg, scorer);
                csv += scv::fmt_num(rate) + "," + std::to_string(run) + "," +
                       std::to_string(outcome.total_samples) + "," +
                       scv::to_string(outcome.stop_reason) + "\n";
            }
        }
        scv::write_file((fs::path(g.output_dir) / "sweep.csv").string(), csv);
        std::cout << "sweep complete: " << sweep.size() << " rates x " << runs << " runs\n";
        return 0;
    }

    scv::SamplerConfig cfg = sampler_config;
    cfg.seed = g.seed;
    auto backend = make_backend(corruption, g.seed);
    scv::SamplerOutcome outcome = scv::run_adaptive(query, *backend, cfg, scorer);

    scv::write_file((fs::path(g.output_dir) / "samples.json").string(),
                    scv::serialize_trace_set(outcome.traces));
    nlohmann::ordered_json cj = scv::trace_to_json(outcome.consensus);
    scv::write_file((fs::path(g.output_dir) / "consensus.json").string(), cj.dump(2) + "\n");
    std::string rounds = "round,t,lambda,delta\n";
    for (std::size_t i = 0; i < outcome.rounds.size(); ++i)
        rounds += std::to_string(i) + "," + std::to_string(outcome.rounds[i].t) + "," +
                  scv::fmt_num(outcome.rounds[i].lambda) + "," +
                  std::to_string(outcome.rounds[i].delta) + "\n";
    scv::write_file((fs::path(g.output_dir) / "rounds.csv").string(), rounds);
    std::cout << "drew " << outcome.total_samples << " samples, stop reason "
              << scv::to_string(outcome.stop_reason) << ", consensus "
              << outcome.consensus.trace_id << "\n";
    return 0;
}

int cmd_simulate(const GlobalOpts& g, const std::string& kind, double tau, double epsilon,
                 double epsilon_prime, int k, int trials, const std::string& dag_text,
                 double delta, double p_correct, double p_incorrect) {
    scv::SimSpec spec;
    spec.tau = tau;
    spec.epsilon = epsilon;
    spec.p_correct = p_correct;
    spec.p_incorrect = p_incorrect;
    spec.k = k;
    spec.trials = trials;
    spec.dag = parse_dag(dag_text);
    spec.delta_target = delta;
    spec.seed = g.seed;
    spec.jobs = g.jobs;

    std::string csv;
    if (kind == "majority") {
        scv::SimResult r = scv::simulate_majority(spec);
        csv = "tau,k,trials,empirical,bound,ci,satisfied\n";
        csv += scv::fmt_num(tau) + "," + std::to_string(k) + "," + std::to_string(trials) + "," +
               scv::fmt_num(r.empirical) + "," + scv::fmt_num(r.theoretical_bound) + "," +
               scv::fmt_num(r.ci_halfwidth) + "," + (r.satisfied ? "1" : "0") + "\n";
    } else if (kind == "propagation") {
        scv::SimResult r = scv::simulate_propagation(spec);
        csv = "dag,epsilon,trials,empirical,bound,ci,satisfied\n";
        csv += dag_text + "," + scv::fmt_num(epsilon) + "," + std::to_string(trials) + "," +
               scv::fmt_num(r.empirical) + "," + scv::fmt_num(r.theoretical_bound) + "," +
               scv::fmt_num(r.ci_halfwidth) + "," + (r.satisfied ? "1" : "0") + "\n";
    } else if (kind == "benefit") {
        scv::BenefitResult r = scv::intermediate_benefit(spec, epsilon_prime);
        csv = "dag,epsilon,epsilon_prime,trials,error_eps,error_eps_prime,empirical_ratio,"
              "claimed_factor\n";
        csv += dag_text + "," + scv::fmt_num(epsilon) + "," + scv::fmt_num(epsilon_prime) + "," +
               std::to_string(trials) + "," + scv::fmt_num(r.error_at_epsilon) + "," +
               scv::fmt_num(r.error_at_epsilon_prime) + "," + scv::fmt_num(r.empirical_ratio) +
               "," + scv::fmt_num(r.claimed_factor) + "\n";
    } else if (kind == "entropy") {
        scv::SimResult r = scv::entropy_reduction_check(trials, g.seed, 3, g.jobs);
        csv = "trials,max_violation,tolerance,satisfied\n";
        csv += std::to_string(trials) + "," + scv::fmt_num(r.empirical) + "," +
               scv::fmt_num(r.theoretical_bound) + "," + (r.satisfied ? "1" : "0") + "\n";
    } else if (kind == "convergence") {
        csv = "f,k,delta,trials,empirical,bound,ci,satisfied\n";
        double f = p_correct > 0 ? p_correct : 0.7;
        for (double d : {0.05, 0.1, 0.2}) {
            scv::SimResult r = scv::convergence_check(spec, f, d);
            csv += scv::fmt_num(f) + "," + std::to_string(k) + "," + scv::fmt_num(d) + "," +
                   std::to_string(trials) + "," + scv::fmt_num(r.empirical) + "," +
                   scv::fmt_num(r.theoretical_bound) + "," + scv::fmt_num(r.ci_halfwidth) + "," +
                   (r.satisfied ? "1" : "0") + "\n";
        }
    } else {
        throw scv::DomainError("unknown simulation kind '" + kind + "'");
    }
    fs::create_directories(g.output_dir);
    scv::write_file((fs::path(g.output_dir) / ("simulate_" + kind + ".csv")).string(), csv);
    std::cout << csv;
    return 0;
}

int cmd_repair(const GlobalOpts& g, const ProviderOpts& popts, const std::string& traces_path,
               const std::string& target_id, double threshold, bool lenient) {
    scv::TraceSet set = scv::parse_trace_set(scv::read_file(traces_path), !lenient);
    for (const auto& t : set.traces) scv::validate_trace(t);
    const scv::ReasoningTrace* target = nullptr;
    for (const auto& t : set.traces)
        if (t.trace_id == target_id) target = &t;
    if (!target)
        throw scv::MissingInputError("trace '" + target_id + "' not found in " + traces_path);
    auto provider = make_provider(popts);
    scv::ConsistencyConfig cc;
    cc.jobs = g.jobs;
    scv::ConsistencyReport report = scv::full_report(set, *provider, cc);
    scv::ReasoningTrace repaired = scv::repair_trace(*target, set, report, *provider, threshold);

    scv::TraceSet out;
    out.query = set.query;
    out.domain = set.domain;
    out.traces.push_back(repaired);
    fs::create_directories(g.output_dir);
    scv::write_file((fs::path(g.output_dir) / "repaired.json").string(),
                    scv::serialize_trace_set(out));
    std::cout << "repaired trace " << target_id << ": " << repaired.statements.size() << " of "
              << target->statements.size() << " statements retained\n";
    return 0;
}

std::vector<std::vector<std::string>> read_csv_rows(const std::string& path) {
    std::istringstream in(scv::read_file(path));
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> row;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) row.push_back(cell);
        rows.push_back(std::move(row));
    }
    return rows;
}

int cmd_report(const GlobalOpts& g, const std::string& input_dir) {
    fs::path in(input_dir.empty() ? g.output_dir : input_dir);
    fs::create_directories(g.output_dir);
    bool produced = false;

    // bound-vs-empirical curves from every simulate_*.csv present
    std::string curves = "source,empirical,bound\n";
    bool have_curves = false;
    std::vector<fs::path> sims;
    if (fs::exists(in))
        for (const auto& entry : fs::directory_iterator(in)) {
            auto name = entry.path().filename().string();
            if (name.rfind("simulate_", 0) == 0 && entry.path().extension() == ".csv")
                sims.push_back(entry.path());
        }
    std::sort(sims.begin(), sims.end());
    for (const auto& path : sims) {
        auto rows = read_csv_rows(path.string());
        if (rows.size() < 2) continue;
        int emp = -1, bound = -1;
        for (std::size_t c = 0; c < rows[0].size(); ++c) {
            if (rows[0][c] == "empirical" || rows[0][c] == "max_violation") emp = int(c);
            if (rows[0][c] == "bound" || rows[0][c] == "tolerance") bound = int(c);
        }
        if (emp < 0 || bound < 0) continue;
        for (std::size_t r = 1; r < rows.size(); ++r) {
            curves += path.stem().string() + "," + rows[r][std::size_t(emp)] + "," +
                      rows[r][std::size_t(bound)] + "\n";
            have_curves = true;
        }
    }
    if (have_curves) {
        scv::write_file((fs::path(g.output_dir) / "curves.csv").string(), curves);
        produced = true;
    }

    // mean sample count per corruption rate, labeled by rank
    fs::path sweep = in / "sweep.csv";
    if (fs::exists(sweep)) {
        auto rows = read_csv_rows(sweep.string());
        std::map<double, std::pair<double, int>> by_rate;
        for (std::size_t r = 1; r < rows.size(); ++r) {
            if (rows[r].size() < 3) continue;
            auto& [sum, n] = by_rate[std::stod(rows[r][0])];
            sum += std::stod(rows[r][2]);
            n += 1;
        }
        static const char* labels[] = {"easy", "medium", "hard"};
        std::string csv = "difficulty,rate,mean_samples\n";
        std::size_t i = 0;
        for (const auto& [rate, acc] : by_rate) {
            std::string label = i < 3 ? labels[i] : "tier" + std::to_string(i + 1);
            csv += label + "," + scv::fmt_num(rate) + "," + scv::fmt_num(acc.first / acc.second) +
                   "\n";
            ++i;
        }
        scv::write_file((fs::path(g.output_dir) / "difficulty.csv").string(), csv);
        produced = true;
    }

    // statement-score histogram from a verify report
    fs::path report_csv = in / "report.csv";
    if (fs::exists(report_csv)) {
        auto rows = read_csv_rows(report_csv.string());
        std::vector<int> bins(10, 0);
        for (std::size_t r = 1; r < rows.size(); ++r) {
            if (rows[r].size() < 3 || rows[r][0] != "statement") continue;
            double s = std::stod(rows[r][2]);
            int b = std::min(9, int(s * 10.0));
            bins[std::size_t(std::max(0, b))]++;
        }
        std::string csv = "bin_low,bin_high,count\n";
        for (int b = 0; b < 10; ++b)
            csv += scv::fmt_num(b / 10.0) + "," + scv::fmt_num((b + 1) / 10.0) + "," +
                   std::to_string(bins[std::size_t(b)]) + "\n";
        scv::write_file((fs::path(g.output_dir) / "histogram.csv").string(), csv);
        produced = true;
    }

    if (!produced)
        throw scv::MissingInputError("no verify/sample/simulate outputs found in " + in.string());
    std::cout << "report data written to " << g.output_dir << "\n";
    return 0;
}

bool is_validation_error(const scv::Error& e) {
    return dynamic_cast<const scv::SchemaError*>(&e) || dynamic_cast<const scv::CycleError*>(&e) ||
           dynamic_cast<const scv::DanglingEdgeError*>(&e) ||
           dynamic_cast<const scv::DomainError*>(&e) || dynamic_cast<const scv::ParseError*>(&e) ||
           dynamic_cast<const scv::MissingInputError*>(&e) ||
           dynamic_cast<const scv::EmptySampleError*>(&e) ||
           dynamic_cast<const scv::SizeCapError*>(&e) ||
           dynamic_cast<const scv::BoundInvalidError*>(&e) ||
           dynamic_cast<const scv::IrreparableError*>(&e) ||
           dynamic_cast<const scv::DegenerateError*>(&e) ||
           dynamic_cast<const scv::DegenerateSampleError*>(&e);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"structured consistency verification for sampled reasoning traces"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may appear after the subcommand
    app.set_config("--config", "", "key=value config file; flags and env take precedence");

    GlobalOpts g;
    app.add_option("--seed", g.seed, "master RNG seed")->envname("SCV_SEED");
    app.add_option("--jobs", g.jobs, "worker thread count")->envname("SCV_JOBS");
    app.add_option("--output-dir", g.output_dir, "directory for emitted files");
    app.add_option("--format", g.format, "report format")
        ->check(CLI::IsMember({"json", "csv", "both"}));

    ProviderOpts popts;
    auto add_provider_flags = [&](CLI::App* cmd) {
        cmd->add_option("--similarity-provider", popts.provider, "token | canonical | remote")
            ->check(CLI::IsMember({"token", "canonical", "remote"}));
        cmd->add_option("--similarity-threshold", popts.threshold, "equivalence threshold")
            ->check(CLI::Range(0.0, 1.0));
        cmd->add_option("--embed-url", popts.embed_url, "embedding endpoint for remote provider")
            ->envname("SCV_EMBED_URL");
    };

    // verify
    auto* verify = app.add_subcommand("verify", "score a trace-set document");
    std::string traces_path;
    bool lenient = false;
    double alpha = 0.5, flag_threshold = 0.5, beta = 0.5, sym_lambda = 0.5, rel_tol = 1e-6;
    std::string iso_method = "auto";
    int iso_cap = 24;
    verify->add_option("--traces", traces_path, "trace-set JSON file")->required();
    verify->add_flag("--lenient", lenient, "ignore unknown document fields");
    verify->add_option("--alpha", alpha, "structural weight in the combined score");
    verify->add_option("--flag-threshold", flag_threshold, "flag statements below this score");
    verify->add_option("--iso-method", iso_method, "exact | spectral | auto");
    verify->add_option("--iso-exact-cap", iso_cap, "vertex cap for exact matching");
    verify->add_option("--beta", beta, "proof-consistency weight (theorem domain)");
    verify->add_option("--symbolic-lambda", sym_lambda, "tree-similarity weight (symbolic domain)");
    verify->add_option("--numeric-rel-tol", rel_tol, "relative tolerance (numeric domain)");
    add_provider_flags(verify);

    // sample
    auto* sample = app.add_subcommand("sample", "adaptive sampling via a generator backend");
    std::string backend_kind = "mock", query = "q", truth_path, gen_url, gen_token;
    double corruption = 0.1;
    scv::SamplerConfig sampler_config;
    std::vector<double> sweep;
    int runs = 1;
    sample->add_option("--backend", backend_kind, "mock | http")
        ->check(CLI::IsMember({"mock", "http"}));
    sample->add_option("--query", query, "query string forwarded to the backend");
    sample->add_option("--truth", truth_path, "ground-truth trace document (mock)");
    sample->add_option("--corruption", corruption, "per-statement corruption rate (mock)")
        ->check(CLI::Range(0.0, 1.0));
    sample->add_option("--k0", sampler_config.k0, "initial sample count");
    sample->add_option("--k-max", sampler_config.k_max, "sample budget");
    sample->add_option("--tau-low", sampler_config.tau_low, "step-size pivot");
    sample->add_option("--tau-high", sampler_config.tau_high, "stopping threshold");
    sample->add_option("--rate", sampler_config.rate, "step-size factor");
    sample->add_option("--gen-url", gen_url, "generation endpoint")->envname("SCV_GEN_URL");
    sample->add_option("--gen-token", gen_token, "bearer token")->envname("SCV_GEN_TOKEN");
    sample->add_option("--sweep", sweep, "corruption rates for a difficulty sweep");
    sample->add_option("--runs", runs, "runs per sweep rate");
    add_provider_flags(sample);

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo bound checks");
    std::string sim_kind, dag_text = "chain:5";
    double tau = 0.3, epsilon = 0.1, epsilon_prime = 0.05, delta = 0.1;
    double p_correct = 0, p_incorrect = 0;
    int k = 5, trials = 10000;
    simulate
        ->add_option("kind", sim_kind, "majority | propagation | benefit | entropy | convergence")
        ->required()
        ->check(CLI::IsMember({"majority", "propagation", "benefit", "entropy", "convergence"}));
    simulate->add_option("--tau", tau, "per-statement error rate");
    simulate->add_option("--epsilon", epsilon, "per-step error rate");
    simulate->add_option("--epsilon-prime", epsilon_prime, "reduced per-step error rate");
    simulate->add_option("--k", k, "samples per trial");
    simulate->add_option("--trials", trials, "Monte Carlo trials");
    simulate->add_option("--dag", dag_text, "chain:T | diamond | random:n,p");
    simulate->add_option("--delta", delta, "deviation threshold");
    simulate->add_option("--p-correct", p_correct, "per-sample correctness probability");
    simulate->add_option("--p-incorrect", p_incorrect, "modal-incorrect probability");

    // repair
    auto* repair = app.add_subcommand("repair", "replace low-consistency statements");
    std::string target_id;
    double repair_threshold = 0.5;
    bool repair_lenient = false;
    repair->add_option("--traces", traces_path, "trace-set JSON file")->required();
    repair->add_option("--target", target_id, "trace_id to repair")->required();
    repair->add_option("--threshold", repair_threshold, "minimum class score to keep")
        ->check(CLI::Range(0.0, 1.0));
    repair->add_flag("--lenient", repair_lenient, "ignore unknown document fields");
    add_provider_flags(repair);

    // report
    auto* report = app.add_subcommand("report", "aggregate prior outputs into plot data");
    std::string input_dir;
    report->add_option("--input-dir", input_dir, "directory with prior outputs (default: output dir)");

    for (auto* sub : {verify, sample, simulate, repair, report}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*verify)
            return cmd_verify(g, popts, traces_path, lenient, alpha, flag_threshold, iso_method,
                              iso_cap, beta, sym_lambda, rel_tol);
        if (*sample)
            return cmd_sample(g, popts, backend_kind, query, truth_path, corruption,
                              sampler_config, gen_url, gen_token, sweep, runs);
        if (*simulate)
            return cmd_simulate(g, sim_kind, tau, epsilon, epsilon_prime, k, trials, dag_text,
                                delta, p_correct, p_incorrect);
        if (*repair)
            return cmd_repair(g, popts, traces_path, target_id, repair_threshold, repair_lenient);
        if (*report) return cmd_report(g, input_dir);
    } catch (const scv::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return is_validation_error(e) ? 2 : 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 3;
}
