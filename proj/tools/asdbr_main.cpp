// Command-line driver: generate synthetic problems, run a single solve, or
// reproduce the Monte Carlo comparison sweeps.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "asdbr/asdbr.hpp"
#include "asdbr/bench.hpp"
#include "asdbr/io.hpp"

using namespace asdbr;

namespace {

struct SolverFlags {
    double lambda = 1.0;
    int k_inner = 1000;
    int k_outer = 10;
    double threshold = 0.01;
    double inner_tol = 1e-8;
    std::string inner = "ista";

    void attach(CLI::App* cmd) {
        cmd->add_option("--lambda", lambda, "Regularization weight")->check(CLI::PositiveNumber);
        cmd->add_option("--k-inner", k_inner, "Inner iteration budget")->check(CLI::PositiveNumber);
        cmd->add_option("--k-outer", k_outer, "Outer iteration budget")->check(CLI::PositiveNumber);
        cmd->add_option("--threshold", threshold, "Support threshold ratio in (0,1)");
        cmd->add_option("--tol", inner_tol, "Inner relative-change stop (0 = fixed budget)");
        cmd->add_option("--inner", inner, "Inner solver")->check(CLI::IsMember({"ista", "fista"}));
    }

    SolverConfig to_config() const {
        SolverConfig config;
        config.lambda = lambda;
        config.k_inner = k_inner;
        config.k_outer = k_outer;
        config.threshold_ratio = threshold;
        config.inner_tol = inner_tol;
        config.inner_algorithm = parse_inner(inner);
        return config;
    }
};

std::string summary_path_for(const std::string& out) {
    std::filesystem::path p(out);
    p.replace_extension();
    return p.string() + "_summary.csv";
}

int cmd_generate(Index m, Index n, Index k, double snr_db, const std::string& dist_str,
                 std::uint64_t seed, const std::string& out) {
    SweepPoint point{m, n, k, snr_db};
    SignalDistribution dist = parse_dist(dist_str);
    GeneratedInstance inst = make_instance(point, dist, seed);
    ProblemFile pf{m, n, k, snr_db, dist, seed,
                   std::move(inst.design), std::move(inst.observed.observation),
                   std::move(inst.truth.theta_true)};
    write_problem(pf, out);
    std::cout << "wrote " << out << " (m=" << m << ", n=" << n << ", k=" << k
              << ", snr_db=" << format_double(snr_db) << ", dist=" << dist_str << ", seed=" << seed << ")\n";
    return 0;
}

int cmd_solve(const std::string& algo_str, const std::string& in, const SolverFlags& flags,
              const std::string& out) {
    ProblemFile pf = read_problem(in);
    SolverConfig config = flags.to_config();
    RecoveryProblem problem = pf.to_problem(config.lambda);
    GroundTruth truth = pf.to_truth();
    Algorithm algo = parse_algorithm(algo_str);

    json j;
    j["algorithm"] = algo_str;
    j["input"] = in;
    j["m"] = pf.m;
    j["n"] = pf.n;
    j["lambda"] = config.lambda;

    Vector theta_hat;
    const auto start = std::chrono::steady_clock::now();
    switch (algo) {
    case Algorithm::Lasso: {
        SolveReport rep = lasso_solve(problem, config);
        theta_hat = rep.theta_hat;
        j["iterations"] = rep.iterations_run;
        j["converged"] = rep.converged;
        break;
    }
    case Algorithm::Sbl: {
        SolveReport rep = sbl_reweighted_solve(problem, config);
        theta_hat = rep.theta_hat;
        j["outer_iterations"] = rep.iterations_run;
        j["converged"] = rep.converged;
        j["surrogate_trace"] = rep.objective_trace;
        break;
    }
    case Algorithm::Asdbr: {
        AsdbrReport rep = asdbr_solve(problem, config);
        theta_hat = rep.theta_hat;
        j.update(asdbr_report_to_json(rep));
        std::cout << "support trace:";
        for (Index s : rep.support_trace) std::cout << ' ' << s;
        std::cout << " (" << termination_name(rep.termination_reason) << ")\n";
        break;
    }
    }
    j["runtime_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    j["support_size"] = static_cast<Index>(nonzero_support(theta_hat).size());
    if (truth.theta_true.norm() > 0.0) {
        j["rnmse"] = rnmse(theta_hat, truth.theta_true);
        std::cout << "rnmse: " << format_double(j["rnmse"].get<double>()) << "\n";
    }
    j["theta_hat"] = std::vector<double>(theta_hat.data(), theta_hat.data() + theta_hat.size());

    if (!out.empty()) {
        std::ofstream f(out);
        if (!f) {
            std::cerr << "cannot open for writing: " << out << "\n";
            return 1;
        }
        f << j.dump(2) << '\n';
        std::cout << "wrote " << out << "\n";
    }
    return 0;
}

int cmd_bench(const std::string& case_str, Index m, Index n, Index k, double snr_db,
              const std::string& dist_str, const std::string& algos_csv, int trials,
              std::uint64_t seed, const SolverFlags& flags, const std::string& spec_path,
              int threads, const std::string& out, std::string summary_out) {
    ExperimentSpec spec;
    if (!spec_path.empty()) {
        std::ifstream f(spec_path);
        if (!f) {
            std::cerr << "cannot open spec file: " << spec_path << "\n";
            return 1;
        }
        spec = spec_from_json(json::parse(f));
    } else {
        json shorthand;
        shorthand["case"] = case_str;
        if (m > 0) shorthand["m"] = m;
        if (n > 0) shorthand["n"] = n;
        if (k > 0) shorthand["k"] = k;
        if (!std::isnan(snr_db)) shorthand["snr_db"] = snr_db;
        spec = spec_from_json(shorthand);
        spec.dist = parse_dist(dist_str);
        spec.trials = trials;
        spec.base_seed = seed;
        spec.config = flags.to_config();
        spec.algorithms.clear();
        std::stringstream ss(algos_csv);
        std::string name;
        while (std::getline(ss, name, ','))
            if (!name.empty()) spec.algorithms.push_back(parse_algorithm(name));
    }

    std::vector<TrialResult> rows = run_sweep(spec, threads);
    write_results_csv(rows, out);
    std::cout << "wrote " << out << " (" << rows.size() << " rows)\n";

    std::vector<PointSummary> summaries = aggregate_results(rows);
    if (summary_out.empty()) summary_out = summary_path_for(out);
    write_summary_csv(summaries, summary_out);
    std::cout << "wrote " << summary_out << "\n";

    write_results_json(rows, spec, out + ".json");
    std::cout << "wrote " << out << ".json\n";

    std::cout << "\nalgorithm  m    n    k   snr_db  mean_rnmse  median_rnmse  mean_runtime_s\n";
    for (const PointSummary& s : summaries) {
        std::printf("%-9s  %-4lld %-4lld %-3lld %-7.4g %-11.4g %-13.4g %-10.4g\n",
                    algorithm_name(s.algorithm).c_str(), static_cast<long long>(s.m),
                    static_cast<long long>(s.n), static_cast<long long>(s.k), s.snr_db, s.mean_rnmse,
                    s.median_rnmse, s.mean_runtime_seconds);
    }

    for (const TrialResult& r : rows)
        if (!r.error.empty())
            std::cerr << "trial failed: " << algorithm_name(r.algorithm) << " point(m=" << r.m
                      << ",n=" << r.n << ",k=" << r.k << ",snr=" << r.snr_db << ") trial " << r.trial_index
                      << ": " << r.error << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse signal recovery: adaptive-support Bayesian reweighting, "
                 "SBL reweighting, and lasso baselines with a Monte Carlo benchmark driver"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "Emit a synthetic problem file");
    Index g_m = 800, g_n = 1600, g_k = 20;
    double g_snr = 15.0;
    std::string g_dist = "spikes";
    std::uint64_t g_seed = 0;
    std::string g_out;
    gen->add_option("--m", g_m, "Rows of the design matrix")->check(CLI::PositiveNumber);
    gen->add_option("--n", g_n, "Columns of the design matrix")->check(CLI::PositiveNumber);
    gen->add_option("--k", g_k, "Number of nonzeros")->check(CLI::NonNegativeNumber);
    gen->add_option("--snr", g_snr, "Target SNR in dB (inf = noiseless)");
    gen->add_option("--dist", g_dist, "Nonzero distribution")->check(CLI::IsMember({"spikes", "gaussian"}));
    gen->add_option("--seed", g_seed, "Random seed");
    gen->add_option("--out", g_out, "Output path (.csv for text, anything else binary)")->required();

    // solve
    auto* solve = app.add_subcommand("solve", "Run one solve on a problem file");
    std::string s_algo = "asdbr", s_in, s_out;
    SolverFlags s_flags;
    solve->add_option("--algo", s_algo, "Algorithm")->check(CLI::IsMember({"lasso", "sbl", "asdbr"}));
    solve->add_option("--in", s_in, "Problem file")->required();
    s_flags.attach(solve);
    solve->add_option("--out", s_out, "Write the solve report as JSON");

    // bench
    auto* bench = app.add_subcommand("bench", "Run a Monte Carlo comparison case");
    std::string b_case = "sweep-snr", b_dist = "spikes", b_algos = "lasso,sbl,asdbr";
    Index b_m = 0, b_n = 0, b_k = 0;
    double b_snr = std::numeric_limits<double>::quiet_NaN();
    int b_trials = 100, b_threads = 0;
    std::uint64_t b_seed = 0;
    std::string b_spec, b_out, b_summary;
    SolverFlags b_flags;
    bench->add_option("--case", b_case, "Sweep case")
        ->check(CLI::IsMember({"sweep-n", "sweep-snr", "sweep-k", "single"}));
    bench->add_option("--m", b_m, "Override fixed m");
    bench->add_option("--n", b_n, "Override fixed n");
    bench->add_option("--k", b_k, "Override fixed k");
    bench->add_option("--snr", b_snr, "Override fixed SNR (dB)");
    bench->add_option("--dist", b_dist, "Nonzero distribution")->check(CLI::IsMember({"spikes", "gaussian"}));
    bench->add_option("--algos", b_algos, "Comma-separated algorithm list");
    bench->add_option("--trials", b_trials, "Trials per sweep point")->check(CLI::PositiveNumber);
    bench->add_option("--seed", b_seed, "Base seed");
    bench->add_option("--threads", b_threads, "Worker threads (0 = hardware)");
    bench->add_option("--spec", b_spec, "Full experiment spec as JSON (overrides the other flags)");
    b_flags.attach(bench);
    bench->add_option("--out", b_out, "Results CSV path")->required();
    bench->add_option("--summary-out", b_summary, "Aggregate CSV path (default: <out>_summary.csv)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_generate(g_m, g_n, g_k, g_snr, g_dist, g_seed, g_out);
        if (solve->parsed()) return cmd_solve(s_algo, s_in, s_flags, s_out);
        if (bench->parsed())
            return cmd_bench(b_case, b_m, b_n, b_k, b_snr, b_dist, b_algos, b_trials, b_seed, b_flags,
                             b_spec, b_threads, b_out, b_summary);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
