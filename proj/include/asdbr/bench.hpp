#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "asdbr/asdbr.hpp"
#include "asdbr/bayes.hpp"
#include "asdbr/config.hpp"
#include "asdbr/generate.hpp"
#include "asdbr/metrics.hpp"
#include "asdbr/problem.hpp"
#include "asdbr/solvers.hpp"

namespace asdbr {

enum class Algorithm { Lasso, Sbl, Asdbr };

enum class CaseId { FixedRatioSweepN, SweepSnr, SweepK, SingleInstance };

struct SweepPoint {
    Index m = 0;
    Index n = 0;
    Index k = 0;
    double snr_db = 0.0;
};

/// A Monte Carlo experiment: sweep points x algorithms x trials. The raw
/// results (runtime aside) are a pure function of this struct.
struct ExperimentSpec {
    CaseId case_id = CaseId::SingleInstance;
    std::vector<SweepPoint> points;
    SignalDistribution dist = SignalDistribution::SpikesPlusMinusOne;
    std::vector<Algorithm> algorithms = {Algorithm::Lasso, Algorithm::Sbl, Algorithm::Asdbr};
    int trials = 100;
    std::uint64_t base_seed = 0;
    SolverConfig config;
    std::map<Algorithm, double> lambda_overrides; // per-algorithm lambda, else config.lambda
};

inline void validate(const ExperimentSpec& spec) {
    if (spec.points.empty()) throw std::invalid_argument("ExperimentSpec: sweep must be nonempty");
    if (spec.algorithms.empty()) throw std::invalid_argument("ExperimentSpec: algorithm set must be nonempty");
    if (spec.trials < 1) throw std::invalid_argument("ExperimentSpec: trials must be >= 1");
    for (const SweepPoint& p : spec.points) {
        if (p.m < 1 || p.n < 1) throw std::invalid_argument("ExperimentSpec: dimensions must be >= 1");
        if (p.k < 1 || p.k > p.n) throw std::invalid_argument("ExperimentSpec: k must satisfy 1 <= k <= n");
    }
    validate(spec.config);
    for (const auto& [algo, lambda] : spec.lambda_overrides)
        if (!(lambda > 0.0)) throw std::invalid_argument("ExperimentSpec: lambda override must be positive");
}

struct TrialResult {
    Algorithm algorithm = Algorithm::Lasso;
    Index m = 0, n = 0, k = 0;
    double snr_db = 0.0;
    int trial_index = 0;
    double rnmse = std::numeric_limits<double>::quiet_NaN();
    double runtime_seconds = 0.0;
    Index support_size = 0;
    bool support_exact = false;
    int outer_iterations = 0;
    std::string error; // empty on success; failed trials keep their row
};

/// One synthetic instance; the three generator streams hang off one seed.
struct GeneratedInstance {
    Matrix design;
    GroundTruth truth;
    NoisyObservation observed;
};

inline GeneratedInstance make_instance(const SweepPoint& point, SignalDistribution dist, std::uint64_t seed) {
    GeneratedInstance inst;
    inst.design = generate_design_matrix(point.m, point.n, seed);
    inst.truth = generate_sparse_signal(point.n, point.k, dist, seed);
    inst.observed = add_noise_at_snr(inst.design, inst.truth.theta_true, point.snr_db, seed);
    return inst;
}

/// Plain l1 baseline: one unweighted pass of the configured inner solver at
/// the full budget. No reweighting, no pruning.
inline SolveReport lasso_solve(const RecoveryProblem& problem, const SolverConfig& config) {
    validate(config);
    auto inner = config.inner_algorithm == InnerAlgorithm::Ista ? ista_solve : fista_solve;
    return inner(problem, Vector::Ones(problem.n()), Vector::Zero(problem.n()),
                 StepPolicy::for_design(problem.design()), config.k_inner, config.inner_tol);
}

struct TrialSpec {
    SweepPoint point;
    SignalDistribution dist = SignalDistribution::SpikesPlusMinusOne;
    Algorithm algorithm = Algorithm::Lasso;
    std::uint64_t seed = 0;
};

namespace detail {

inline TrialResult score_trial(const TrialSpec& trial, const GeneratedInstance& instance,
                               const SolverConfig& config) {
    TrialResult result;
    result.algorithm = trial.algorithm;
    result.m = trial.point.m;
    result.n = trial.point.n;
    result.k = trial.point.k;
    result.snr_db = trial.point.snr_db;

    RecoveryProblem problem(instance.design, instance.observed.observation, config.lambda);

    Vector theta_hat;
    std::vector<Index> recovered;
    const auto start = std::chrono::steady_clock::now();
    switch (trial.algorithm) {
    case Algorithm::Lasso: {
        SolveReport rep = lasso_solve(problem, config);
        result.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        theta_hat = std::move(rep.theta_hat);
        recovered = nonzero_support(theta_hat);
        result.outer_iterations = 1;
        break;
    }
    case Algorithm::Sbl: {
        SolveReport rep = sbl_reweighted_solve(problem, config);
        result.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        theta_hat = std::move(rep.theta_hat);
        recovered = nonzero_support(theta_hat);
        result.outer_iterations = rep.iterations_run;
        break;
    }
    case Algorithm::Asdbr: {
        AsdbrReport rep = asdbr_solve(problem, config);
        result.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        theta_hat = std::move(rep.theta_hat);
        recovered = rep.final_support();
        result.outer_iterations = rep.outer_iterations;
        break;
    }
    }

    result.rnmse = rnmse(theta_hat, instance.truth.theta_true);
    result.support_size = static_cast<Index>(recovered.size());
    result.support_exact = recovered == instance.truth.support;
    return result;
}

} // namespace detail

/// Generate the instance for (point, seed), run one algorithm, time the
/// solve only, and score it. A failing trial keeps its row with the error
/// message attached instead of being dropped.
inline TrialResult run_trial(const TrialSpec& trial, const SolverConfig& base_config,
                             std::optional<double> lambda_override = std::nullopt) {
    SolverConfig config = base_config;
    if (lambda_override) config.lambda = *lambda_override;

    TrialResult result;
    result.algorithm = trial.algorithm;
    result.m = trial.point.m;
    result.n = trial.point.n;
    result.k = trial.point.k;
    result.snr_db = trial.point.snr_db;
    try {
        GeneratedInstance instance = make_instance(trial.point, trial.dist, trial.seed);
        result = detail::score_trial(trial, instance, config);
    } catch (const std::exception& e) {
        result.error = e.what();
    }
    return result;
}

/// Cartesian product points x algorithms x trials. Every algorithm sees the
/// bit-identical instance for a given (point, trial); per-trial seeds are
/// derived as (base_seed, point index, trial index), so the output does not
/// depend on scheduling. Rows come back sorted by point, algorithm, trial.
inline std::vector<TrialResult> run_sweep(const ExperimentSpec& spec, int num_threads = 0) {
    validate(spec);
    const std::size_t num_points = spec.points.size();
    const std::size_t num_algos = spec.algorithms.size();
    const std::size_t trials = static_cast<std::size_t>(spec.trials);
    std::vector<TrialResult> results(num_points * num_algos * trials);

    const std::size_t num_tasks = num_points * trials; // one task = one instance, all algorithms
    unsigned hw = std::thread::hardware_concurrency();
    std::size_t workers = num_threads > 0 ? static_cast<std::size_t>(num_threads)
                                          : std::max<std::size_t>(1, hw);
    workers = std::min(workers, num_tasks);

    std::atomic<std::size_t> next_task{0};
    auto work = [&]() {
        for (;;) {
            const std::size_t task = next_task.fetch_add(1);
            if (task >= num_tasks) return;
            const std::size_t point_index = task / trials;
            const std::size_t trial_index = task % trials;
            const SweepPoint& point = spec.points[point_index];
            const std::uint64_t seed =
                derive_seed(spec.base_seed, stream::trial ^ (point_index << 8), trial_index);

            for (std::size_t a = 0; a < num_algos; ++a) {
                TrialSpec trial{point, spec.dist, spec.algorithms[a], seed};
                std::optional<double> lambda;
                if (auto it = spec.lambda_overrides.find(trial.algorithm); it != spec.lambda_overrides.end())
                    lambda = it->second;
                TrialResult r = run_trial(trial, spec.config, lambda);
                r.trial_index = static_cast<int>(trial_index);
                results[(point_index * num_algos + a) * trials + trial_index] = std::move(r);
            }
        }
    };

    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(work);
        for (std::thread& t : pool) t.join();
    }
    return results;
}

/// Per (point, algorithm) aggregate, in row order of the raw table.
struct PointSummary {
    Algorithm algorithm = Algorithm::Lasso;
    Index m = 0, n = 0, k = 0;
    double snr_db = 0.0;
    int trials = 0;
    double mean_rnmse = 0.0;
    double median_rnmse = 0.0;
    double mean_runtime_seconds = 0.0;
};

inline double median_of(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    if (values.size() % 2 == 1) return values[mid];
    return 0.5 * (values[mid - 1] + values[mid]);
}

inline std::vector<PointSummary> aggregate_results(const std::vector<TrialResult>& rows) {
    std::vector<PointSummary> summaries;
    std::size_t i = 0;
    while (i < rows.size()) {
        std::size_t j = i;
        while (j < rows.size() && rows[j].algorithm == rows[i].algorithm && rows[j].m == rows[i].m &&
               rows[j].n == rows[i].n && rows[j].k == rows[i].k && rows[j].snr_db == rows[i].snr_db)
            ++j;
        PointSummary s;
        s.algorithm = rows[i].algorithm;
        s.m = rows[i].m;
        s.n = rows[i].n;
        s.k = rows[i].k;
        s.snr_db = rows[i].snr_db;
        s.trials = static_cast<int>(j - i);
        std::vector<double> rnmses;
        rnmses.reserve(j - i);
        for (std::size_t r = i; r < j; ++r) {
            rnmses.push_back(rows[r].rnmse);
            s.mean_rnmse += rows[r].rnmse;
            s.mean_runtime_seconds += rows[r].runtime_seconds;
        }
        s.mean_rnmse /= static_cast<double>(s.trials);
        s.mean_runtime_seconds /= static_cast<double>(s.trials);
        s.median_rnmse = median_of(std::move(rnmses));
        summaries.push_back(s);
        i = j;
    }
    return summaries;
}

// ---- canonical sweep cases -------------------------------------------------

inline ExperimentSpec make_case_sweep_n(std::vector<Index> n_values = {400, 800, 1200, 1600, 2000},
                                        double m_over_n = 0.5, Index k = 20, double snr_db = 10.0) {
    ExperimentSpec spec;
    spec.case_id = CaseId::FixedRatioSweepN;
    for (Index n : n_values)
        spec.points.push_back({static_cast<Index>(std::lround(m_over_n * static_cast<double>(n))), n, k, snr_db});
    return spec;
}

inline ExperimentSpec make_case_sweep_snr(std::vector<double> snr_values = {0, 5, 10, 15, 20},
                                          Index m = 400, Index n = 800, Index k = 20) {
    ExperimentSpec spec;
    spec.case_id = CaseId::SweepSnr;
    for (double snr : snr_values) spec.points.push_back({m, n, k, snr});
    return spec;
}

inline ExperimentSpec make_case_sweep_k(std::vector<Index> k_values = {10, 20, 30, 40, 50, 60},
                                        Index m = 400, Index n = 800, double snr_db = 10.0) {
    ExperimentSpec spec;
    spec.case_id = CaseId::SweepK;
    for (Index k : k_values) spec.points.push_back({m, n, k, snr_db});
    return spec;
}

inline ExperimentSpec make_case_single(Index m = 800, Index n = 1600, Index k = 20, double snr_db = 15.0) {
    ExperimentSpec spec;
    spec.case_id = CaseId::SingleInstance;
    spec.points.push_back({m, n, k, snr_db});
    return spec;
}

} // namespace asdbr
