#pragma once

#include <utility>
#include <vector>

#include "asdbr/bayes.hpp"
#include "asdbr/config.hpp"
#include "asdbr/problem.hpp"
#include "asdbr/solvers.hpp"
#include "asdbr/support.hpp"

namespace asdbr {

enum class TerminationReason {
    SupportStable, // |S^(k)| == |S^(k-1)|
    MaxOuter,      // outer iteration budget exhausted
    EmptySupport,  // every coefficient thresholded to zero; theta_hat = 0
};

struct AsdbrReport {
    Vector theta_hat;                                // length n, exactly zero off support
    std::vector<Index> support_trace;                // |S^(k)| per outer iteration, non-increasing
    std::vector<std::vector<Index>> support_history; // S^(k) in original column indices
    int outer_iterations = 0;
    std::vector<int> inner_iteration_counts;         // warm start first, then one per outer solve
    TerminationReason termination_reason = TerminationReason::MaxOuter;

    const std::vector<Index>& final_support() const { return support_history.back(); }
};

/// Adaptive-support Bayesian reweighted recovery.
///
/// An unweighted l1 warm start on the full dictionary is followed by outer
/// passes that (1) threshold the current local estimate at
/// threshold_ratio * max|theta|, (2) restrict the index map to the survivors,
/// (3) form Gamma = diag(|theta|) / W_prev and fresh Bayesian weights on the
/// still-uncompressed dictionary, (4) drop the pruned columns, and (5) re-solve
/// the weighted l1 subproblem in the compressed coordinates, warm-started at
/// the surviving entries. The loop exits the first time the support
/// cardinality repeats (the support is non-increasing, so this happens within
/// n+1 passes), when the budget k_outer is spent, or when the support empties.
inline AsdbrReport asdbr_solve(const RecoveryProblem& problem, const SolverConfig& config) {
    validate(config);
    const Index n = problem.n();
    auto inner = config.inner_algorithm == InnerAlgorithm::Ista ? ista_solve : fista_solve;

    AsdbrReport report;

    SolveReport warm = inner(problem, Vector::Ones(n), Vector::Zero(n),
                             StepPolicy::for_design(problem.design()), config.k_inner, config.inner_tol);
    report.inner_iteration_counts.push_back(warm.iterations_run);

    SupportState state = SupportState::initial(problem.design());
    Vector theta = std::move(warm.theta_hat); // theta^(k) in current local coordinates
    std::size_t previous_size = static_cast<std::size_t>(n); // |S^(0)|

    for (int k = 1;; ++k) {
        ThresholdResult thresholded = threshold_support(theta, config.threshold_ratio);

        if (thresholded.kept.empty()) {
            report.support_trace.push_back(0);
            report.support_history.emplace_back();
            report.outer_iterations = k;
            report.termination_reason = TerminationReason::EmptySupport;
            report.theta_hat = Vector::Zero(n);
            return report;
        }

        std::vector<Index> support_k;
        support_k.reserve(thresholded.kept.size());
        for (Index local : thresholded.kept)
            support_k.push_back(state.index_map[static_cast<std::size_t>(local)]);
        report.support_trace.push_back(static_cast<Index>(support_k.size()));
        report.support_history.push_back(support_k);

        if (support_k.size() == previous_size) {
            // Stable support: |S^(k)| == |S^(k-1)| forces S^(k) == S^(k-1),
            // so nothing was thresholded and theta is the latest solve intact.
            report.outer_iterations = k;
            report.termination_reason = TerminationReason::SupportStable;
            report.theta_hat = embed_solution(theta, state.index_map, n);
            return report;
        }

        // Weights on the current (still uncompressed) dictionary, then
        // restricted to the survivors by the compression step.
        if (config.narrative_weights) {
            state.weights_local = thresholded.theta.cwiseAbs();
            state = compress_dictionary(state, thresholded.kept);
        } else {
            HyperParams gamma = update_gamma(thresholded.theta, WeightDiag{state.weights_local});
            state.weights_local = compute_weights(state.compressed_design, gamma, problem.lambda()).w;
            state = compress_dictionary(state, thresholded.kept);
        }

        Vector warm_start(static_cast<Index>(thresholded.kept.size()));
        for (std::size_t i = 0; i < thresholded.kept.size(); ++i)
            warm_start[static_cast<Index>(i)] = thresholded.theta[thresholded.kept[i]];

        RecoveryProblem local(state.compressed_design, problem.observation(), problem.lambda());
        SolveReport sub = inner(local, state.weights_local, warm_start,
                                StepPolicy::for_design(state.compressed_design), config.k_inner,
                                config.inner_tol);
        report.inner_iteration_counts.push_back(sub.iterations_run);
        theta = std::move(sub.theta_hat);
        previous_size = support_k.size();

        if (k + 1 > config.k_outer) {
            report.outer_iterations = k;
            report.termination_reason = TerminationReason::MaxOuter;
            report.theta_hat = embed_solution(theta, state.index_map, n);
            return report;
        }
    }
}

} // namespace asdbr
