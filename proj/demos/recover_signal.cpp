// Minimal usage example: build one synthetic instance and compare the three
// recovery algorithms on it.

#include <cstdio>

#include "asdbr/asdbr.hpp"
#include "asdbr/bench.hpp"

int main() {
    using namespace asdbr;

    const SweepPoint point{200, 400, 10, 15.0};
    GeneratedInstance inst = make_instance(point, SignalDistribution::SpikesPlusMinusOne, 42);
    RecoveryProblem problem(inst.design, inst.observed.observation, 1.0);

    SolverConfig config; // defaults: k_inner 1000, k_outer 10, threshold 0.01

    SolveReport lasso = lasso_solve(problem, config);
    SolveReport sbl = sbl_reweighted_solve(problem, config);
    AsdbrReport adaptive = asdbr_solve(problem, config);

    std::printf("lasso  rnmse %.4f  (nnz %zu)\n", rnmse(lasso.theta_hat, inst.truth.theta_true),
                nonzero_support(lasso.theta_hat).size());
    std::printf("sbl    rnmse %.4f  (nnz %zu, %d outer)\n", rnmse(sbl.theta_hat, inst.truth.theta_true),
                nonzero_support(sbl.theta_hat).size(), sbl.iterations_run);
    std::printf("asdbr  rnmse %.4f  (support %zu, %d outer, trace:",
                rnmse(adaptive.theta_hat, inst.truth.theta_true), adaptive.final_support().size(),
                adaptive.outer_iterations);
    for (Index s : adaptive.support_trace) std::printf(" %lld", static_cast<long long>(s));
    std::printf(")\n");
    return 0;
}
