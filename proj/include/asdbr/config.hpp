#pragma once

#include <stdexcept>

namespace asdbr {

enum class InnerAlgorithm { Ista, Fista };

/// Shared knobs for the lasso / SBL / ASDBR drivers. The defaults with
/// inner_tol = 0 reproduce the fixed-budget reference settings
/// (k_inner = 1000, k_outer = 10, threshold 0.01, lambda 1); the nonzero
/// default inner_tol only adds an early stop on small relative change.
struct SolverConfig {
    int k_inner = 1000;
    int k_outer = 10;
    double threshold_ratio = 0.01;
    double lambda = 1.0;
    double inner_tol = 1e-8;
    InnerAlgorithm inner_algorithm = InnerAlgorithm::Ista;

    // Alternative weighting described alongside the algorithm: use the
    // magnitudes of the current estimate directly as the weight diagonal
    // instead of the Bayesian weights. Off by default.
    bool narrative_weights = false;
};

inline void validate(const SolverConfig& config) {
    if (config.k_inner < 1) throw std::invalid_argument("SolverConfig: k_inner must be >= 1");
    if (config.k_outer < 1) throw std::invalid_argument("SolverConfig: k_outer must be >= 1");
    if (!(config.threshold_ratio > 0.0 && config.threshold_ratio < 1.0))
        throw std::invalid_argument("SolverConfig: threshold_ratio must lie in (0,1)");
    if (!(config.lambda > 0.0)) throw std::invalid_argument("SolverConfig: lambda must be positive");
    if (config.inner_tol < 0.0) throw std::invalid_argument("SolverConfig: inner_tol must be nonnegative");
}

} // namespace asdbr
