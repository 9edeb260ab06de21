#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Cholesky>

#include "asdbr/config.hpp"
#include "asdbr/problem.hpp"
#include "asdbr/solvers.hpp"

namespace asdbr {

/// Per-coefficient prior variances gamma_i >= 0; gamma_i = 0 marks a pruned
/// coefficient.
struct HyperParams {
    Vector gamma;
};

/// Diagonal of W = diag(sqrt(c_1), ..., sqrt(c_p)) for the reweighted l1
/// subproblem, with c = diag[Phi^T (lambda I + Phi Gamma Phi^T)^-1 Phi].
struct WeightDiag {
    Vector w;
};

/// Posterior mean and the diagonal of the posterior covariance.
struct PosteriorStats {
    Vector mu;
    Vector sigma_diag;
};

namespace detail {

/// lambda I_m + Phi Gamma Phi^T, lower triangle filled.
inline Matrix build_gram(const Matrix& design, const Vector& gamma, double lambda) {
    Matrix b = Matrix::Zero(design.rows(), design.rows());
    Matrix scaled = design * gamma.cwiseSqrt().asDiagonal();
    b.selfadjointView<Eigen::Lower>().rankUpdate(scaled);
    b.diagonal().array() += lambda;
    return b;
}

inline Eigen::LLT<Matrix> gram_llt(const Matrix& design, const Vector& gamma, double lambda,
                                   const char* caller) {
    Eigen::LLT<Matrix> llt(build_gram(design, gamma, lambda));
    if (llt.info() != Eigen::Success)
        throw numerical_error(std::string(caller) +
                              ": Cholesky factorization of (lambda I + Phi Gamma Phi^T) failed; "
                              "m=" + std::to_string(design.rows()) + ", lambda=" + std::to_string(lambda));
    return llt;
}

inline void check_gamma(const Vector& gamma, Index expected, const char* caller) {
    if (gamma.size() != expected)
        throw std::invalid_argument(std::string(caller) + ": gamma length must equal the column count");
    if ((gamma.array() < 0.0).any())
        throw std::invalid_argument(std::string(caller) + ": gamma must be nonnegative");
}

} // namespace detail

/// Reweighting vector c = diag[Phi^T (lambda I_m + Phi Gamma Phi^T)^-1 Phi],
/// returned as w_i = sqrt(c_i). The m x m system is factored once and solved
/// against all columns of Phi; the n x n Gram matrix is never formed.
inline WeightDiag compute_weights(const Matrix& design, const HyperParams& hyper, double lambda) {
    detail::check_gamma(hyper.gamma, design.cols(), "compute_weights");
    Eigen::LLT<Matrix> llt = detail::gram_llt(design, hyper.gamma, lambda, "compute_weights");
    Matrix solved = llt.solve(design); // (lambda I + Phi Gamma Phi^T)^-1 Phi
    Vector c = (design.array() * solved.array()).colwise().sum().matrix().transpose();
    if ((c.array() <= 0.0).any())
        throw numerical_error("compute_weights: nonpositive diagonal entry; matrix is numerically singular");
    return WeightDiag{c.cwiseSqrt()};
}

/// gamma_j = |theta_j| / w_j, with w_j = sqrt(c_j).
inline HyperParams update_gamma(const Vector& theta, const WeightDiag& weights) {
    if (theta.size() != weights.w.size())
        throw std::invalid_argument("update_gamma: theta and weights must have equal length");
    if ((weights.w.array() <= 0.0).any())
        throw std::invalid_argument("update_gamma: weights must be strictly positive");
    return HyperParams{theta.cwiseAbs().cwiseQuotient(weights.w)};
}

/// Posterior mean mu = (Phi^T Phi + lambda Gamma^-1)^-1 Phi^T y restricted to
/// the coordinates with gamma > 0; pruned coordinates are fixed at zero and
/// excluded from the solve. sigma_diag holds the diagonal of
/// Sigma = lambda (Phi^T Phi + lambda Gamma^-1)^-1 on the same subset.
inline PosteriorStats posterior_mean(const RecoveryProblem& problem, const HyperParams& hyper) {
    detail::check_gamma(hyper.gamma, problem.n(), "posterior_mean");
    std::vector<Index> active;
    for (Index j = 0; j < hyper.gamma.size(); ++j)
        if (hyper.gamma[j] > 0.0) active.push_back(j);

    PosteriorStats stats;
    stats.mu = Vector::Zero(problem.n());
    stats.sigma_diag = Vector::Zero(problem.n());
    if (active.empty()) return stats;

    const Index s = static_cast<Index>(active.size());
    Matrix phi_s(problem.m(), s);
    for (Index j = 0; j < s; ++j) phi_s.col(j) = problem.design().col(active[static_cast<std::size_t>(j)]);

    Matrix a = phi_s.transpose() * phi_s;
    for (Index j = 0; j < s; ++j)
        a(j, j) += problem.lambda() / hyper.gamma[active[static_cast<std::size_t>(j)]];

    Eigen::LLT<Matrix> llt(a);
    if (llt.info() != Eigen::Success)
        throw numerical_error("posterior_mean: factorization of (Phi_S^T Phi_S + lambda Gamma_S^-1) failed");

    Vector mu_s = llt.solve(phi_s.transpose() * problem.observation());
    Matrix cov_s = llt.solve(Matrix::Identity(s, s));
    for (Index j = 0; j < s; ++j) {
        stats.mu[active[static_cast<std::size_t>(j)]] = mu_s[j];
        stats.sigma_diag[active[static_cast<std::size_t>(j)]] = problem.lambda() * cov_s(j, j);
    }
    return stats;
}

/// Negative log evidence
///   L(gamma) = log|lambda I_m + Phi Gamma Phi^T| + y^T (lambda I_m + Phi Gamma Phi^T)^-1 y,
/// log-determinant read off the Cholesky factor diagonal.
inline double evidence_cost(const RecoveryProblem& problem, const HyperParams& hyper) {
    detail::check_gamma(hyper.gamma, problem.n(), "evidence_cost");
    Eigen::LLT<Matrix> llt = detail::gram_llt(problem.design(), hyper.gamma, problem.lambda(), "evidence_cost");
    const double log_det = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    return log_det + problem.observation().dot(llt.solve(problem.observation()));
}

/// Joint objective |y - Phi theta|^2 + theta^T Gamma^-1 theta
/// + log|lambda I_m + Phi Gamma Phi^T|, with the convention 0/0 = 0 for
/// pruned coordinates. The reweighting loop must not increase this value.
inline double ccp_surrogate(const RecoveryProblem& problem, const Vector& theta, const HyperParams& hyper) {
    detail::check_gamma(hyper.gamma, problem.n(), "ccp_surrogate");
    if (theta.size() != problem.n())
        throw std::invalid_argument("ccp_surrogate: theta length must equal the coefficient count");
    double quad = 0.0;
    for (Index j = 0; j < theta.size(); ++j) {
        if (hyper.gamma[j] > 0.0)
            quad += theta[j] * theta[j] / hyper.gamma[j];
        else if (theta[j] != 0.0)
            return std::numeric_limits<double>::infinity();
    }
    Eigen::LLT<Matrix> llt = detail::gram_llt(problem.design(), hyper.gamma, problem.lambda(), "ccp_surrogate");
    const double log_det = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    return (problem.observation() - problem.design() * theta).squaredNorm() + quad + log_det;
}

/// Per-outer-iteration history of the reweighting loop, for diagnostics.
struct SblTrace {
    std::vector<Vector> theta;
    std::vector<Vector> gamma;
};

/// Full-dictionary Bayesian reweighted baseline: alternate a weighted l1
/// solve (W^(0) = I), the gamma update, and fresh weights on the whole
/// dictionary. No support pruning. The returned objective_trace holds the
/// joint surrogate evaluated at each outer iterate; subproblems warm-start
/// at the previous iterate so the surrogate cannot increase.
inline SolveReport sbl_reweighted_solve(const RecoveryProblem& problem, const SolverConfig& config,
                                        SblTrace* trace = nullptr) {
    validate(config);
    constexpr double outer_tol = 1e-6;
    const Index n = problem.n();

    const StepPolicy step = StepPolicy::for_design(problem.design());
    auto inner = config.inner_algorithm == InnerAlgorithm::Ista ? ista_solve : fista_solve;

    SolveReport report;
    Vector weights = Vector::Ones(n); // W^(0) = I
    Vector theta = Vector::Zero(n);
    for (int k = 0; k < config.k_outer; ++k) {
        SolveReport sub = inner(problem, weights, theta, step, config.k_inner, config.inner_tol);
        Vector theta_next = std::move(sub.theta_hat);
        HyperParams hyper = update_gamma(theta_next, WeightDiag{weights});

        report.objective_trace.push_back(ccp_surrogate(problem, theta_next, hyper));
        ++report.iterations_run;
        if (trace) {
            trace->theta.push_back(theta_next);
            trace->gamma.push_back(hyper.gamma);
        }

        const double change = (theta_next - theta).norm();
        const double scale = std::max(1.0, theta.norm());
        theta = std::move(theta_next);
        if (change <= outer_tol * scale) {
            report.converged = true;
            break;
        }
        if (k + 1 < config.k_outer)
            weights = compute_weights(problem.design(), hyper, problem.lambda()).w;
    }
    report.theta_hat = std::move(theta);
    return report;
}

} // namespace asdbr
