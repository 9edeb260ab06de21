#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "asdbr/problem.hpp"
#include "asdbr/prox.hpp"

namespace asdbr {

struct SolveReport {
    Vector theta_hat;
    int iterations_run = 0;
    std::vector<double> objective_trace; // one value per iteration
    bool converged = false;
};

/// t-sequence of the accelerated scheme: t <- (1 + sqrt(1 + 4 t^2)) / 2.
inline double fista_next_t(double t) {
    return 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
}

/// Momentum bookkeeping for the accelerated iteration. t_prev/t_curr hold
/// consecutive elements of the t-sequence starting from 1; the extrapolation
/// point is recomputed from x_prev each step and needs no storage here.
struct FistaState {
    Vector x_prev;
    double t_prev = 1.0;
    double t_curr = 1.0;

    void advance() {
        t_prev = t_curr;
        t_curr = fista_next_t(t_prev);
    }
};

/// 0.5 |y - Phi x|^2 + lambda * sum_i weights_i |x_i|
inline double weighted_l1_objective(const RecoveryProblem& problem, const Vector& weights, const Vector& x) {
    const double fit = 0.5 * (problem.observation() - problem.design() * x).squaredNorm();
    return fit + problem.lambda() * weights.dot(x.cwiseAbs());
}

namespace detail {

inline void check_solver_inputs(const RecoveryProblem& problem, const Vector& weights, const Vector& x0,
                                const StepPolicy& step, int k_inner, double tol) {
    if (weights.size() != problem.n())
        throw std::invalid_argument("solver: weights length must equal the coefficient count");
    if ((weights.array() < 0.0).any())
        throw std::invalid_argument("solver: weights must be nonnegative");
    if (x0.size() != problem.n())
        throw std::invalid_argument("solver: x0 length must equal the coefficient count");
    if (!(step.tau > 0.0))
        throw std::invalid_argument("solver: step size must be positive");
    if (k_inner < 1)
        throw std::invalid_argument("solver: iteration budget must be >= 1");
    if (tol < 0.0)
        throw std::invalid_argument("solver: tolerance must be nonnegative");
}

} // namespace detail

/// Iterative shrinkage-thresholding on the weighted l1 problem
///   min 0.5 |y - Phi x|^2 + lambda |diag(weights) x|_1,
/// x <- eta(x + tau Phi^T (y - Phi x), lambda tau weights).
/// Runs at most k_inner steps; stops early once
/// |x_next - x|_2 <= tol * max(1, |x|_2). The gradient uses two
/// matrix-vector products per step; Phi^T Phi is never formed.
inline SolveReport ista_solve(const RecoveryProblem& problem, const Vector& weights, const Vector& x0,
                              const StepPolicy& step, int k_inner, double tol) {
    detail::check_solver_inputs(problem, weights, x0, step, k_inner, tol);
    const Matrix& phi = problem.design();
    const Vector& y = problem.observation();
    const double tau = step.tau;
    const Vector thresholds = (problem.lambda() * tau) * weights;

    SolveReport report;
    report.objective_trace.reserve(static_cast<std::size_t>(std::min(k_inner, 4096)));

    Vector x = x0;
    Vector residual(problem.m());
    for (int it = 0; it < k_inner; ++it) {
        residual.noalias() = y - phi * x;
        if (it > 0)
            report.objective_trace.push_back(0.5 * residual.squaredNorm() +
                                             problem.lambda() * weights.dot(x.cwiseAbs()));
        Vector x_next = soft_threshold(x + tau * (phi.transpose() * residual), thresholds);
        const double change = (x_next - x).norm();
        const double scale = std::max(1.0, x.norm());
        x.swap(x_next);
        ++report.iterations_run;
        if (change <= tol * scale) {
            report.converged = true;
            break;
        }
    }
    report.objective_trace.push_back(weighted_l1_objective(problem, weights, x));
    report.theta_hat = std::move(x);
    return report;
}

/// Accelerated variant: the gradient step is taken at the extrapolated point
///   z = x + ((t_prev - 1) / t_curr) (x - x_prev),
/// which is algebraically the plain iteration plus the momentum correction
/// tau * ((t_prev - 1)/t_curr) (tau^-1 I - Phi^T Phi)(x - x_prev). The first
/// step has zero momentum and reproduces one ISTA step exactly.
inline SolveReport fista_solve(const RecoveryProblem& problem, const Vector& weights, const Vector& x0,
                               const StepPolicy& step, int k_inner, double tol) {
    detail::check_solver_inputs(problem, weights, x0, step, k_inner, tol);
    const Matrix& phi = problem.design();
    const Vector& y = problem.observation();
    const double tau = step.tau;
    const Vector thresholds = (problem.lambda() * tau) * weights;

    SolveReport report;
    report.objective_trace.reserve(static_cast<std::size_t>(std::min(k_inner, 4096)));

    Vector x = x0;
    FistaState state;
    state.x_prev = x0;
    // Momentum coefficient for the first update is (t^(-1) - 1)/t^(0) = 0,
    // realized by t_prev = t_curr = 1 together with x - x_prev = 0.
    Vector z(problem.n());
    Vector residual(problem.m());
    for (int it = 0; it < k_inner; ++it) {
        const double beta = (state.t_prev - 1.0) / state.t_curr;
        z = x + beta * (x - state.x_prev);
        residual.noalias() = y - phi * z;
        Vector x_next = soft_threshold(z + tau * (phi.transpose() * residual), thresholds);
        const double change = (x_next - x).norm();
        const double scale = std::max(1.0, x.norm());
        state.x_prev = std::move(x);
        x = std::move(x_next);
        state.advance();
        ++report.iterations_run;
        report.objective_trace.push_back(weighted_l1_objective(problem, weights, x));
        if (change <= tol * scale) {
            report.converged = true;
            break;
        }
    }
    report.theta_hat = std::move(x);
    return report;
}

} // namespace asdbr
