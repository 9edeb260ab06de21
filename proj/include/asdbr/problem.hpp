#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <utility>
#include <vector>

#include "asdbr/errors.hpp"

namespace asdbr {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Distribution of the nonzero entries of a synthetic sparse signal.
enum class SignalDistribution {
    SpikesPlusMinusOne, // uniform +-1 spikes (sub-Gaussian)
    StandardGaussian,   // zero mean, unit variance
};

/// One instance of the linear model y = Phi * theta + w together with the
/// regularization weight lambda. Immutable after construction and safe to
/// share across threads.
class RecoveryProblem {
public:
    RecoveryProblem(Matrix design, Vector observation, double lambda)
        : design_(std::move(design)), observation_(std::move(observation)), lambda_(lambda) {
        if (design_.rows() < 1 || design_.cols() < 1)
            throw std::invalid_argument("RecoveryProblem: design matrix must be at least 1x1");
        if (observation_.size() != design_.rows())
            throw std::invalid_argument("RecoveryProblem: observation length must equal design row count");
        if (!(lambda_ > 0.0))
            throw std::invalid_argument("RecoveryProblem: lambda must be positive");
        for (Index j = 0; j < design_.cols(); ++j)
            if ((design_.col(j).array() == 0.0).all())
                throw degenerate_input_error("RecoveryProblem: design has an all-zero column");
    }

    const Matrix& design() const { return design_; }
    const Vector& observation() const { return observation_; }
    double lambda() const { return lambda_; }

    Index m() const { return design_.rows(); }
    Index n() const { return design_.cols(); }

private:
    Matrix design_;
    Vector observation_;
    double lambda_;
};

/// True coefficient vector and its support, used only for scoring.
/// Invariant: theta_true[i] != 0 exactly when i is in support.
struct GroundTruth {
    Vector theta_true;
    std::vector<Index> support; // sorted, distinct
};

/// Support of a vector read off as the set of exactly-nonzero entries.
inline std::vector<Index> nonzero_support(const Vector& v) {
    std::vector<Index> support;
    for (Index i = 0; i < v.size(); ++i)
        if (v[i] != 0.0) support.push_back(i);
    return support;
}

} // namespace asdbr
