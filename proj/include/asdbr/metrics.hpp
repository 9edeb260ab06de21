#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "asdbr/problem.hpp"

namespace asdbr {

/// Root of normalised mean square error, |theta_hat - theta_true|_2 / |theta_true|_2.
inline double rnmse(const Vector& theta_hat, const Vector& theta_true) {
    if (theta_hat.size() != theta_true.size())
        throw std::invalid_argument("rnmse: vectors must have equal length");
    const double denom = theta_true.norm();
    if (denom == 0.0)
        throw degenerate_input_error("rnmse: theta_true is zero, metric undefined");
    return (theta_hat - theta_true).norm() / denom;
}

/// Realized signal-to-noise ratio 20 log10(|Phi theta_true|_2 / |w|_2) in dB.
/// Zero noise returns +inf.
inline double snr_realized(const Matrix& design, const Vector& theta_true, const Vector& noise) {
    if (theta_true.size() != design.cols() || noise.size() != design.rows())
        throw std::invalid_argument("snr_realized: dimension mismatch");
    const double noise_norm = noise.norm();
    if (noise_norm == 0.0)
        return std::numeric_limits<double>::infinity();
    return 20.0 * std::log10((design * theta_true).norm() / noise_norm);
}

} // namespace asdbr
