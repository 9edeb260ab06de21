#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "asdbr/problem.hpp"
#include "asdbr/rng.hpp"

namespace asdbr {

/// i.i.d. standard normal design matrix, filled row by row so the draw
/// order is part of the format. Same seed, same matrix, bit for bit.
inline Matrix generate_design_matrix(Index m, Index n, std::uint64_t seed) {
    if (m < 1 || n < 1)
        throw std::invalid_argument("generate_design_matrix: dimensions must be at least 1");
    RandomEngine rng = make_engine(seed, stream::design);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix phi(m, n);
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < n; ++j)
            phi(i, j) = gauss(rng);
    return phi;
}

/// Sparse signal with exactly k nonzeros on a uniform random k-subset of
/// {0..n-1} (partial Fisher-Yates). Gaussian draws that land exactly on
/// 0.0 are redrawn so the l0 count stays exact.
inline GroundTruth generate_sparse_signal(Index n, Index k, SignalDistribution dist, std::uint64_t seed) {
    if (n < 1)
        throw std::invalid_argument("generate_sparse_signal: n must be at least 1");
    if (k < 0 || k > n)
        throw std::invalid_argument("generate_sparse_signal: k must satisfy 0 <= k <= n");
    RandomEngine rng = make_engine(seed, stream::signal);

    std::vector<Index> indices(static_cast<std::size_t>(n));
    std::iota(indices.begin(), indices.end(), Index{0});
    for (Index i = 0; i < k; ++i) {
        std::uniform_int_distribution<Index> pick(i, n - 1);
        std::swap(indices[static_cast<std::size_t>(i)], indices[static_cast<std::size_t>(pick(rng))]);
    }
    std::vector<Index> support(indices.begin(), indices.begin() + k);
    std::sort(support.begin(), support.end());

    Vector theta = Vector::Zero(n);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_int_distribution<int> coin(0, 1);
    for (Index i : support) {
        if (dist == SignalDistribution::SpikesPlusMinusOne) {
            theta[i] = coin(rng) == 0 ? -1.0 : 1.0;
        } else {
            double v = gauss(rng);
            while (v == 0.0) v = gauss(rng);
            theta[i] = v;
        }
    }
    return GroundTruth{std::move(theta), std::move(support)};
}

struct NoisyObservation {
    Vector observation; // y = Phi * theta_true + noise
    Vector noise;
};

/// Add Gaussian noise rescaled so the realized SNR
///   20 log10(|Phi theta|_2 / |w|_2)
/// equals snr_db exactly (up to rounding). snr_db = +inf means noiseless.
inline NoisyObservation add_noise_at_snr(const Matrix& design, const Vector& theta_true, double snr_db,
                                         std::uint64_t seed) {
    if (theta_true.size() != design.cols())
        throw std::invalid_argument("add_noise_at_snr: theta length must equal design column count");
    Vector clean = design * theta_true;
    if (std::isinf(snr_db) && snr_db > 0)
        return NoisyObservation{clean, Vector::Zero(design.rows())};
    if (std::isnan(snr_db) || std::isinf(snr_db))
        throw std::invalid_argument("add_noise_at_snr: snr_db must be finite or +inf");

    const double signal_norm = clean.norm();
    if (signal_norm == 0.0)
        throw degenerate_input_error("add_noise_at_snr: Phi * theta_true is zero, SNR is undefined");

    RandomEngine rng = make_engine(seed, stream::noise);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector w(design.rows());
    do {
        for (Index i = 0; i < w.size(); ++i) w[i] = gauss(rng);
    } while (w.norm() == 0.0);

    w *= signal_norm / (w.norm() * std::pow(10.0, snr_db / 20.0));
    return NoisyObservation{clean + w, std::move(w)};
}

} // namespace asdbr
