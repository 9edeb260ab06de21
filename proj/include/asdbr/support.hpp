#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "asdbr/problem.hpp"

namespace asdbr {

/// Per-outer-iteration bookkeeping of the adaptive-support loop: the
/// compressed dictionary, the map from local column index back to the
/// original column, and the local weight diagonal. index_map is strictly
/// increasing, so it doubles as the sorted support set.
struct SupportState {
    int iteration = 0;
    std::vector<Index> index_map;
    Matrix compressed_design;
    Vector weights_local;

    static SupportState initial(const Matrix& design) {
        SupportState state;
        state.index_map.resize(static_cast<std::size_t>(design.cols()));
        std::iota(state.index_map.begin(), state.index_map.end(), Index{0});
        state.compressed_design = design;
        state.weights_local = Vector::Ones(design.cols());
        return state;
    }

    const std::vector<Index>& support() const { return index_map; }
};

struct ThresholdResult {
    Vector theta;              // input with sub-threshold entries set to zero
    std::vector<Index> kept;   // local indices of the surviving entries, sorted
};

/// Zero every entry with |theta_i| strictly below ratio * max_j |theta_j|.
/// The comparison is on magnitudes, so negative entries on the true support
/// survive, and entries exactly at the cutoff are kept.
inline ThresholdResult threshold_support(const Vector& theta_local, double ratio) {
    if (theta_local.size() == 0)
        throw std::invalid_argument("threshold_support: input must be nonempty");
    if (!(ratio > 0.0 && ratio < 1.0))
        throw std::invalid_argument("threshold_support: ratio must lie in (0,1)");

    const double cutoff = ratio * theta_local.cwiseAbs().maxCoeff();
    ThresholdResult result;
    result.theta = theta_local;
    for (Index i = 0; i < result.theta.size(); ++i) {
        if (std::abs(result.theta[i]) < cutoff) result.theta[i] = 0.0;
        if (result.theta[i] != 0.0) result.kept.push_back(i);
    }
    return result;
}

/// Drop the columns outside `kept` from the compressed dictionary and
/// restrict index_map and weights_local to the same positions.
inline SupportState compress_dictionary(const SupportState& state, const std::vector<Index>& kept) {
    if (kept.empty())
        throw empty_support_error("compress_dictionary: support is empty");
    const Index cols = state.compressed_design.cols();
    for (std::size_t i = 0; i < kept.size(); ++i) {
        if (kept[i] < 0 || kept[i] >= cols)
            throw std::invalid_argument("compress_dictionary: index out of range");
        if (i > 0 && kept[i] <= kept[i - 1])
            throw std::invalid_argument("compress_dictionary: indices must be strictly increasing");
    }

    SupportState next;
    next.iteration = state.iteration + 1;
    next.index_map.reserve(kept.size());
    next.compressed_design.resize(state.compressed_design.rows(), static_cast<Index>(kept.size()));
    next.weights_local.resize(static_cast<Index>(kept.size()));
    for (std::size_t i = 0; i < kept.size(); ++i) {
        next.index_map.push_back(state.index_map[static_cast<std::size_t>(kept[i])]);
        next.compressed_design.col(static_cast<Index>(i)) = state.compressed_design.col(kept[i]);
        next.weights_local[static_cast<Index>(i)] = state.weights_local[kept[i]];
    }
    return next;
}

/// Scatter a local solution back to length n: entry index_map[i] receives
/// theta_local[i], everything else is exactly zero.
inline Vector embed_solution(const Vector& theta_local, const std::vector<Index>& index_map, Index n) {
    if (theta_local.size() != static_cast<Index>(index_map.size()))
        throw std::invalid_argument("embed_solution: theta_local and index_map must have equal length");
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    Vector out = Vector::Zero(n);
    for (std::size_t i = 0; i < index_map.size(); ++i) {
        const Index j = index_map[i];
        if (j < 0 || j >= n)
            throw std::invalid_argument("embed_solution: index out of range");
        if (seen[static_cast<std::size_t>(j)])
            throw std::invalid_argument("embed_solution: duplicate index");
        seen[static_cast<std::size_t>(j)] = true;
        out[j] = theta_local[static_cast<Index>(i)];
    }
    return out;
}

} // namespace asdbr
