#pragma once

#include <stdexcept>
#include <string>

namespace asdbr {

/// Linear-algebra failure (e.g. a Cholesky factorization that did not
/// complete because the matrix is not positive definite).
struct numerical_error : std::runtime_error {
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

/// Input that is structurally valid but degenerate for the requested
/// operation (all-zero signal, all-zero matrix, zero ground truth).
struct degenerate_input_error : std::invalid_argument {
    explicit degenerate_input_error(const std::string& what) : std::invalid_argument(what) {}
};

/// Thresholding removed every remaining column.
struct empty_support_error : std::runtime_error {
    explicit empty_support_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace asdbr
