#pragma once

#include <cmath>
#include <stdexcept>

#include "asdbr/problem.hpp"
#include "asdbr/rng.hpp"

namespace asdbr {

/// Soft-thresholding operator: sign(x) * (|x| - nu) when |x| > nu, else 0.
/// This is the proximal map of nu * |.|.
inline double soft_threshold(double x, double nu) {
    if (nu < 0.0)
        throw std::invalid_argument("soft_threshold: threshold must be nonnegative");
    const double shrunk = std::abs(x) - nu;
    if (shrunk <= 0.0) return 0.0;
    return x > 0.0 ? shrunk : -shrunk;
}

/// Component-wise soft thresholding with per-entry thresholds.
inline Vector soft_threshold(const Vector& x, const Vector& nu) {
    if (x.size() != nu.size())
        throw std::invalid_argument("soft_threshold: x and nu must have equal length");
    Vector out(x.size());
    for (Index i = 0; i < x.size(); ++i)
        out[i] = soft_threshold(x[i], nu[i]);
    return out;
}

inline Vector soft_threshold(const Vector& x, double nu) {
    if (nu < 0.0)
        throw std::invalid_argument("soft_threshold: threshold must be nonnegative");
    Vector out(x.size());
    for (Index i = 0; i < x.size(); ++i)
        out[i] = soft_threshold(x[i], nu);
    return out;
}

/// Squared spectral norm |A|_2^2 = lambda_max(A^T A) by power iteration on
/// A^T A, two matrix-vector products per step. The start vector comes from
/// a fixed internal seed, so the result is deterministic for a given matrix.
inline double spectral_norm_sq(const Matrix& a, double tol = 1e-12) {
    if ((a.array() == 0.0).all())
        throw degenerate_input_error("spectral_norm_sq: matrix is identically zero");

    RandomEngine rng(mix64(0x5eeded5eeded5eedULL));
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector v(a.cols());
    for (Index i = 0; i < v.size(); ++i) v[i] = gauss(rng);
    v.normalize();

    double estimate = 0.0;
    int settled = 0;
    constexpr int max_iterations = 20000;
    for (int it = 0; it < max_iterations; ++it) {
        Vector u = a * v;               // u = A v
        const double rayleigh = u.squaredNorm(); // v^T A^T A v with |v| = 1
        v.noalias() = a.transpose() * u;
        const double vnorm = v.norm();
        if (vnorm == 0.0) {
            // v fell into the null space; redraw and keep going
            for (Index i = 0; i < v.size(); ++i) v[i] = gauss(rng);
            v.normalize();
            settled = 0;
            continue;
        }
        v /= vnorm;
        if (it > 0 && std::abs(rayleigh - estimate) <= tol * rayleigh) {
            // require the tolerance twice in a row before trusting it
            if (++settled >= 2) return rayleigh;
        } else {
            settled = 0;
        }
        estimate = rayleigh;
    }
    return estimate;
}

/// Gradient step size tau for the shrinkage-thresholding iterations.
/// Valid while tau <= safety / |Phi|_2^2 for the matrix it was built against.
struct StepPolicy {
    double tau = 0.0;
    double safety = 0.99;

    static StepPolicy for_design(const Matrix& design, double safety = 0.99, double tol = 1e-12) {
        if (!(safety > 0.0 && safety < 1.0))
            throw std::invalid_argument("StepPolicy: safety must lie in (0,1)");
        return StepPolicy{safety / spectral_norm_sq(design, tol), safety};
    }
};

} // namespace asdbr
