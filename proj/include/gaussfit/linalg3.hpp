#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>

#include "gaussfit/core_model.hpp"

namespace gaussfit {

using Matrix3 = std::array<std::array<double, 3>, 3>;
using Vector3 = std::array<double, 3>;

/// Weighted moment system for ln y ~ a + b u + c u^2 with u = (x - shift) / scale.
///
///   matrix[r][c] = sum_i u_i^(r+c) w_i^2
///   rhs[r]       = sum_i u_i^r w_i^2 ln y_i
///
/// Only samples with w_i > 0 and y_i > 0 contribute; `n_used` counts them.
struct NormalSystem {
    Matrix3 matrix{};
    Vector3 rhs{};
    std::size_t n_used = 0;
    double shift = 0.0;
    double scale = 1.0;
};

/// Throws InsufficientSamples when fewer than three samples are usable, and
/// std::invalid_argument on a weight vector of the wrong length or with
/// negative/non-finite entries.
NormalSystem build_weighted_system(const SampleSet& s, std::span<const double> w,
                                   double shift = 0.0, double scale = 1.0);

struct Solve3Result {
    PolyCoeffs coeffs;
    /// Smallest over largest pivot magnitude seen during elimination.
    double pivot_ratio = 0.0;
};

/// Gaussian elimination with partial pivoting plus one refinement step.
/// Throws SingularSystem when a pivot falls below 1e-12 of the largest entry.
Solve3Result solve3_with_diagnostics(const Matrix3& m, const Vector3& v);
PolyCoeffs solve3(const NormalSystem& sys);

struct QuadraticFit {
    PolyCoeffs coeffs;    // in x
    PolyCoeffs centered;  // in u = (x - shift) / scale
    double shift = 0.0;
    double scale = 1.0;
    std::size_t n_used = 0;
    double pivot_ratio = 0.0;
};

/// Minimizes sum_i w_i^2 (ln y_i - a - b x_i - c x_i^2)^2. By default x is
/// shifted by the w^2-weighted mean of the usable samples and divided by their
/// w^2-weighted RMS spread before solving. An explicit `shift` disables the
/// scaling.
QuadraticFit solve_weighted_quadratic(const SampleSet& s, std::span<const double> w,
                                      std::optional<double> shift = std::nullopt);

PolyCoeffs fit_weighted_quadratic(const SampleSet& s, std::span<const double> w);

/// The objective minimized above, over usable samples only.
double weighted_log_objective(const SampleSet& s, std::span<const double> w,
                              const PolyCoeffs& q);

} // namespace gaussfit
