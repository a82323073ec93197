#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gaussfit/core_model.hpp"
#include "gaussfit/weighting.hpp"

namespace gaussfit {

enum class Method { Caruana, Guo, Probability };

struct FitResult {
    GaussianParams params;
    PolyCoeffs coeffs;
    Method method = Method::Caruana;
    std::optional<WeightMode> weight_mode;
    std::size_t n_used = 0;
    /// Pivot ratio from the 3x3 solve; small values mean poor conditioning.
    double condition_hint = 0.0;
};

/// Common path behind every fitter: weighted log-quadratic solve followed by
/// parameter recovery. Throws InsufficientSamples, SingularSystem or
/// NonNegativeCurvature.
FitResult fit_with_weights(const SampleSet& s, std::span<const double> weights,
                           Method method = Method::Probability,
                           std::optional<WeightMode> mode = std::nullopt);

/// Unweighted log-domain least squares.
FitResult fit_caruana(const SampleSet& s);

/// Log-domain least squares weighted by the observed amplitude.
FitResult fit_guo(const SampleSet& s);

/// Log-domain least squares weighted by each sample's confidence level.
FitResult fit_probability(const SampleSet& s, const NoiseModel& noise,
                          const ConfidenceConfig& cfg);

/// Same, with M = confidence_factor * sigma_n / max(y).
FitResult fit_probability(const SampleSet& s, const NoiseModel& noise, WeightMode mode,
                          double confidence_factor = 2.0);

struct IterationConfig {
    std::size_t max_iterations = 100;
    /// Stop once max(|dA|, |dx_p|, |dsigma|) between iterates drops below this.
    double tolerance = 1e-6;
    NoiseModel noise;
    WeightMode mode = WeightMode::CdfApprox;
    /// Multiplier in M = factor * sigma_n / y_p, with y_p the current peak estimate.
    double confidence_factor = 2.0;
    /// Fixed M; overrides the per-iteration value above when set.
    std::optional<double> threshold;
};

void validate(const IterationConfig& cfg);

enum class StopReason {
    Converged,
    MaxIterations,
    /// A later iterate failed to solve or lost its Gaussian shape.
    Diverged,
};

struct IterativeFitResult {
    FitResult final;
    std::vector<GaussianParams> trace;
    std::size_t iterations = 0;
    bool converged = false;
    StopReason stop_reason = StopReason::MaxIterations;
    /// Error message when stop_reason is Diverged.
    std::string failure;
};

/// Re-weighted fit: iteration 0 weights the observed amplitudes, every later
/// iteration weights the previous solution's model amplitudes. A failure in
/// iteration 0 propagates; later failures end the run with converged = false.
IterativeFitResult fit_iterative(const SampleSet& s, const IterationConfig& cfg);

std::string_view to_string(Method method);
std::string_view to_string(StopReason reason);

} // namespace gaussfit
