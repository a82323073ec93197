#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "gaussfit/core_model.hpp"

namespace gaussfit {

/// Zero-mean white Gaussian noise with standard deviation sigma_n.
struct NoiseModel {
    double sigma_n = 1.0;
};

enum class WeightMode {
    Exact,      // Phi(y (e^M - 1)/sn) - Phi(y (e^-M - 1)/sn)
    CdfApprox,  // 2 Phi(y M / sn) - 1
    Linear,     // y (amplitude weighting)
};

/// `threshold` is M, the half-width of the accepted log-domain error interval.
struct ConfidenceConfig {
    double threshold = 0.0;
    WeightMode mode = WeightMode::CdfApprox;
};

void validate(const NoiseModel& noise);
void validate(const ConfidenceConfig& cfg);

/// Standard normal CDF.
double std_normal_cdf(double x);

/// Density of the log-domain error t = ln(1 + eps / y) for eps ~ N(0, sigma_n^2).
/// Its total mass is Phi(y / sigma_n), the probability that y + eps > 0.
double delta_pdf(double t, double y, const NoiseModel& noise);

/// Probability that a sample of true amplitude y has |ln(ybar / y)| <= M.
/// Non-positive amplitudes get weight 0 in every mode.
double confidence_weight(double y, const NoiseModel& noise, const ConfidenceConfig& cfg);

std::vector<double> confidence_weights(std::span<const double> amplitudes,
                                       const NoiseModel& noise, const ConfidenceConfig& cfg);

/// M = factor * sigma_n / y_p. factor = 2 corresponds to a ~95% band at the peak.
double default_threshold(const NoiseModel& noise, double peak_amplitude,
                         double confidence_factor = 2.0);

std::string_view to_string(WeightMode mode);
std::optional<WeightMode> parse_weight_mode(std::string_view text);

} // namespace gaussfit
