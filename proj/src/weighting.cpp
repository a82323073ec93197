#include "gaussfit/weighting.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gaussfit {

namespace {

constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;
const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

} // namespace

void validate(const NoiseModel& noise) {
    if (!(noise.sigma_n > 0.0) || !std::isfinite(noise.sigma_n)) {
        throw std::invalid_argument("noise sigma_n must be positive and finite");
    }
}

void validate(const ConfidenceConfig& cfg) {
    if (!(cfg.threshold > 0.0) || !std::isfinite(cfg.threshold)) {
        throw std::invalid_argument("confidence threshold M must be positive and finite");
    }
}

double std_normal_cdf(double x) {
    // erfc keeps full relative accuracy in the lower tail.
    return 0.5 * std::erfc(-x * kInvSqrt2);
}

double delta_pdf(double t, double y, const NoiseModel& noise) {
    const double et = std::exp(t);
    const double z = y * (et - 1.0) / noise.sigma_n;
    return y * et * kInvSqrt2Pi * std::exp(-0.5 * z * z) / noise.sigma_n;
}

double confidence_weight(double y, const NoiseModel& noise, const ConfidenceConfig& cfg) {
    if (!(y > 0.0)) return 0.0;
    switch (cfg.mode) {
    case WeightMode::Exact: {
        // Phi(u) - Phi(l) with l < 0 < u, written as two erf terms so that
        // small weights keep their relative precision.
        const double upper = y * std::expm1(cfg.threshold) / noise.sigma_n;
        const double lower = y * std::expm1(-cfg.threshold) / noise.sigma_n;
        return 0.5 * (std::erf(upper * kInvSqrt2) - std::erf(lower * kInvSqrt2));
    }
    case WeightMode::CdfApprox:
        // 2 Phi(z) - 1 == erf(z / sqrt 2)
        return std::erf(y * cfg.threshold / noise.sigma_n * kInvSqrt2);
    case WeightMode::Linear:
        return y;
    }
    throw std::invalid_argument("unknown weight mode");
}

std::vector<double> confidence_weights(std::span<const double> amplitudes,
                                       const NoiseModel& noise, const ConfidenceConfig& cfg) {
    std::vector<double> w;
    w.reserve(amplitudes.size());
    for (double y : amplitudes) w.push_back(confidence_weight(y, noise, cfg));
    return w;
}

double default_threshold(const NoiseModel& noise, double peak_amplitude,
                         double confidence_factor) {
    if (!(peak_amplitude > 0.0)) {
        throw std::invalid_argument("peak amplitude must be positive to set the threshold");
    }
    return confidence_factor * noise.sigma_n / peak_amplitude;
}

std::string_view to_string(WeightMode mode) {
    switch (mode) {
    case WeightMode::Exact: return "exact";
    case WeightMode::CdfApprox: return "approx";
    case WeightMode::Linear: return "linear";
    }
    return "?";
}

std::optional<WeightMode> parse_weight_mode(std::string_view text) {
    if (text == "exact") return WeightMode::Exact;
    if (text == "approx") return WeightMode::CdfApprox;
    if (text == "linear") return WeightMode::Linear;
    return std::nullopt;
}

} // namespace gaussfit
