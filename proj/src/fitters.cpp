#include "gaussfit/fitters.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "gaussfit/errors.hpp"
#include "gaussfit/linalg3.hpp"

namespace gaussfit {

namespace {

double max_abs_change(const GaussianParams& lhs, const GaussianParams& rhs) {
    return std::max({std::abs(lhs.amplitude - rhs.amplitude),
                     std::abs(lhs.peak_position - rhs.peak_position),
                     std::abs(lhs.width - rhs.width)});
}

double max_amplitude(const SampleSet& s) {
    double peak = -std::numeric_limits<double>::infinity();
    for (const auto& sample : s) peak = std::max(peak, sample.y);
    return peak;
}

} // namespace

FitResult fit_with_weights(const SampleSet& s, std::span<const double> weights, Method method,
                           std::optional<WeightMode> mode) {
    const QuadraticFit q = solve_weighted_quadratic(s, weights);

    // Recover parameters in the centred frame, where a - b^2/(4c) does not
    // suffer the cancellation it would for peaks far from x = 0.
    const GaussianParams local = coeffs_to_params(q.centered);
    GaussianParams params{local.amplitude, q.shift + q.scale * local.peak_position,
                          q.scale * local.width};
    if (!std::isfinite(params.amplitude) || !std::isfinite(params.peak_position) ||
        !std::isfinite(params.width) || !(params.amplitude > 0.0)) {
        throw FitError("fit produced non-finite Gaussian parameters");
    }

    FitResult result;
    result.params = params;
    result.coeffs = q.coeffs;
    result.method = method;
    result.weight_mode = mode;
    result.n_used = q.n_used;
    result.condition_hint = q.pivot_ratio;
    return result;
}

FitResult fit_caruana(const SampleSet& s) {
    const std::vector<double> ones(s.size(), 1.0);
    return fit_with_weights(s, ones, Method::Caruana);
}

FitResult fit_guo(const SampleSet& s) {
    std::vector<double> w;
    w.reserve(s.size());
    for (const auto& sample : s) w.push_back(std::max(sample.y, 0.0));
    return fit_with_weights(s, w, Method::Guo);
}

FitResult fit_probability(const SampleSet& s, const NoiseModel& noise,
                          const ConfidenceConfig& cfg) {
    validate(noise);
    validate(cfg);
    const std::vector<double> ys = s.ys();
    return fit_with_weights(s, confidence_weights(ys, noise, cfg), Method::Probability, cfg.mode);
}

FitResult fit_probability(const SampleSet& s, const NoiseModel& noise, WeightMode mode,
                          double confidence_factor) {
    validate(noise);
    const double peak = max_amplitude(s);
    if (!(peak > 0.0)) throw InsufficientSamples("no sample has positive amplitude");
    return fit_probability(s, noise,
                           {default_threshold(noise, peak, confidence_factor), mode});
}

void validate(const IterationConfig& cfg) {
    if (cfg.max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
    if (!(cfg.tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
    if (!(cfg.confidence_factor > 0.0)) {
        throw std::invalid_argument("confidence factor must be positive");
    }
    if (cfg.mode != WeightMode::Linear) validate(cfg.noise);
    if (cfg.threshold) validate(ConfidenceConfig{*cfg.threshold, cfg.mode});
}

IterativeFitResult fit_iterative(const SampleSet& s, const IterationConfig& cfg) {
    validate(cfg);

    // Amplitudes the weights are computed from: observed values first, then
    // the previous iterate's model.
    std::vector<double> amplitudes = s.ys();
    double peak = max_amplitude(s);
    if (!(peak > 0.0)) throw InsufficientSamples("no sample has positive amplitude");

    IterativeFitResult out;
    for (std::size_t k = 0; k < cfg.max_iterations; ++k) {
        ConfidenceConfig weights_cfg{1.0, cfg.mode};
        if (cfg.mode != WeightMode::Linear) {
            weights_cfg.threshold =
                cfg.threshold ? *cfg.threshold
                              : default_threshold(cfg.noise, peak, cfg.confidence_factor);
        }
        const std::vector<double> w = confidence_weights(amplitudes, cfg.noise, weights_cfg);

        FitResult fit;
        try {
            fit = fit_with_weights(s, w, Method::Probability, cfg.mode);
        } catch (const FitError& e) {
            if (k == 0) throw;
            out.stop_reason = StopReason::Diverged;
            out.failure = e.what();
            break;
        }

        out.trace.push_back(fit.params);
        out.final = fit;
        out.iterations = out.trace.size();
        if (k > 0 && max_abs_change(out.trace[k], out.trace[k - 1]) < cfg.tolerance) {
            out.converged = true;
            out.stop_reason = StopReason::Converged;
            break;
        }

        for (std::size_t i = 0; i < s.size(); ++i) {
            amplitudes[i] = eval_gaussian(fit.params, s[i].x);
        }
        peak = fit.params.amplitude;
    }
    return out;
}

std::string_view to_string(Method method) {
    switch (method) {
    case Method::Caruana: return "caruana";
    case Method::Guo: return "guo";
    case Method::Probability: return "prob";
    }
    return "?";
}

std::string_view to_string(StopReason reason) {
    switch (reason) {
    case StopReason::Converged: return "converged";
    case StopReason::MaxIterations: return "max-iterations";
    case StopReason::Diverged: return "diverged";
    }
    return "?";
}

} // namespace gaussfit
