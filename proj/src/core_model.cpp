#include "gaussfit/core_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "gaussfit/errors.hpp"

namespace gaussfit {

SampleSet::SampleSet(std::vector<Sample> samples) : samples_(std::move(samples)) {
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        const auto& s = samples_[i];
        if (!std::isfinite(s.x) || !std::isfinite(s.y)) {
            throw std::invalid_argument("sample " + std::to_string(i) + " is not finite");
        }
        if (i > 0 && !(s.x > samples_[i - 1].x)) {
            throw std::invalid_argument("sample x values must be strictly increasing (index " +
                                        std::to_string(i) + ")");
        }
    }
}

SampleSet SampleSet::from_columns(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("x and y columns differ in length");
    }
    std::vector<Sample> samples(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) samples[i] = {x[i], y[i]};
    return SampleSet(std::move(samples));
}

std::vector<double> SampleSet::xs() const {
    std::vector<double> out;
    out.reserve(samples_.size());
    for (const auto& s : samples_) out.push_back(s.x);
    return out;
}

std::vector<double> SampleSet::ys() const {
    std::vector<double> out;
    out.reserve(samples_.size());
    for (const auto& s : samples_) out.push_back(s.y);
    return out;
}

SampleSet SampleSet::slice(std::size_t first, std::size_t count) const {
    if (first > samples_.size() || count > samples_.size() - first) {
        throw std::out_of_range("SampleSet::slice out of range");
    }
    SampleSet out;
    out.samples_.assign(samples_.begin() + static_cast<std::ptrdiff_t>(first),
                        samples_.begin() + static_cast<std::ptrdiff_t>(first + count));
    return out;
}

void validate(const GaussianParams& p) {
    if (!std::isfinite(p.amplitude) || !std::isfinite(p.peak_position) ||
        !std::isfinite(p.width)) {
        throw std::invalid_argument("Gaussian parameters must be finite");
    }
    if (!(p.amplitude > 0.0)) throw std::invalid_argument("amplitude must be positive");
    if (!(p.width > 0.0)) throw std::invalid_argument("width must be positive");
}

PolyCoeffs params_to_coeffs(const GaussianParams& p) {
    const double inv_two_var = 1.0 / (2.0 * p.width * p.width);
    return {std::log(p.amplitude) - p.peak_position * p.peak_position * inv_two_var,
            p.peak_position / (p.width * p.width), -inv_two_var};
}

GaussianParams coeffs_to_params(const PolyCoeffs& q) {
    if (!(q.c < 0.0)) {
        throw NonNegativeCurvature("log-quadratic curvature c = " + std::to_string(q.c) +
                                   " is not negative");
    }
    const double peak = -q.b / (2.0 * q.c);
    return {std::exp(q.a - q.b * q.b / (4.0 * q.c)), peak, std::sqrt(-1.0 / (2.0 * q.c))};
}

double eval_gaussian(const GaussianParams& p, double x) {
    const double d = (x - p.peak_position) / p.width;
    return p.amplitude * std::exp(-0.5 * d * d);
}

double eval_log_quadratic(const PolyCoeffs& q, double x) {
    return q.a + x * (q.b + x * q.c);
}

PolyCoeffs unshift_coeffs(const PolyCoeffs& centered, double shift, double scale) {
    // a' + b' (x - s) / h + c' (x - s)^2 / h^2
    const double b = centered.b / scale;
    const double c = centered.c / (scale * scale);
    return {centered.a - b * shift + c * shift * shift, b - 2.0 * c * shift, c};
}

} // namespace gaussfit
