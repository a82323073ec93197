#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gaussfit {

/// Physical description of y = A exp(-(x - x_p)^2 / (2 sigma^2)).
struct GaussianParams {
    double amplitude = 1.0;      // A > 0
    double peak_position = 0.0;  // x_p
    double width = 1.0;          // sigma > 0

    bool operator==(const GaussianParams&) const = default;
};

/// Log-domain quadratic: ln y = a + b x + c x^2.
struct PolyCoeffs {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;

    bool operator==(const PolyCoeffs&) const = default;
};

struct Sample {
    double x = 0.0;
    double y = 0.0;
};

/// Samples ordered by strictly increasing, finite x. Amplitudes may be
/// non-positive (noise), but must be finite.
class SampleSet {
public:
    SampleSet() = default;
    /// Throws std::invalid_argument on non-finite values or non-increasing x.
    explicit SampleSet(std::vector<Sample> samples);

    static SampleSet from_columns(std::span<const double> x, std::span<const double> y);

    std::span<const Sample> samples() const noexcept { return samples_; }
    std::size_t size() const noexcept { return samples_.size(); }
    bool empty() const noexcept { return samples_.empty(); }
    const Sample& operator[](std::size_t i) const { return samples_[i]; }

    auto begin() const noexcept { return samples_.cbegin(); }
    auto end() const noexcept { return samples_.cend(); }

    std::vector<double> xs() const;
    std::vector<double> ys() const;

    /// Contiguous sub-range [first, first + count).
    SampleSet slice(std::size_t first, std::size_t count) const;

private:
    std::vector<Sample> samples_;
};

/// Throws std::invalid_argument unless A > 0, sigma > 0 and all fields finite.
void validate(const GaussianParams& p);

PolyCoeffs params_to_coeffs(const GaussianParams& p);

/// Inverse of params_to_coeffs. Throws NonNegativeCurvature when c >= 0.
GaussianParams coeffs_to_params(const PolyCoeffs& q);

double eval_gaussian(const GaussianParams& p, double x);

/// a + b x + c x^2
double eval_log_quadratic(const PolyCoeffs& q, double x);

/// Re-expresses coefficients of a quadratic in u = (x - shift) / scale as
/// coefficients in x.
PolyCoeffs unshift_coeffs(const PolyCoeffs& centered, double shift, double scale = 1.0);

} // namespace gaussfit
