#pragma once

#include <cstdint>

#include "gaussfit/core_model.hpp"
#include "gaussfit/weighting.hpp"

namespace gaussfit {

/// Grid x_i = x_start + i / sampling_rate up to x_end.
struct SignalSpec {
    GaussianParams params;
    double x_start = 0.0;
    double x_end = 10.0;
    double sampling_rate = 10.0;
};

struct Seed {
    std::uint64_t value = 0;

    bool operator==(const Seed&) const = default;
};

void validate(const SignalSpec& spec);

/// Noiseless samples. The last grid point is kept when it lies within 1e-9 of x_end.
SampleSet synthesize(const SignalSpec& spec);

/// Adds independent N(0, sigma_n^2) draws. The stream is mt19937_64 seeded with
/// `seed`; uniforms take the top 53 bits of each output, and normals come in
/// pairs from the Box-Muller transform of (1 - u1, u2).
SampleSet add_white_noise(const SampleSet& s, const NoiseModel& noise, Seed seed);

/// sigma_n = A * 10^(-snr_db / 20)
double snr_db_to_sigma(double snr_db, double amplitude);
double sigma_to_snr_db(double sigma_n, double amplitude);

/// Grows a window outward from the leftmost maximum, stopping in each direction
/// before the first sample with y < threshold. Throws EmptySelection when the
/// peak itself is below threshold.
SampleSet select_samples(const SampleSet& s, double threshold);

/// Child seed for (stream, index): splitmix64 finalizer applied to the master
/// seed mixed with both indices.
Seed derive_seed(Seed master, std::uint64_t stream, std::uint64_t index);

} // namespace gaussfit
