#include "gaussfit/simulation.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "gaussfit/errors.hpp"

namespace gaussfit {

namespace {

constexpr double kGridSlack = 1e-9;

/// Standard normal variates from mt19937_64 via Box-Muller, two per pair of uniforms.
class NormalStream {
public:
    explicit NormalStream(Seed seed) : engine_(seed.value) {}

    double next() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        // u1 in (0, 1], u2 in [0, 1)
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace

void validate(const SignalSpec& spec) {
    validate(spec.params);
    if (!std::isfinite(spec.x_start) || !std::isfinite(spec.x_end) ||
        !(spec.x_start < spec.x_end)) {
        throw std::invalid_argument("signal range requires finite x_start < x_end");
    }
    if (!(spec.sampling_rate > 0.0) || !std::isfinite(spec.sampling_rate)) {
        throw std::invalid_argument("sampling rate must be positive");
    }
}

SampleSet synthesize(const SignalSpec& spec) {
    validate(spec);
    const double span = spec.x_end - spec.x_start;
    const auto count =
        static_cast<std::size_t>(std::floor((span + kGridSlack) * spec.sampling_rate)) + 1;
    std::vector<Sample> samples;
    samples.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double x = spec.x_start + static_cast<double>(i) / spec.sampling_rate;
        if (x > spec.x_end + kGridSlack) break;
        samples.push_back({x, eval_gaussian(spec.params, x)});
    }
    return SampleSet(std::move(samples));
}

SampleSet add_white_noise(const SampleSet& s, const NoiseModel& noise, Seed seed) {
    validate(noise);
    NormalStream normal(seed);
    std::vector<Sample> out(s.begin(), s.end());
    for (auto& sample : out) sample.y += noise.sigma_n * normal.next();
    return SampleSet(std::move(out));
}

double snr_db_to_sigma(double snr_db, double amplitude) {
    if (!(amplitude > 0.0)) throw std::invalid_argument("amplitude must be positive");
    return amplitude * std::pow(10.0, -snr_db / 20.0);
}

double sigma_to_snr_db(double sigma_n, double amplitude) {
    if (!(amplitude > 0.0) || !(sigma_n > 0.0)) {
        throw std::invalid_argument("amplitude and sigma_n must be positive");
    }
    return 20.0 * std::log10(amplitude / sigma_n);
}

SampleSet select_samples(const SampleSet& s, double threshold) {
    if (s.empty()) throw EmptySelection("no samples to select from");

    std::size_t peak = 0;
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (s[i].y > s[peak].y) peak = i;
    }
    if (s[peak].y < threshold) {
        throw EmptySelection("peak amplitude is below the selection threshold");
    }

    std::size_t first = peak;
    while (first > 0 && !(s[first - 1].y < threshold)) --first;
    std::size_t last = peak;
    while (last + 1 < s.size() && !(s[last + 1].y < threshold)) ++last;
    return s.slice(first, last - first + 1);
}

Seed derive_seed(Seed master, std::uint64_t stream, std::uint64_t index) {
    std::uint64_t h = splitmix64(master.value);
    h = splitmix64(h ^ stream);
    h = splitmix64(h ^ index);
    return {h};
}

} // namespace gaussfit
