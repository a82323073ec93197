#include <doctest.h>

#include <cmath>

#include "gaussfit/fitters.hpp"
#include "gaussfit/simulation.hpp"
#include "gaussfit/weighting.hpp"
#include "oracles.hpp"

using namespace gaussfit;

TEST_CASE("std_normal_cdf against the erf-series oracle") {
    CHECK(std_normal_cdf(0.0) == 0.5);
    // Frozen from oracle::normal_cdf (and mpmath at 40 digits).
    CHECK(std::abs(std_normal_cdf(1.959964) - 0.97500000090355765) <= 1e-12);
    CHECK(std::abs(std_normal_cdf(1.959964) - 0.975) <= 1e-6);
    CHECK(std::abs(std_normal_cdf(2.0) - 0.97724986805182079) <= 1e-12);
    CHECK(std::abs(std_normal_cdf(-3.0) - 0.0013498980316300946) <= 1e-12);

    for (int i = -600; i <= 600; ++i) {
        const double x = i * 0.01;
        CHECK(std::abs(std_normal_cdf(x) - oracle::normal_cdf(x)) <= 1e-10);
        CHECK(std::abs(std_normal_cdf(-x) + std_normal_cdf(x) - 1.0) <= 1e-15);
    }
}

TEST_CASE("delta_pdf integrates to the probability of a positive observation") {
    for (double ratio : {10.0, 1000.0}) {
        const NoiseModel noise{0.1};
        const double y = ratio * noise.sigma_n;
        const double mass =
            oracle::integrate_pieces([&](double t) { return delta_pdf(t, y, noise); },
                                     {-20.0, -1.0, -0.1, -0.01, 0.0, 0.01, 0.1, 1.0, 20.0});
        CHECK(std::abs(mass - 1.0) <= 1e-6);
    }
    // Below a few sigma, mass of ybar <= 0 is missing: total is Phi(y / sigma_n).
    for (double ratio : {0.5, 1.0, 2.0}) {
        const NoiseModel noise{1.0};
        const double mass = oracle::integrate_pieces(
            [&](double t) { return delta_pdf(t, ratio, noise); }, {-40.0, -5.0, 0.0, 5.0, 20.0});
        CHECK(std::abs(mass - oracle::normal_cdf(ratio)) <= 1e-8);
    }
}

TEST_CASE("delta_pdf concentrates near zero for high amplitude") {
    const NoiseModel noise{0.01};
    const double y = 1000.0 * noise.sigma_n;
    const double inner =
        oracle::integrate_pieces([&](double t) { return delta_pdf(t, y, noise); },
                                 {-0.01, -0.001, 0.0, 0.001, 0.01});
    CHECK(inner >= 0.99);
}

TEST_CASE("exact weight equals the integral of delta_pdf over [-M, M]") {
    const NoiseModel noise{0.1};
    for (double ratio : {0.5, 1.0, 2.0, 5.0, 10.0, 100.0}) {
        for (double m : {0.01, 0.1, 0.5}) {
            const double y = ratio * noise.sigma_n;
            const double integral =
                oracle::integrate_pieces([&](double t) { return delta_pdf(t, y, noise); },
                                         {-m, -0.1 * m, 0.0, 0.1 * m, m}, 1e-14);
            const double weight = confidence_weight(y, noise, {m, WeightMode::Exact});
            CAPTURE(ratio);
            CAPTURE(m);
            CHECK(std::abs(weight - integral) <= 1e-8);
        }
    }
}

TEST_CASE("CdfApprox at the peak gives the 95% level") {
    const NoiseModel noise{0.1};
    const double peak = 1.0;
    const ConfidenceConfig cfg{default_threshold(noise, peak), WeightMode::CdfApprox};
    CHECK(cfg.threshold == doctest::Approx(0.2));
    // 2 Phi(2) - 1, frozen from the oracle.
    CHECK(std::abs(confidence_weight(peak, noise, cfg) - 0.95449973610364158) <= 1e-12);
    CHECK(std::abs(2.0 * oracle::normal_cdf(2.0) - 1.0 - 0.95449973610364158) <= 1e-15);
    CHECK(confidence_weight(0.0, noise, cfg) == 0.0);
}

TEST_CASE("non-positive amplitudes get zero weight in every mode") {
    const NoiseModel noise{0.1};
    for (auto mode : {WeightMode::Exact, WeightMode::CdfApprox, WeightMode::Linear}) {
        CHECK(confidence_weight(-0.3, noise, {0.2, mode}) == 0.0);
        CHECK(confidence_weight(0.0, noise, {0.2, mode}) == 0.0);
    }
    CHECK(confidence_weight(0.37, noise, {0.2, WeightMode::Linear}) == 0.37);
}

TEST_CASE("weights are bounded and monotone in amplitude") {
    const NoiseModel noise{0.05};
    for (auto mode : {WeightMode::Exact, WeightMode::CdfApprox}) {
        for (double m : {0.01, 0.1, 1.0, 3.0}) {
            double previous = 0.0;
            for (int i = 0; i <= 2000; ++i) {
                const double y = i * 0.005;
                const double w = confidence_weight(y, noise, {m, mode});
                CHECK(w >= 0.0);
                CHECK(w <= 1.0);
                CHECK(w >= previous);
                previous = w;
            }
        }
    }
}

TEST_CASE("exact and approximate weights agree as M shrinks at fixed yM/sigma_n") {
    const NoiseModel noise{0.1};
    const double m = 0.01;
    for (double z : {0.1, 0.5, 1.0, 2.0, 3.0}) {
        const double y = z * noise.sigma_n / m;
        const double exact = confidence_weight(y, noise, {m, WeightMode::Exact});
        const double approx = confidence_weight(y, noise, {m, WeightMode::CdfApprox});
        CHECK(std::abs(exact - approx) <= 1e-3 * approx);
    }
}

TEST_CASE("Linear mode reproduces amplitude weighting") {
    const SampleSet clean = synthesize({{1.0, 5.0, 0.2}, 4.0, 6.0, 10.0});
    const SampleSet noisy = add_white_noise(clean, NoiseModel{0.05}, Seed{17});
    const SampleSet s = select_samples(noisy, 0.1);
    const auto guo = fit_guo(s);
    const auto linear = fit_probability(s, NoiseModel{0.05}, {0.1, WeightMode::Linear});
    CHECK(linear.params.amplitude == doctest::Approx(guo.params.amplitude).epsilon(1e-10));
    CHECK(std::abs(linear.params.peak_position - guo.params.peak_position) <= 1e-10);
    CHECK(std::abs(linear.params.width - guo.params.width) <= 1e-10);
}

TEST_CASE("weight mode names round-trip") {
    for (auto mode : {WeightMode::Exact, WeightMode::CdfApprox, WeightMode::Linear}) {
        CHECK(parse_weight_mode(to_string(mode)) == mode);
    }
    CHECK_FALSE(parse_weight_mode("uniform").has_value());
}
