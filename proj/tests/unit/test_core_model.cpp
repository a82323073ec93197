#include <doctest.h>

#include <cmath>
#include <random>

#include "gaussfit/core_model.hpp"
#include "gaussfit/errors.hpp"

using namespace gaussfit;

TEST_CASE("params_to_coeffs substitutes into the log-quadratic form") {
    // ln(exp(-(x - 5)^2 / 0.08)) = -312.5 + 125 x - 12.5 x^2
    const auto q = params_to_coeffs({1.0, 5.0, 0.2});
    CHECK(q.a == doctest::Approx(-312.5).epsilon(1e-14));
    CHECK(q.b == doctest::Approx(125.0).epsilon(1e-14));
    CHECK(q.c == doctest::Approx(-12.5).epsilon(1e-14));

    const auto unit = params_to_coeffs({1.0, 0.0, 1.0 / std::sqrt(2.0)});
    CHECK(unit.a == doctest::Approx(0.0));
    CHECK(unit.b == doctest::Approx(0.0));
    CHECK(unit.c == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("coeffs_to_params inverts the substitution") {
    const auto p = coeffs_to_params({-312.5, 125.0, -12.5});
    CHECK(p.amplitude == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.peak_position == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(p.width == doctest::Approx(0.2).epsilon(1e-15));

    const auto std_normal = coeffs_to_params({0.0, 0.0, -0.5});
    CHECK(std_normal.amplitude == 1.0);
    CHECK(std_normal.peak_position == 0.0);
    CHECK(std_normal.width == doctest::Approx(1.0).epsilon(1e-15));

    CHECK_THROWS_AS(coeffs_to_params({0.0, 0.0, 1.0}), NonNegativeCurvature);
    CHECK_THROWS_AS(coeffs_to_params({0.0, 0.0, 0.0}), NonNegativeCurvature);
}

TEST_CASE("eval_gaussian at peak, one sigma, and symmetric offsets") {
    const GaussianParams p{1.0, 5.0, 0.2};
    CHECK(eval_gaussian(p, 5.0) == 1.0);
    CHECK(eval_gaussian(p, 5.2) == doctest::Approx(0.6065306597126334).epsilon(1e-14));
    for (double d : {0.01, 0.1, 0.37, 1.5}) {
        CHECK(eval_gaussian(p, 5.0 + d) == doctest::Approx(eval_gaussian(p, 5.0 - d)).epsilon(1e-14));
    }
}

TEST_CASE("round trip and log consistency over random parameters") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> log_amp(-5.0, 5.0);
    std::uniform_real_distribution<double> pos(-20.0, 20.0);
    std::uniform_real_distribution<double> log_width(-3.0, 1.5);
    std::uniform_real_distribution<double> offset(-3.0, 3.0);
    for (int trial = 0; trial < 500; ++trial) {
        const GaussianParams p{std::exp(log_amp(rng)), pos(rng), std::exp(log_width(rng))};
        const auto back = coeffs_to_params(params_to_coeffs(p));
        // ln A comes back from a - b^2/(4c), so its absolute error scales with |a|.
        const double log_scale = std::max(1.0, std::abs(params_to_coeffs(p).a));
        CHECK(std::abs(back.amplitude - p.amplitude) <= 1e-14 * log_scale * p.amplitude);
        CHECK(std::abs(back.peak_position - p.peak_position) <=
              1e-12 * std::max(1.0, std::abs(p.peak_position)));
        CHECK(std::abs(back.width - p.width) <= 1e-12 * p.width);

        // Offsets within a few widths so a + b x + c x^2 stays well-scaled.
        const double x = p.peak_position + offset(rng) * p.width;
        const auto q = params_to_coeffs(p);
        const double tol = 1e-10 * std::max(1.0, std::abs(q.a));
        CHECK(std::abs(std::log(eval_gaussian(p, x)) - eval_log_quadratic(q, x)) <= tol);
    }
}

TEST_CASE("eval_gaussian is maximal at the peak on a fine grid") {
    const GaussianParams p{2.5, 1.234, 0.3};
    double best_x = 0.0;
    double best = -1.0;
    for (int i = 0; i <= 40000; ++i) {
        const double x = i * 1e-4 - 1.0;
        const double y = eval_gaussian(p, x);
        CHECK(y <= p.amplitude);
        if (y > best) {
            best = y;
            best_x = x;
        }
    }
    CHECK(std::abs(best_x - p.peak_position) <= 0.5e-4 + 1e-12);
}

TEST_CASE("SampleSet rejects duplicate, decreasing, and non-finite x") {
    CHECK_NOTHROW(SampleSet({{0.0, 1.0}, {1.0, -0.5}, {2.0, 0.0}}));
    CHECK_THROWS_AS(SampleSet({{0.0, 1.0}, {0.0, 2.0}}), std::invalid_argument);
    CHECK_THROWS_AS(SampleSet({{1.0, 1.0}, {0.0, 2.0}}), std::invalid_argument);
    CHECK_THROWS_AS(SampleSet({{0.0, NAN}}), std::invalid_argument);
    CHECK_THROWS_AS(validate(GaussianParams{0.0, 1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(validate(GaussianParams{1.0, 1.0, -1.0}), std::invalid_argument);
}

TEST_CASE("unshift_coeffs maps a centred, scaled quadratic back to x") {
    const PolyCoeffs centered{0.3, -1.2, -0.7};
    const double shift = 7.5;
    const double scale = 0.4;
    const auto q = unshift_coeffs(centered, shift, scale);
    for (double x : {6.0, 7.5, 8.1, 9.9}) {
        const double u = (x - shift) / scale;
        CHECK(eval_log_quadratic(q, x) ==
              doctest::Approx(eval_log_quadratic(centered, u)).epsilon(1e-12));
    }
}
