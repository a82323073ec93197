#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gaussfit/fitters.hpp"
#include "gaussfit/simulation.hpp"

namespace gaussfit {

enum class BenchMethod { Caruana, Guo, ProbabilityExact, ProbabilityApprox };
enum class Parameter { Amplitude, PeakPosition, Width };

inline constexpr std::array<Parameter, 3> kParameters{
    Parameter::Amplitude, Parameter::PeakPosition, Parameter::Width};

std::string_view to_string(BenchMethod method);
std::optional<BenchMethod> parse_bench_method(std::string_view text);
std::string_view to_string(Parameter parameter);

double parameter_value(const GaussianParams& p, Parameter parameter);

/// SNR levels of the reference sweep, in dB.
std::vector<double> reference_snr_levels();

struct ExperimentConfig {
    /// Reference scenario: A = 1, x_p = 5, sigma = 0.2 on [0, 10] at 10 samples/unit.
    SignalSpec signal{{1.0, 5.0, 0.2}, 0.0, 10.0, 10.0};
    std::vector<double> snr_levels_db = reference_snr_levels();
    std::size_t trials = 1000;
    std::vector<BenchMethod> methods{BenchMethod::Caruana, BenchMethod::Guo,
                                     BenchMethod::ProbabilityExact,
                                     BenchMethod::ProbabilityApprox};
    Seed master_seed{1};
    /// Selection threshold is this factor times sigma_n.
    double selection_threshold_factor = 2.0;
    /// M = confidence_factor * sigma_n / y_p for the probability methods.
    double confidence_factor = 2.0;
    unsigned threads = 1;
    /// Keep every per-trial estimate in MonteCarloReport::trials_raw.
    bool keep_trials = false;
};

/// Throws ConfigError.
void validate(const ExperimentConfig& cfg);

struct ErrorStatistic {
    double mean_error = 0.0;  // accuracy: mean of (estimate - truth)
    double std_dev = 0.0;     // precision: sample std, n - 1 denominator
    std::size_t n_failed = 0;
    std::size_t trials = 0;
};

struct TrialRecord {
    BenchMethod method;
    double snr_db;
    std::size_t trial;
    bool ok;
    GaussianParams estimate;
};

struct MonteCarloReport {
    GaussianParams truth;
    std::vector<BenchMethod> methods;     // sorted, unique
    std::vector<double> snr_levels_db;    // ascending
    std::size_t trials = 0;
    /// [method][snr][parameter], flattened.
    std::vector<ErrorStatistic> table;
    std::vector<TrialRecord> trials_raw;

    const ErrorStatistic& at(BenchMethod method, double snr_db, Parameter parameter) const;
    const ErrorStatistic& at(std::size_t method_index, std::size_t snr_index,
                             Parameter parameter) const;
};

/// Paired Monte Carlo: every method sees the same noise realization per trial.
/// Deterministic for a given config regardless of `threads`.
MonteCarloReport run_monte_carlo(const ExperimentConfig& cfg);

struct SummaryRow {
    std::string method;
    double snr_db = 0.0;
    std::string parameter;
    double mean_error = 0.0;
    double std_dev = 0.0;
    std::size_t n_failed = 0;
    std::size_t trials = 0;

    bool operator==(const SummaryRow&) const = default;
};

/// One row per (method, snr, parameter), ordered method, snr ascending, then A, x_p, sigma.
std::vector<SummaryRow> summarize(const MonteCarloReport& report);
std::string format_summary_table(std::span<const SummaryRow> rows);

void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows);
/// Throws ParseError.
std::vector<SummaryRow> read_summary_csv(std::istream& in);
void write_trials_csv(std::ostream& out, const MonteCarloReport& report);

/// Truncated-spectrum study: peak near the right edge of the window.
struct ConvergenceScenario {
    SignalSpec signal{{1.0, 9.2, 0.75}, 0.0, 10.0, 10.0};
    NoiseModel noise{0.1};
    IterationConfig iteration = [] {
        IterationConfig c;
        c.noise = NoiseModel{0.1};
        return c;
    }();
    /// When set, select samples at factor * sigma_n before iterating; otherwise
    /// every sample is passed to the fitter. The default 0 keeps the run of
    /// non-negative samples around the peak, long tail included.
    std::optional<double> selection_threshold_factor = 0.0;
    bool noiseless = false;
};

struct ConvergenceReport {
    Seed seed;
    /// Per iteration: |dx_p|, |dsigma|, |dA| against the true parameters.
    std::vector<std::array<double, 3>> deviations;
    std::size_t iterations = 0;
    bool converged = false;
    StopReason stop_reason = StopReason::MaxIterations;
    std::string failure;
};

std::vector<ConvergenceReport> run_convergence_study(const ConvergenceScenario& scenario,
                                                     std::span<const Seed> seeds);

/// Columns: iteration, dev_xp, dev_sigma, dev_amplitude (iteration is 1-based).
void write_convergence_csv(std::ostream& out, const ConvergenceReport& report);

} // namespace gaussfit
