#include "gaussfit/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gaussfit/benchmark.hpp"
#include "gaussfit/errors.hpp"
#include "gaussfit/fitters.hpp"
#include "gaussfit/io.hpp"
#include "gaussfit/simulation.hpp"

namespace gaussfit::cli {

namespace {

/// Carries an exit code out of a subcommand along with its diagnostic.
struct Failure {
    int code;
    std::string message;
};

/// Writes to `path` when given, else to `fallback`.
void emit(const std::string& path, std::ostream& fallback,
          const std::function<void(std::ostream&)>& writer) {
    if (path.empty()) {
        writer(fallback);
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw Failure{kUsageOrParseError, "cannot open '" + path + "' for writing"};
    writer(file);
    if (!file) throw Failure{kUsageOrParseError, "failed writing '" + path + "'"};
}

struct SignalFlags {
    double amplitude;
    double peak;
    double width;
    double from;
    double to;
    double rate = 10.0;

    void add_to(CLI::App& cmd) {
        cmd.add_option("--A", amplitude, "Peak amplitude")->capture_default_str();
        cmd.add_option("--xp", peak, "Peak position")->capture_default_str();
        cmd.add_option("--sigma", width, "Gaussian width")->capture_default_str();
        cmd.add_option("--from", from, "First grid x")->capture_default_str();
        cmd.add_option("--to", to, "Last grid x")->capture_default_str();
        cmd.add_option("--rate", rate, "Samples per x unit")->capture_default_str();
    }

    SignalSpec spec() const {
        SignalSpec s{{amplitude, peak, width}, from, to, rate};
        try {
            validate(s);
        } catch (const std::invalid_argument& e) {
            throw Failure{kUsageOrParseError, e.what()};
        }
        return s;
    }
};

struct FitFlags {
    std::string input;
    std::string method = "prob";
    std::string mode = "approx";
    std::optional<double> sigma_n;
    bool estimate_noise = false;
    bool iterate = false;
    std::size_t max_iter = 100;
    double tol = 1e-6;
    std::optional<double> threshold_factor;
    double confidence_factor = 2.0;
    bool trace = false;
    std::string out;
};

struct SimulateFlags {
    SignalFlags signal{1.0, 5.0, 0.2, 0.0, 10.0};
    std::optional<double> snr;
    std::uint64_t seed = 0;
    std::string out;
};

struct BenchmarkFlags {
    SignalFlags signal{1.0, 5.0, 0.2, 0.0, 10.0};
    std::size_t trials = 1000;
    std::uint64_t seed = 1;
    std::vector<double> snr = reference_snr_levels();
    std::vector<std::string> methods{"caruana", "guo", "prob-exact", "prob-approx"};
    double threshold_factor = 2.0;
    double confidence_factor = 2.0;
    unsigned threads = 1;
    std::string out;
    std::string raw;
    bool csv = false;
};

struct ConvergenceFlags {
    SignalFlags signal{1.0, 9.2, 0.75, 0.0, 10.0};
    double sigma_n = 0.1;
    std::optional<double> snr;
    std::vector<std::uint64_t> seeds{1};
    std::string mode = "approx";
    std::size_t max_iter = 100;
    double tol = 1e-6;
    double threshold_factor = 0.0;
    bool all_samples = false;
    double confidence_factor = 2.0;
    bool noiseless = false;
    std::string out = "convergence";
};

SampleSet load_spectrum(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw Failure{kUsageOrParseError, "cannot open '" + path + "'"};
    try {
        return read_spectrum(file);
    } catch (const ParseError& e) {
        throw Failure{kUsageOrParseError, path + ": " + e.what()};
    }
}

void run_fit(const FitFlags& f, std::ostream& out) {
    const SampleSet data = load_spectrum(f.input);
    const WeightMode mode = *parse_weight_mode(f.mode);

    std::optional<double> sigma_n = f.sigma_n;
    if (!sigma_n && f.estimate_noise) {
        try {
            sigma_n = estimate_noise_sigma(data);
        } catch (const FitError& e) {
            throw Failure{kMissingNoiseLevel, std::string("noise estimation failed: ") + e.what()};
        }
        if (!(*sigma_n > 0.0)) {
            throw Failure{kMissingNoiseLevel, "estimated noise level is zero; pass --sigma-n"};
        }
    }
    if (sigma_n && !(*sigma_n > 0.0)) {
        throw Failure{kUsageOrParseError, "--sigma-n must be positive"};
    }

    const bool needs_noise = f.method == "prob" && mode != WeightMode::Linear;
    if (needs_noise && !sigma_n) {
        throw Failure{kMissingNoiseLevel,
                      "method prob needs the noise level: pass --sigma-n or --estimate-noise"};
    }
    if (f.threshold_factor && !sigma_n) {
        throw Failure{kMissingNoiseLevel,
                      "--threshold-factor needs the noise level: pass --sigma-n or --estimate-noise"};
    }
    if (f.iterate && f.method == "caruana") {
        throw Failure{kUsageOrParseError, "--iterate applies to guo and prob only"};
    }

    SampleSet selected = data;
    if (f.threshold_factor) selected = select_samples(data, *f.threshold_factor * *sigma_n);

    const NoiseModel noise{sigma_n.value_or(1.0)};
    FitReportDocument doc;
    if (f.iterate) {
        IterationConfig cfg;
        cfg.max_iterations = f.max_iter;
        cfg.tolerance = f.tol;
        cfg.noise = noise;
        cfg.mode = f.method == "guo" ? WeightMode::Linear : mode;
        cfg.confidence_factor = f.confidence_factor;
        try {
            validate(cfg);
        } catch (const std::invalid_argument& e) {
            throw Failure{kUsageOrParseError, e.what()};
        }
        doc = make_report(fit_iterative(selected, cfg), f.trace);
    } else if (f.method == "caruana") {
        doc = make_report(fit_caruana(selected));
    } else if (f.method == "guo") {
        doc = make_report(fit_guo(selected));
    } else {
        doc = make_report(fit_probability(selected, noise, mode, f.confidence_factor));
    }
    doc.method = f.method;
    emit(f.out, out, [&](std::ostream& os) { write_fit_report(os, doc); });
}

void run_simulate(const SimulateFlags& f, std::ostream& out) {
    const SignalSpec spec = f.signal.spec();
    SampleSet data = synthesize(spec);
    if (f.snr) {
        const NoiseModel noise{snr_db_to_sigma(*f.snr, spec.params.amplitude)};
        data = add_white_noise(data, noise, Seed{f.seed});
    }
    emit(f.out, out, [&](std::ostream& os) { write_spectrum(os, data); });
}

void run_benchmark(const BenchmarkFlags& f, std::ostream& out) {
    ExperimentConfig cfg;
    cfg.signal = f.signal.spec();
    cfg.trials = f.trials;
    cfg.master_seed = Seed{f.seed};
    cfg.snr_levels_db = f.snr;
    cfg.methods.clear();
    for (const auto& name : f.methods) cfg.methods.push_back(*parse_bench_method(name));
    cfg.selection_threshold_factor = f.threshold_factor;
    cfg.confidence_factor = f.confidence_factor;
    cfg.threads = f.threads;
    cfg.keep_trials = !f.raw.empty();

    MonteCarloReport report;
    try {
        report = run_monte_carlo(cfg);
    } catch (const ConfigError& e) {
        throw Failure{kUsageOrParseError, e.what()};
    }
    const auto rows = summarize(report);
    if (f.csv) {
        write_summary_csv(out, rows);
    } else {
        out << format_summary_table(rows);
    }
    if (!f.out.empty()) emit(f.out, out, [&](std::ostream& os) { write_summary_csv(os, rows); });
    if (!f.raw.empty()) emit(f.raw, out, [&](std::ostream& os) { write_trials_csv(os, report); });
}

void run_convergence(const ConvergenceFlags& f, std::ostream& out) {
    ConvergenceScenario scenario;
    scenario.signal = f.signal.spec();
    const double sigma_n = f.snr ? snr_db_to_sigma(*f.snr, f.signal.amplitude) : f.sigma_n;
    if (!(sigma_n > 0.0)) throw Failure{kUsageOrParseError, "noise level must be positive"};
    scenario.noise = NoiseModel{sigma_n};
    scenario.iteration.noise = scenario.noise;
    scenario.iteration.mode = *parse_weight_mode(f.mode);
    scenario.iteration.max_iterations = f.max_iter;
    scenario.iteration.tolerance = f.tol;
    scenario.iteration.confidence_factor = f.confidence_factor;
    if (f.all_samples) {
        scenario.selection_threshold_factor.reset();
    } else {
        scenario.selection_threshold_factor = f.threshold_factor;
    }
    scenario.noiseless = f.noiseless;
    try {
        validate(scenario.iteration);
    } catch (const std::invalid_argument& e) {
        throw Failure{kUsageOrParseError, e.what()};
    }

    std::vector<Seed> seeds;
    for (auto s : f.seeds) seeds.push_back(Seed{s});
    const auto reports = run_convergence_study(scenario, seeds);
    for (const auto& r : reports) {
        const std::string path = f.out + "_seed" + std::to_string(r.seed.value) + ".csv";
        emit(path, out, [&](std::ostream& os) { write_convergence_csv(os, r); });
        out << "seed=" << r.seed.value << " iterations=" << r.iterations
            << " converged=" << (r.converged ? "true" : "false")
            << " stop=" << to_string(r.stop_reason);
        if (!r.deviations.empty()) {
            const auto& d = r.deviations.back();
            out << " dev_xp=" << format_double(d[0]) << " dev_sigma=" << format_double(d[1])
                << " dev_amplitude=" << format_double(d[2]);
        }
        if (!r.failure.empty()) out << " failure=\"" << r.failure << '"';
        out << " file=" << path << '\n';
    }
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Gaussian peak fitting by weighted log-domain least squares"};
    app.require_subcommand(1);
    app.set_config("--config");

    FitFlags fit;
    auto* fit_cmd = app.add_subcommand("fit", "Fit a Gaussian to an x,y spectrum file");
    fit_cmd->add_option("input", fit.input, "Spectrum file (x,y per line)")->required();
    fit_cmd->add_option("--method", fit.method, "caruana | guo | prob")
        ->check(CLI::IsMember({"caruana", "guo", "prob"}))
        ->capture_default_str();
    fit_cmd->add_option("--mode", fit.mode, "Probability weights: exact | approx | linear")
        ->check(CLI::IsMember({"exact", "approx", "linear"}))
        ->capture_default_str();
    fit_cmd->add_option("--sigma-n", fit.sigma_n, "Noise standard deviation");
    fit_cmd->add_flag("--estimate-noise", fit.estimate_noise,
                      "Estimate sigma_n from the outer 10% of samples on each side");
    fit_cmd->add_flag("--iterate", fit.iterate, "Re-weight from the previous fit until stable");
    fit_cmd->add_option("--max-iter", fit.max_iter, "Iteration cap")->capture_default_str();
    fit_cmd->add_option("--tol", fit.tol, "Convergence tolerance")->capture_default_str();
    fit_cmd->add_option("--threshold-factor", fit.threshold_factor,
                        "Select samples around the peak above factor * sigma_n");
    fit_cmd->add_option("--confidence-factor", fit.confidence_factor,
                        "M = factor * sigma_n / peak")
        ->capture_default_str();
    fit_cmd->add_flag("--trace", fit.trace, "Include per-iteration parameters");
    fit_cmd->add_option("--out", fit.out, "Output path (default stdout)");

    SimulateFlags sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Write a sampled, optionally noisy Gaussian");
    sim.signal.add_to(*sim_cmd);
    sim_cmd->add_option("--snr", sim.snr, "Add white noise at this SNR (dB)");
    sim_cmd->add_option("--seed", sim.seed, "Noise seed")->capture_default_str();
    sim_cmd->add_option("--out", sim.out, "Output path (default stdout)");

    BenchmarkFlags bench;
    auto* bench_cmd = app.add_subcommand("benchmark", "Monte Carlo comparison across SNR levels");
    bench.signal.add_to(*bench_cmd);
    bench_cmd->add_option("--trials", bench.trials, "Trials per SNR level")->capture_default_str();
    bench_cmd->add_option("--seed", bench.seed, "Master seed")->capture_default_str();
    bench_cmd->add_option("--snr", bench.snr, "SNR levels (dB)")
        ->delimiter(',')
        ->capture_default_str();
    bench_cmd->add_option("--methods", bench.methods, "Methods to compare")
        ->delimiter(',')
        ->check(CLI::IsMember({"caruana", "guo", "prob-exact", "prob-approx"}))
        ->capture_default_str();
    bench_cmd->add_option("--threshold-factor", bench.threshold_factor,
                          "Selection threshold in units of sigma_n")
        ->capture_default_str();
    bench_cmd->add_option("--confidence-factor", bench.confidence_factor,
                          "M = factor * sigma_n / peak")
        ->capture_default_str();
    bench_cmd->add_option("--threads", bench.threads, "Worker threads")->capture_default_str();
    bench_cmd->add_option("--out", bench.out, "Summary CSV path");
    bench_cmd->add_option("--raw", bench.raw, "Per-trial CSV path");
    bench_cmd->add_flag("--csv", bench.csv, "Print the summary as CSV instead of a table");

    ConvergenceFlags conv;
    auto* conv_cmd =
        app.add_subcommand("convergence", "Iterative fits of a truncated spectrum, per seed");
    conv.signal.add_to(*conv_cmd);
    conv_cmd->add_option("--sigma-n", conv.sigma_n, "Noise standard deviation")
        ->capture_default_str();
    conv_cmd->add_option("--snr", conv.snr, "Noise level as SNR (dB); overrides --sigma-n");
    conv_cmd->add_option("--seeds", conv.seeds, "Noise seeds")
        ->delimiter(',')
        ->capture_default_str();
    conv_cmd->add_option("--mode", conv.mode, "exact | approx | linear")
        ->check(CLI::IsMember({"exact", "approx", "linear"}))
        ->capture_default_str();
    conv_cmd->add_option("--max-iter", conv.max_iter, "Iteration cap")->capture_default_str();
    conv_cmd->add_option("--tol", conv.tol, "Convergence tolerance")->capture_default_str();
    conv_cmd->add_option("--threshold-factor", conv.threshold_factor,
                         "Select samples above factor * sigma_n before fitting")
        ->capture_default_str();
    conv_cmd->add_flag("--all-samples", conv.all_samples,
                       "Fit every positive sample instead of the selected window");
    conv_cmd->add_option("--confidence-factor", conv.confidence_factor,
                         "M = factor * sigma_n / peak")
        ->capture_default_str();
    conv_cmd->add_flag("--noiseless", conv.noiseless, "Skip noise synthesis");
    conv_cmd->add_option("--out", conv.out, "Output prefix; files are <prefix>_seed<N>.csv")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsageOrParseError;
    }

    try {
        if (*fit_cmd) run_fit(fit, out);
        if (*sim_cmd) run_simulate(sim, out);
        if (*bench_cmd) run_benchmark(bench, out);
        if (*conv_cmd) run_convergence(conv, out);
    } catch (const Failure& f) {
        err << "gaussfit: " << f.message << '\n';
        return f.code;
    } catch (const FitError& e) {
        err << "gaussfit: fit failed: " << e.what() << '\n';
        return kFitError;
    } catch (const std::invalid_argument& e) {
        err << "gaussfit: " << e.what() << '\n';
        return kUsageOrParseError;
    }
    return kOk;
}

} // namespace gaussfit::cli
