#include "gaussfit/benchmark.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "gaussfit/errors.hpp"
#include "gaussfit/io.hpp"

namespace gaussfit {

namespace {

FitResult run_method(BenchMethod method, const SampleSet& s, const NoiseModel& noise,
                     double confidence_factor) {
    switch (method) {
    case BenchMethod::Caruana: return fit_caruana(s);
    case BenchMethod::Guo: return fit_guo(s);
    case BenchMethod::ProbabilityExact:
        return fit_probability(s, noise, WeightMode::Exact, confidence_factor);
    case BenchMethod::ProbabilityApprox:
        return fit_probability(s, noise, WeightMode::CdfApprox, confidence_factor);
    }
    throw ConfigError("unknown benchmark method");
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

std::size_t parse_count(const std::string& text, std::size_t line) {
    const auto value = parse_double(text);
    if (!value || *value < 0.0 || std::floor(*value) != *value) {
        throw ParseError(line, "expected a non-negative integer, got '" + text + "'");
    }
    return static_cast<std::size_t>(*value);
}

} // namespace

std::string_view to_string(BenchMethod method) {
    switch (method) {
    case BenchMethod::Caruana: return "caruana";
    case BenchMethod::Guo: return "guo";
    case BenchMethod::ProbabilityExact: return "prob-exact";
    case BenchMethod::ProbabilityApprox: return "prob-approx";
    }
    return "?";
}

std::optional<BenchMethod> parse_bench_method(std::string_view text) {
    for (auto m : {BenchMethod::Caruana, BenchMethod::Guo, BenchMethod::ProbabilityExact,
                   BenchMethod::ProbabilityApprox}) {
        if (text == to_string(m)) return m;
    }
    return std::nullopt;
}

std::string_view to_string(Parameter parameter) {
    switch (parameter) {
    case Parameter::Amplitude: return "A";
    case Parameter::PeakPosition: return "x_p";
    case Parameter::Width: return "sigma";
    }
    return "?";
}

double parameter_value(const GaussianParams& p, Parameter parameter) {
    switch (parameter) {
    case Parameter::Amplitude: return p.amplitude;
    case Parameter::PeakPosition: return p.peak_position;
    case Parameter::Width: return p.width;
    }
    return 0.0;
}

std::vector<double> reference_snr_levels() { return {14.0, 16.5, 20.0, 26.0, 32.0, 40.0, 46.0}; }

void validate(const ExperimentConfig& cfg) {
    if (cfg.methods.empty()) throw ConfigError("at least one method is required");
    if (cfg.snr_levels_db.empty()) throw ConfigError("at least one SNR level is required");
    if (cfg.trials < 1) throw ConfigError("trials must be >= 1");
    for (double snr : cfg.snr_levels_db) {
        if (!std::isfinite(snr)) throw ConfigError("SNR levels must be finite");
    }
    if (!(cfg.selection_threshold_factor >= 0.0)) {
        throw ConfigError("selection threshold factor must be non-negative");
    }
    if (!(cfg.confidence_factor > 0.0)) throw ConfigError("confidence factor must be positive");
    try {
        validate(cfg.signal);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

const ErrorStatistic& MonteCarloReport::at(std::size_t method_index, std::size_t snr_index,
                                           Parameter parameter) const {
    const auto p = static_cast<std::size_t>(parameter);
    return table.at((method_index * snr_levels_db.size() + snr_index) * kParameters.size() + p);
}

const ErrorStatistic& MonteCarloReport::at(BenchMethod method, double snr_db,
                                           Parameter parameter) const {
    const auto m = std::find(methods.begin(), methods.end(), method);
    const auto s = std::find(snr_levels_db.begin(), snr_levels_db.end(), snr_db);
    if (m == methods.end() || s == snr_levels_db.end()) {
        throw std::out_of_range("no such (method, snr) in report");
    }
    return at(static_cast<std::size_t>(m - methods.begin()),
              static_cast<std::size_t>(s - snr_levels_db.begin()), parameter);
}

MonteCarloReport run_monte_carlo(const ExperimentConfig& cfg) {
    validate(cfg);

    MonteCarloReport report;
    report.truth = cfg.signal.params;
    report.methods = cfg.methods;
    std::sort(report.methods.begin(), report.methods.end());
    report.methods.erase(std::unique(report.methods.begin(), report.methods.end()),
                         report.methods.end());
    report.snr_levels_db = cfg.snr_levels_db;
    std::sort(report.snr_levels_db.begin(), report.snr_levels_db.end());
    report.snr_levels_db.erase(
        std::unique(report.snr_levels_db.begin(), report.snr_levels_db.end()),
        report.snr_levels_db.end());
    report.trials = cfg.trials;

    const std::size_t n_methods = report.methods.size();
    const std::size_t n_snr = report.snr_levels_db.size();
    const SampleSet clean = synthesize(cfg.signal);

    // Slot per (snr, trial, method); filled independently, reduced in order.
    std::vector<std::optional<GaussianParams>> slots(n_snr * cfg.trials * n_methods);
    auto slot = [&](std::size_t snr, std::size_t trial, std::size_t method) -> auto& {
        return slots[(snr * cfg.trials + trial) * n_methods + method];
    };

    auto run_trial = [&](std::size_t snr_index, std::size_t trial) {
        const NoiseModel noise{
            snr_db_to_sigma(report.snr_levels_db[snr_index], cfg.signal.params.amplitude)};
        const SampleSet noisy =
            add_white_noise(clean, noise, derive_seed(cfg.master_seed, snr_index, trial));
        SampleSet selected;
        try {
            selected = select_samples(noisy, cfg.selection_threshold_factor * noise.sigma_n);
        } catch (const FitError&) {
            return;
        }
        for (std::size_t m = 0; m < n_methods; ++m) {
            try {
                slot(snr_index, trial, m) =
                    run_method(report.methods[m], selected, noise, cfg.confidence_factor).params;
            } catch (const FitError&) {
            }
        }
    };

    const std::size_t total = n_snr * cfg.trials;
    const unsigned workers =
        std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(total)));
    if (workers == 1) {
        for (std::size_t job = 0; job < total; ++job) run_trial(job / cfg.trials, job % cfg.trials);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t job = w; job < total; job += workers) {
                    run_trial(job / cfg.trials, job % cfg.trials);
                }
            });
        }
    }

    report.table.resize(n_methods * n_snr * kParameters.size());
    for (std::size_t m = 0; m < n_methods; ++m) {
        for (std::size_t s = 0; s < n_snr; ++s) {
            for (Parameter parameter : kParameters) {
                const double truth = parameter_value(report.truth, parameter);
                std::size_t n_ok = 0;
                double sum = 0.0;
                for (std::size_t t = 0; t < cfg.trials; ++t) {
                    if (const auto& est = slot(s, t, m)) {
                        sum += parameter_value(*est, parameter) - truth;
                        ++n_ok;
                    }
                }
                ErrorStatistic stat;
                stat.trials = cfg.trials;
                stat.n_failed = cfg.trials - n_ok;
                if (n_ok > 0) stat.mean_error = sum / static_cast<double>(n_ok);
                if (n_ok > 1) {
                    double ss = 0.0;
                    for (std::size_t t = 0; t < cfg.trials; ++t) {
                        if (const auto& est = slot(s, t, m)) {
                            const double d = parameter_value(*est, parameter) - truth -
                                             stat.mean_error;
                            ss += d * d;
                        }
                    }
                    stat.std_dev = std::sqrt(ss / static_cast<double>(n_ok - 1));
                }
                const auto p = static_cast<std::size_t>(parameter);
                report.table[(m * n_snr + s) * kParameters.size() + p] = stat;
            }
        }
    }

    if (cfg.keep_trials) {
        report.trials_raw.reserve(slots.size());
        for (std::size_t m = 0; m < n_methods; ++m) {
            for (std::size_t s = 0; s < n_snr; ++s) {
                for (std::size_t t = 0; t < cfg.trials; ++t) {
                    const auto& est = slot(s, t, m);
                    report.trials_raw.push_back({report.methods[m], report.snr_levels_db[s], t,
                                                 est.has_value(),
                                                 est.value_or(GaussianParams{0.0, 0.0, 0.0})});
                }
            }
        }
    }
    return report;
}

std::vector<SummaryRow> summarize(const MonteCarloReport& report) {
    std::vector<SummaryRow> rows;
    rows.reserve(report.table.size());
    for (std::size_t m = 0; m < report.methods.size(); ++m) {
        for (std::size_t s = 0; s < report.snr_levels_db.size(); ++s) {
            for (Parameter parameter : kParameters) {
                const auto& stat = report.at(m, s, parameter);
                rows.push_back({std::string(to_string(report.methods[m])),
                                report.snr_levels_db[s], std::string(to_string(parameter)),
                                stat.mean_error, stat.std_dev, stat.n_failed, stat.trials});
            }
        }
    }
    return rows;
}

std::string format_summary_table(std::span<const SummaryRow> rows) {
    std::string out;
    char line[160];
    std::snprintf(line, sizeof line, "%-12s %8s %-6s %14s %14s %8s %8s\n", "method", "snr_db",
                  "param", "mean_error", "std_dev", "failed", "trials");
    out += line;
    for (const auto& r : rows) {
        std::snprintf(line, sizeof line, "%-12s %8.2f %-6s %14.6e %14.6e %8zu %8zu\n",
                      r.method.c_str(), r.snr_db, r.parameter.c_str(), r.mean_error, r.std_dev,
                      r.n_failed, r.trials);
        out += line;
    }
    return out;
}

void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows) {
    out << "method,snr_db,parameter,mean_error,std_dev,n_failed,trials\n";
    for (const auto& r : rows) {
        out << r.method << ',' << format_double(r.snr_db) << ',' << r.parameter << ','
            << format_double(r.mean_error) << ',' << format_double(r.std_dev) << ','
            << r.n_failed << ',' << r.trials << '\n';
    }
}

std::vector<SummaryRow> read_summary_csv(std::istream& in) {
    std::vector<SummaryRow> rows;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!header_seen) {
            if (line != "method,snr_db,parameter,mean_error,std_dev,n_failed,trials") {
                throw ParseError(line_no, "unexpected summary header");
            }
            header_seen = true;
            continue;
        }
        const auto fields = split_csv_line(line);
        if (fields.size() != 7) throw ParseError(line_no, "expected 7 fields");
        SummaryRow row;
        row.method = fields[0];
        row.parameter = fields[2];
        const auto snr = parse_double(fields[1]);
        const auto mean = parse_double(fields[3]);
        const auto sd = parse_double(fields[4]);
        if (!snr || !mean || !sd) throw ParseError(line_no, "malformed number");
        row.snr_db = *snr;
        row.mean_error = *mean;
        row.std_dev = *sd;
        row.n_failed = parse_count(fields[5], line_no);
        row.trials = parse_count(fields[6], line_no);
        rows.push_back(std::move(row));
    }
    if (!header_seen) throw ParseError(line_no, "missing summary header");
    return rows;
}

void write_trials_csv(std::ostream& out, const MonteCarloReport& report) {
    out << "method,snr_db,trial,ok,A,x_p,sigma\n";
    for (const auto& t : report.trials_raw) {
        out << to_string(t.method) << ',' << format_double(t.snr_db) << ',' << t.trial << ','
            << (t.ok ? 1 : 0) << ',';
        if (t.ok) {
            out << format_double(t.estimate.amplitude) << ','
                << format_double(t.estimate.peak_position) << ','
                << format_double(t.estimate.width);
        } else {
            out << ",,";
        }
        out << '\n';
    }
}

std::vector<ConvergenceReport> run_convergence_study(const ConvergenceScenario& scenario,
                                                     std::span<const Seed> seeds) {
    validate(scenario.signal);
    validate(scenario.noise);
    const SampleSet clean = synthesize(scenario.signal);
    const GaussianParams& truth = scenario.signal.params;

    std::vector<ConvergenceReport> reports;
    reports.reserve(seeds.size());
    for (Seed seed : seeds) {
        ConvergenceReport report;
        report.seed = seed;
        try {
            SampleSet data = scenario.noiseless ? clean
                                                : add_white_noise(clean, scenario.noise, seed);
            if (scenario.selection_threshold_factor) {
                data = select_samples(data,
                                      *scenario.selection_threshold_factor * scenario.noise.sigma_n);
            }
            const IterativeFitResult fit = fit_iterative(data, scenario.iteration);
            for (const auto& p : fit.trace) {
                report.deviations.push_back({std::abs(p.peak_position - truth.peak_position),
                                             std::abs(p.width - truth.width),
                                             std::abs(p.amplitude - truth.amplitude)});
            }
            report.iterations = fit.iterations;
            report.converged = fit.converged;
            report.stop_reason = fit.stop_reason;
            report.failure = fit.failure;
        } catch (const FitError& e) {
            report.stop_reason = StopReason::Diverged;
            report.failure = e.what();
        }
        reports.push_back(std::move(report));
    }
    return reports;
}

void write_convergence_csv(std::ostream& out, const ConvergenceReport& report) {
    out << "iteration,dev_xp,dev_sigma,dev_amplitude\n";
    for (std::size_t k = 0; k < report.deviations.size(); ++k) {
        const auto& d = report.deviations[k];
        out << (k + 1) << ',' << format_double(d[0]) << ',' << format_double(d[1]) << ','
            << format_double(d[2]) << '\n';
    }
}

} // namespace gaussfit
