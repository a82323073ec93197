#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <utility>
#include <vector>

#include "gaussfit/benchmark.hpp"
#include "gaussfit/errors.hpp"
#include "gaussfit/fitters.hpp"
#include "gaussfit/simulation.hpp"
#include "gaussfit/weighting.hpp"

namespace py = pybind11;
using namespace gaussfit;

namespace {

using Columns = std::pair<std::vector<double>, std::vector<double>>;

SampleSet to_samples(const std::vector<double>& x, const std::vector<double>& y) {
    return SampleSet::from_columns(x, y);
}

Columns to_columns(const SampleSet& s) { return {s.xs(), s.ys()}; }

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Gaussian peak fitting by weighted log-domain least squares";

    auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    auto fit_error = py::register_exception<FitError>(m, "FitError", error.ptr());
    py::register_exception<NonNegativeCurvature>(m, "NonNegativeCurvature", fit_error.ptr());
    py::register_exception<InsufficientSamples>(m, "InsufficientSamples", fit_error.ptr());
    py::register_exception<SingularSystem>(m, "SingularSystem", fit_error.ptr());
    py::register_exception<EmptySelection>(m, "EmptySelection", fit_error.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", error.ptr());

    py::enum_<WeightMode>(m, "WeightMode")
        .value("Exact", WeightMode::Exact)
        .value("CdfApprox", WeightMode::CdfApprox)
        .value("Linear", WeightMode::Linear);
    py::enum_<Method>(m, "Method")
        .value("Caruana", Method::Caruana)
        .value("Guo", Method::Guo)
        .value("Probability", Method::Probability);
    py::enum_<StopReason>(m, "StopReason")
        .value("Converged", StopReason::Converged)
        .value("MaxIterations", StopReason::MaxIterations)
        .value("Diverged", StopReason::Diverged);
    py::enum_<BenchMethod>(m, "BenchMethod")
        .value("Caruana", BenchMethod::Caruana)
        .value("Guo", BenchMethod::Guo)
        .value("ProbabilityExact", BenchMethod::ProbabilityExact)
        .value("ProbabilityApprox", BenchMethod::ProbabilityApprox);

    py::class_<GaussianParams>(m, "GaussianParams")
        .def(py::init<double, double, double>(), py::arg("amplitude"),
             py::arg("peak_position"), py::arg("width"))
        .def_readwrite("amplitude", &GaussianParams::amplitude)
        .def_readwrite("peak_position", &GaussianParams::peak_position)
        .def_readwrite("width", &GaussianParams::width)
        .def("__repr__", [](const GaussianParams& p) {
            return "GaussianParams(amplitude=" + std::to_string(p.amplitude) +
                   ", peak_position=" + std::to_string(p.peak_position) +
                   ", width=" + std::to_string(p.width) + ")";
        });

    py::class_<PolyCoeffs>(m, "PolyCoeffs")
        .def(py::init<double, double, double>(), py::arg("a"), py::arg("b"), py::arg("c"))
        .def_readwrite("a", &PolyCoeffs::a)
        .def_readwrite("b", &PolyCoeffs::b)
        .def_readwrite("c", &PolyCoeffs::c);

    py::class_<FitResult>(m, "FitResult")
        .def_readonly("params", &FitResult::params)
        .def_readonly("coeffs", &FitResult::coeffs)
        .def_readonly("method", &FitResult::method)
        .def_readonly("weight_mode", &FitResult::weight_mode)
        .def_readonly("n_used", &FitResult::n_used)
        .def_readonly("condition_hint", &FitResult::condition_hint);

    py::class_<IterativeFitResult>(m, "IterativeFitResult")
        .def_readonly("final", &IterativeFitResult::final)
        .def_readonly("trace", &IterativeFitResult::trace)
        .def_readonly("iterations", &IterativeFitResult::iterations)
        .def_readonly("converged", &IterativeFitResult::converged)
        .def_readonly("stop_reason", &IterativeFitResult::stop_reason)
        .def_readonly("failure", &IterativeFitResult::failure);

    m.def("params_to_coeffs", &params_to_coeffs, py::arg("params"));
    m.def("coeffs_to_params", &coeffs_to_params, py::arg("coeffs"));
    m.def("eval_gaussian", &eval_gaussian, py::arg("params"), py::arg("x"));

    m.def("std_normal_cdf", &std_normal_cdf, py::arg("x"));
    m.def(
        "delta_pdf",
        [](double t, double y, double sigma_n) { return delta_pdf(t, y, NoiseModel{sigma_n}); },
        py::arg("t"), py::arg("y"), py::arg("sigma_n"));
    m.def(
        "confidence_weight",
        [](double y, double sigma_n, double threshold, WeightMode mode) {
            const NoiseModel noise{sigma_n};
            const ConfidenceConfig cfg{threshold, mode};
            validate(noise);
            validate(cfg);
            return confidence_weight(y, noise, cfg);
        },
        py::arg("y"), py::arg("sigma_n"), py::arg("threshold"),
        py::arg("mode") = WeightMode::CdfApprox);

    m.def(
        "fit_caruana",
        [](const std::vector<double>& x, const std::vector<double>& y) {
            return fit_caruana(to_samples(x, y));
        },
        py::arg("x"), py::arg("y"));
    m.def(
        "fit_guo",
        [](const std::vector<double>& x, const std::vector<double>& y) {
            return fit_guo(to_samples(x, y));
        },
        py::arg("x"), py::arg("y"));
    m.def(
        "fit_probability",
        [](const std::vector<double>& x, const std::vector<double>& y, double sigma_n,
           WeightMode mode, std::optional<double> threshold, double confidence_factor) {
            const auto s = to_samples(x, y);
            if (threshold) return fit_probability(s, NoiseModel{sigma_n}, {*threshold, mode});
            return fit_probability(s, NoiseModel{sigma_n}, mode, confidence_factor);
        },
        py::arg("x"), py::arg("y"), py::arg("sigma_n"), py::arg("mode") = WeightMode::CdfApprox,
        py::arg("threshold") = py::none(), py::arg("confidence_factor") = 2.0);
    m.def(
        "fit_iterative",
        [](const std::vector<double>& x, const std::vector<double>& y, double sigma_n,
           WeightMode mode, std::size_t max_iterations, double tolerance,
           double confidence_factor) {
            IterationConfig cfg;
            cfg.noise = NoiseModel{sigma_n};
            cfg.mode = mode;
            cfg.max_iterations = max_iterations;
            cfg.tolerance = tolerance;
            cfg.confidence_factor = confidence_factor;
            return fit_iterative(to_samples(x, y), cfg);
        },
        py::arg("x"), py::arg("y"), py::arg("sigma_n"), py::arg("mode") = WeightMode::CdfApprox,
        py::arg("max_iterations") = 100, py::arg("tolerance") = 1e-6,
        py::arg("confidence_factor") = 2.0);

    m.def(
        "synthesize",
        [](const GaussianParams& p, double x_start, double x_end, double sampling_rate) {
            return to_columns(synthesize({p, x_start, x_end, sampling_rate}));
        },
        py::arg("params"), py::arg("x_start"), py::arg("x_end"), py::arg("sampling_rate") = 10.0,
        "Returns (x, y) lists.");
    m.def(
        "add_white_noise",
        [](const std::vector<double>& x, const std::vector<double>& y, double sigma_n,
           std::uint64_t seed) {
            return add_white_noise(to_samples(x, y), NoiseModel{sigma_n}, Seed{seed}).ys();
        },
        py::arg("x"), py::arg("y"), py::arg("sigma_n"), py::arg("seed"),
        "Returns the noisy y values.");
    m.def(
        "select_samples",
        [](const std::vector<double>& x, const std::vector<double>& y, double threshold) {
            return to_columns(select_samples(to_samples(x, y), threshold));
        },
        py::arg("x"), py::arg("y"), py::arg("threshold"));
    m.def("snr_db_to_sigma", &snr_db_to_sigma, py::arg("snr_db"), py::arg("amplitude") = 1.0);
    m.def("sigma_to_snr_db", &sigma_to_snr_db, py::arg("sigma_n"), py::arg("amplitude") = 1.0);

    m.def(
        "run_monte_carlo",
        [](std::size_t trials, std::uint64_t seed, std::vector<double> snr_levels_db,
           std::vector<BenchMethod> methods) {
            ExperimentConfig cfg;
            cfg.trials = trials;
            cfg.master_seed = Seed{seed};
            cfg.snr_levels_db = std::move(snr_levels_db);
            cfg.methods = std::move(methods);
            py::list rows;
            for (const auto& r : summarize(run_monte_carlo(cfg))) {
                py::dict row;
                row["method"] = r.method;
                row["snr_db"] = r.snr_db;
                row["parameter"] = r.parameter;
                row["mean_error"] = r.mean_error;
                row["std_dev"] = r.std_dev;
                row["n_failed"] = r.n_failed;
                row["trials"] = r.trials;
                rows.append(row);
            }
            return rows;
        },
        py::arg("trials") = 1000, py::arg("seed") = 1,
        py::arg("snr_levels_db") = reference_snr_levels(),
        py::arg("methods") = std::vector<BenchMethod>{BenchMethod::Caruana, BenchMethod::Guo,
                                                      BenchMethod::ProbabilityExact,
                                                      BenchMethod::ProbabilityApprox},
        "Reference-scenario sweep; returns one dict per (method, snr, parameter).");
    m.def(
        "run_convergence_study",
        [](const std::vector<std::uint64_t>& seeds, double sigma_n, WeightMode mode) {
            ConvergenceScenario scenario;
            scenario.noise = NoiseModel{sigma_n};
            scenario.iteration.noise = scenario.noise;
            scenario.iteration.mode = mode;
            std::vector<Seed> s;
            for (auto v : seeds) s.push_back(Seed{v});
            py::list out;
            for (const auto& r : run_convergence_study(scenario, s)) {
                py::dict d;
                d["seed"] = r.seed.value;
                d["deviations"] = r.deviations;
                d["iterations"] = r.iterations;
                d["converged"] = r.converged;
                d["stop_reason"] = r.stop_reason;
                out.append(d);
            }
            return out;
        },
        py::arg("seeds"), py::arg("sigma_n") = 0.1, py::arg("mode") = WeightMode::CdfApprox,
        "Truncated-spectrum iterative study (A=1, x_p=9.2, sigma=0.75 on [0, 10]).");

#ifdef VERSION_INFO
    m.attr("__version__") = VERSION_INFO;
#else
    m.attr("__version__") = "dev";
#endif
}
