#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gaussfit/core_model.hpp"
#include "gaussfit/fitters.hpp"

namespace gaussfit {

/// 17 significant digits, '.' radix, independent of the global locale.
std::string format_double(double value);

/// Strict locale-independent parse of the whole token (surrounding blanks allowed).
std::optional<double> parse_double(std::string_view text);

/// Reads "x,y" lines. Blank lines and lines starting with '#' are skipped, and
/// a single "x,y" header is accepted before the first data row.
/// Throws ParseError carrying the 1-based line number.
SampleSet read_spectrum(std::istream& in);
void write_spectrum(std::ostream& out, const SampleSet& s);

/// 1.4826 * MAD of the amplitudes in the first and last 10% of samples
/// (at least one sample from each end). Throws InsufficientSamples below 4 samples.
double estimate_noise_sigma(const SampleSet& s);

/// key=value document describing a single fit.
struct FitReportDocument {
    std::string method;
    std::string weight_mode;  // empty when not applicable
    GaussianParams params;
    std::size_t n_used = 0;
    std::optional<bool> converged;
    std::optional<std::size_t> iterations;
    std::vector<GaussianParams> trace;
};

FitReportDocument make_report(const FitResult& fit);
FitReportDocument make_report(const IterativeFitResult& fit, bool include_trace);
void write_fit_report(std::ostream& out, const FitReportDocument& doc);

} // namespace gaussfit
