#include "gaussfit/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <vector>

#include "gaussfit/errors.hpp"

namespace gaussfit {

namespace {

std::string_view trim(std::string_view text) {
    const auto is_blank = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
    while (!text.empty() && is_blank(text.front())) text.remove_prefix(1);
    while (!text.empty() && is_blank(text.back())) text.remove_suffix(1);
    return text;
}

double median(std::vector<double> values) {
    const std::size_t n = values.size();
    std::sort(values.begin(), values.end());
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

} // namespace

std::string format_double(double value) {
    char buffer[64];
    const auto result =
        std::to_chars(buffer, buffer + sizeof buffer, value, std::chars_format::general, 17);
    return std::string(buffer, result.ptr);
}

std::optional<double> parse_double(std::string_view text) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    if (text.empty()) return std::nullopt;
    double value = 0.0;
    const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
    if (result.ec != std::errc() || result.ptr != text.data() + text.size()) return std::nullopt;
    return value;
}

SampleSet read_spectrum(std::istream& in) {
    std::vector<Sample> samples;
    std::string raw;
    std::size_t line_no = 0;
    bool header_allowed = true;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;

        const auto comma = line.find(',');
        if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos) {
            throw ParseError(line_no, "expected exactly two comma-separated fields");
        }
        const auto x_text = trim(line.substr(0, comma));
        const auto y_text = trim(line.substr(comma + 1));
        if (header_allowed && x_text == "x" && y_text == "y") {
            header_allowed = false;
            continue;
        }
        header_allowed = false;

        const auto x = parse_double(x_text);
        const auto y = parse_double(y_text);
        if (!x || !y) throw ParseError(line_no, "malformed number");
        if (!std::isfinite(*x) || !std::isfinite(*y)) throw ParseError(line_no, "non-finite value");
        if (!samples.empty() && !(*x > samples.back().x)) {
            throw ParseError(line_no, "x values must be strictly increasing");
        }
        samples.push_back({*x, *y});
    }
    if (samples.empty()) throw ParseError(line_no, "no data rows");
    return SampleSet(std::move(samples));
}

void write_spectrum(std::ostream& out, const SampleSet& s) {
    out << "x,y\n";
    for (const auto& sample : s) {
        out << format_double(sample.x) << ',' << format_double(sample.y) << '\n';
    }
}

double estimate_noise_sigma(const SampleSet& s) {
    if (s.size() < 4) throw InsufficientSamples("noise estimation needs at least 4 samples");
    const std::size_t tail = std::max<std::size_t>(1, s.size() / 10);
    std::vector<double> values;
    for (std::size_t i = 0; i < tail; ++i) values.push_back(s[i].y);
    for (std::size_t i = s.size() - tail; i < s.size(); ++i) values.push_back(s[i].y);

    const double center = median(values);
    for (double& v : values) v = std::abs(v - center);
    return 1.4826 * median(std::move(values));
}

FitReportDocument make_report(const FitResult& fit) {
    FitReportDocument doc;
    doc.method = std::string(to_string(fit.method));
    if (fit.weight_mode) doc.weight_mode = std::string(to_string(*fit.weight_mode));
    doc.params = fit.params;
    doc.n_used = fit.n_used;
    return doc;
}

FitReportDocument make_report(const IterativeFitResult& fit, bool include_trace) {
    FitReportDocument doc = make_report(fit.final);
    doc.converged = fit.converged;
    doc.iterations = fit.iterations;
    if (include_trace) doc.trace = fit.trace;
    return doc;
}

void write_fit_report(std::ostream& out, const FitReportDocument& doc) {
    out << "method=" << doc.method << '\n';
    if (!doc.weight_mode.empty()) out << "weight_mode=" << doc.weight_mode << '\n';
    out << "A=" << format_double(doc.params.amplitude) << '\n';
    out << "x_p=" << format_double(doc.params.peak_position) << '\n';
    out << "sigma=" << format_double(doc.params.width) << '\n';
    out << "n_used=" << doc.n_used << '\n';
    if (doc.converged) out << "converged=" << (*doc.converged ? "true" : "false") << '\n';
    if (doc.iterations) out << "iterations=" << *doc.iterations << '\n';
    for (std::size_t k = 0; k < doc.trace.size(); ++k) {
        const auto& p = doc.trace[k];
        out << "trace." << (k + 1) << '=' << format_double(p.amplitude) << ','
            << format_double(p.peak_position) << ',' << format_double(p.width) << '\n';
    }
}

} // namespace gaussfit
