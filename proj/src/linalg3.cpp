#include "gaussfit/linalg3.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "gaussfit/errors.hpp"

namespace gaussfit {

namespace {

constexpr double kPivotTolerance = 1e-12;

void check_weights(const SampleSet& s, std::span<const double> w) {
    if (w.size() != s.size()) {
        throw std::invalid_argument("weight vector has " + std::to_string(w.size()) +
                                    " entries for " + std::to_string(s.size()) + " samples");
    }
    for (double wi : w) {
        if (!std::isfinite(wi) || wi < 0.0) {
            throw std::invalid_argument("weights must be finite and non-negative");
        }
    }
}

bool usable(const Sample& sample, double weight) { return weight > 0.0 && sample.y > 0.0; }

struct Lu3 {
    Matrix3 lu{};
    std::array<std::size_t, 3> perm{0, 1, 2};
    double pivot_ratio = 0.0;
};

Lu3 factorize(const Matrix3& m) {
    Lu3 f;
    f.lu = m;
    double scale = 0.0;
    for (const auto& row : m) {
        for (double v : row) {
            if (!std::isfinite(v)) throw SingularSystem("normal matrix has non-finite entries");
            scale = std::max(scale, std::abs(v));
        }
    }
    if (scale == 0.0) throw SingularSystem("normal matrix is zero");

    double min_pivot = scale;
    double max_pivot = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < 3; ++i) {
            if (std::abs(f.lu[i][k]) > std::abs(f.lu[p][k])) p = i;
        }
        const double pivot = std::abs(f.lu[p][k]);
        if (pivot < kPivotTolerance * scale) {
            throw SingularSystem("pivot " + std::to_string(k) + " below tolerance");
        }
        if (p != k) {
            std::swap(f.lu[p], f.lu[k]);
            std::swap(f.perm[p], f.perm[k]);
        }
        min_pivot = std::min(min_pivot, pivot);
        max_pivot = std::max(max_pivot, pivot);
        for (std::size_t i = k + 1; i < 3; ++i) {
            const double factor = f.lu[i][k] / f.lu[k][k];
            f.lu[i][k] = factor;
            for (std::size_t j = k + 1; j < 3; ++j) f.lu[i][j] -= factor * f.lu[k][j];
        }
    }
    f.pivot_ratio = min_pivot / max_pivot;
    return f;
}

Vector3 lu_solve(const Lu3& f, const Vector3& v) {
    Vector3 y{};
    for (std::size_t i = 0; i < 3; ++i) {
        double s = v[f.perm[i]];
        for (std::size_t j = 0; j < i; ++j) s -= f.lu[i][j] * y[j];
        y[i] = s;
    }
    Vector3 x{};
    for (std::size_t i = 3; i-- > 0;) {
        double s = y[i];
        for (std::size_t j = i + 1; j < 3; ++j) s -= f.lu[i][j] * x[j];
        x[i] = s / f.lu[i][i];
    }
    return x;
}

} // namespace

NormalSystem build_weighted_system(const SampleSet& s, std::span<const double> w, double shift,
                                   double scale) {
    check_weights(s, w);
    if (!(scale > 0.0) || !std::isfinite(scale) || !std::isfinite(shift)) {
        throw std::invalid_argument("shift must be finite and scale positive");
    }

    // Moments sum_i w_i^2 u_i^k for k = 0..4 and sum_i w_i^2 u_i^r ln y_i for r = 0..2.
    std::array<double, 5> moment{};
    Vector3 rhs{};
    std::size_t n_used = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!usable(s[i], w[i])) continue;
        ++n_used;
        const double u = (s[i].x - shift) / scale;
        const double w2 = w[i] * w[i];
        const double log_y = std::log(s[i].y);
        double power = w2;
        for (std::size_t k = 0; k < 5; ++k) {
            moment[k] += power;
            if (k < 3) rhs[k] += power * log_y;
            power *= u;
        }
    }
    if (n_used < 3) {
        throw InsufficientSamples("only " + std::to_string(n_used) +
                                  " samples with positive weight and amplitude (need 3)");
    }

    NormalSystem sys;
    for (std::size_t r = 0; r < 3; ++r) {
        for (std::size_t c = 0; c < 3; ++c) sys.matrix[r][c] = moment[r + c];
    }
    sys.rhs = rhs;
    sys.n_used = n_used;
    sys.shift = shift;
    sys.scale = scale;
    return sys;
}

Solve3Result solve3_with_diagnostics(const Matrix3& m, const Vector3& v) {
    for (double vi : v) {
        if (!std::isfinite(vi)) throw SingularSystem("right-hand side has non-finite entries");
    }
    const Lu3 f = factorize(m);
    Vector3 x = lu_solve(f, v);

    // One step of iterative refinement.
    Vector3 r{};
    for (std::size_t i = 0; i < 3; ++i) {
        r[i] = v[i];
        for (std::size_t j = 0; j < 3; ++j) r[i] -= m[i][j] * x[j];
    }
    const Vector3 dx = lu_solve(f, r);
    for (std::size_t i = 0; i < 3; ++i) x[i] += dx[i];

    return {{x[0], x[1], x[2]}, f.pivot_ratio};
}

PolyCoeffs solve3(const NormalSystem& sys) {
    return solve3_with_diagnostics(sys.matrix, sys.rhs).coeffs;
}

QuadraticFit solve_weighted_quadratic(const SampleSet& s, std::span<const double> w,
                                      std::optional<double> shift) {
    check_weights(s, w);
    double center = 0.0;
    double spread = 1.0;
    if (shift) {
        center = *shift;
    } else {
        double sum_w2 = 0.0;
        double sum_w2x = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (!usable(s[i], w[i])) continue;
            const double w2 = w[i] * w[i];
            sum_w2 += w2;
            sum_w2x += w2 * s[i].x;
        }
        if (sum_w2 > 0.0) {
            center = sum_w2x / sum_w2;
            double sum_w2d2 = 0.0;
            for (std::size_t i = 0; i < s.size(); ++i) {
                if (!usable(s[i], w[i])) continue;
                const double d = s[i].x - center;
                sum_w2d2 += w[i] * w[i] * d * d;
            }
            const double rms = std::sqrt(sum_w2d2 / sum_w2);
            if (rms > 0.0 && std::isfinite(rms)) spread = rms;
        }
    }

    const NormalSystem sys = build_weighted_system(s, w, center, spread);
    const Solve3Result solved = solve3_with_diagnostics(sys.matrix, sys.rhs);

    QuadraticFit fit;
    fit.centered = solved.coeffs;
    fit.coeffs = unshift_coeffs(solved.coeffs, center, spread);
    fit.shift = center;
    fit.scale = spread;
    fit.n_used = sys.n_used;
    fit.pivot_ratio = solved.pivot_ratio;
    return fit;
}

PolyCoeffs fit_weighted_quadratic(const SampleSet& s, std::span<const double> w) {
    return solve_weighted_quadratic(s, w).coeffs;
}

double weighted_log_objective(const SampleSet& s, std::span<const double> w,
                              const PolyCoeffs& q) {
    check_weights(s, w);
    double total = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!usable(s[i], w[i])) continue;
        const double r = std::log(s[i].y) - eval_log_quadratic(q, s[i].x);
        total += w[i] * w[i] * r * r;
    }
    return total;
}

} // namespace gaussfit
