#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "combospec/matrix.hpp"
#include "combospec/parallel.hpp"
#include "combospec/svd.hpp"

namespace combospec {

/// Two same-shape data matrices whose convex combination
/// X(alpha) = alpha * X1 + (1 - alpha) * X2 is being tracked, with their
/// largest singular values cached: every bound below depends only on these
/// two scalars.
struct ComboPair {
    Matrix x1;
    Matrix x2;
    double sigma1_x1 = 0.0;
    double sigma1_x2 = 0.0;
};

inline ComboPair make_combo_pair(Matrix x1, Matrix x2) {
    require_data_matrix(x1, "make_combo_pair (x1)");
    require_data_matrix(x2, "make_combo_pair (x2)");
    if (!x1.same_shape(x2)) {
        throw std::invalid_argument("make_combo_pair: matrices must have the same shape");
    }
    ComboPair pair;
    pair.sigma1_x1 = singular_values(x1)[0];
    pair.sigma1_x2 = singular_values(x2)[0];
    pair.x1 = std::move(x1);
    pair.x2 = std::move(x2);
    return pair;
}

/// Entrywise alpha * X1 + (1 - alpha) * X2. Defined on [0, 1] only.
inline Matrix combine(const ComboPair& pair, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument("combine: alpha must be in [0, 1]");
    }
    Matrix out(pair.x1.rows(), pair.x1.cols());
    const double beta = 1.0 - alpha;
    for (std::size_t i = 0; i < out.rows(); ++i)
        for (std::size_t j = 0; j < out.cols(); ++j)
            out(i, j) = alpha * pair.x1(i, j) + beta * pair.x2(i, j);
    return out;
}

/// Gram spectra of X(alpha_k) on the grid alpha_k = k / K, k = 0..K, plus
/// the uniform per-cell deviation bound that makes the grid predictive.
struct SpectrumTable {
    std::size_t k = 0;                  // grid resolution
    Vector alphas;                      // k + 1 grid points
    std::vector<GramSpectrum> spectra;  // spectra[j] = gram_spectrum(X(alphas[j]))
    double bound = 0.0;                 // (2/K) * (sigma1(X1) + sigma1(X2))^2
};

/// Uniform eigenvalue deviation bound between X(alpha) and its grid cell
/// anchor: (2/K) * (sigma1(X1) + sigma1(X2))^2.
inline double proposition_bound(const ComboPair& pair, std::size_t k) {
    if (k < 1) throw std::invalid_argument("proposition_bound: K must be >= 1");
    const double s = pair.sigma1_x1 + pair.sigma1_x2;
    return 2.0 / static_cast<double>(k) * s * s;
}

/// Distance-proportional refinement of the same bound:
/// 2 * |delta_alpha| * (sigma1(X1) + sigma1(X2))^2.
inline double lipschitz_bound(const ComboPair& pair, double delta_alpha) {
    const double s = pair.sigma1_x1 + pair.sigma1_x2;
    return 2.0 * std::abs(delta_alpha) * s * s;
}

inline SpectrumTable build_table(const ComboPair& pair, std::size_t k, unsigned threads = 1) {
    if (k < 1) throw std::invalid_argument("build_table: K must be >= 1");
    SpectrumTable table;
    table.k = k;
    table.alphas.resize(k + 1);
    table.spectra.resize(k + 1);
    for (std::size_t j = 0; j <= k; ++j) {
        table.alphas[j] = static_cast<double>(j) / static_cast<double>(k);
    }
    parallel_for(k + 1, threads, [&](std::size_t j) {
        table.spectra[j] = gram_spectrum(combine(pair, table.alphas[j]));
    });
    table.bound = proposition_bound(pair, k);
    return table;
}

enum class IntervalMode { proposition, nearest };

inline const char* to_string(IntervalMode mode) {
    return mode == IntervalMode::proposition ? "proposition" : "nearest";
}

/// Predicted enclosing intervals for the eigenvalues of G(alpha), one per
/// eigenvalue index, anchored at a grid spectrum. Lower endpoints are
/// clamped at zero since G is positive semi-definite.
struct EigenIntervals {
    double alpha = 0.0;
    std::size_t anchor_k = 0;
    IntervalMode mode = IntervalMode::proposition;
    double radius = 0.0;
    std::vector<std::pair<double, double>> intervals;
};

/// proposition mode anchors at the enclosing cell's left grid point and uses
/// the uniform per-cell radius (alpha = 1 anchors at k = K - 1). nearest mode
/// anchors at the closest grid point, ties toward the lower index, and uses
/// the tighter distance-proportional radius.
inline EigenIntervals predict_intervals(const SpectrumTable& table, const ComboPair& pair,
                                        double alpha, IntervalMode mode) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument("predict_intervals: alpha must be in [0, 1]");
    }
    const std::size_t k = table.k;
    EigenIntervals out;
    out.alpha = alpha;
    out.mode = mode;

    if (mode == IntervalMode::proposition) {
        const double cell = std::floor(alpha * static_cast<double>(k));
        out.anchor_k = std::min(static_cast<std::size_t>(cell), k - 1);
        out.radius = table.bound;
    } else {
        const std::size_t lo = std::min(
            static_cast<std::size_t>(std::floor(alpha * static_cast<double>(k))), k - 1);
        const std::size_t hi = lo + 1;
        const double d_lo = alpha - table.alphas[lo];
        const double d_hi = table.alphas[hi] - alpha;
        out.anchor_k = d_lo <= d_hi ? lo : hi;
        out.radius = lipschitz_bound(pair, alpha - table.alphas[out.anchor_k]);
    }

    const Vector& anchor = table.spectra[out.anchor_k].eigenvalues;
    out.intervals.reserve(anchor.size());
    for (double lambda : anchor) {
        out.intervals.emplace_back(std::max(0.0, lambda - out.radius), lambda + out.radius);
    }
    return out;
}

struct BoundCheckSample {
    double alpha = 0.0;
    std::size_t anchor_k = 0;
    double max_deviation = 0.0;
    std::size_t exceedances = 0;  // eigenvalue indices beyond the allowed radius
};

/// Result of a dense empirical sweep against the per-cell bound.
/// max_slack is the worst margin, radius minus the largest deviation seen;
/// small values mean the bound is nearly tight somewhere.
struct BoundCheckReport {
    double radius = 0.0;
    std::size_t violations = 0;
    double max_slack = 0.0;
    std::vector<BoundCheckSample> samples;
};

/// Samples alpha on a uniform dense grid, computes the true spectra, and
/// checks every eigenvalue deviation from the enclosing cell's left anchor
/// against the uniform radius. Deviations beyond 1e-9 relative slack count
/// as violations.
inline BoundCheckReport verify_bound(const ComboPair& pair, std::size_t k,
                                     std::size_t dense_samples, unsigned threads = 1) {
    if (dense_samples < 2) {
        throw std::invalid_argument("verify_bound: dense_samples must be >= 2");
    }
    const SpectrumTable table = build_table(pair, k, threads);

    BoundCheckReport report;
    report.radius = table.bound;
    report.samples.resize(dense_samples);

    const double allowed = table.bound * (1.0 + 1e-9);
    parallel_for(dense_samples, threads, [&](std::size_t t) {
        const double alpha =
            static_cast<double>(t) / static_cast<double>(dense_samples - 1);
        const std::size_t anchor = std::min(
            static_cast<std::size_t>(std::floor(alpha * static_cast<double>(k))), k - 1);
        const GramSpectrum truth = gram_spectrum(combine(pair, alpha));
        const Vector& ref = table.spectra[anchor].eigenvalues;
        BoundCheckSample sample{alpha, anchor, 0.0, 0};
        for (std::size_t i = 0; i < ref.size(); ++i) {
            const double dev = std::abs(truth.eigenvalues[i] - ref[i]);
            sample.max_deviation = std::max(sample.max_deviation, dev);
            if (dev > allowed) ++sample.exceedances;
        }
        report.samples[t] = sample;
    });

    double worst = 0.0;
    for (const auto& s : report.samples) {
        worst = std::max(worst, s.max_deviation);
        report.violations += s.exceedances;
    }
    report.max_slack = report.radius - worst;
    return report;
}

}  // namespace combospec
