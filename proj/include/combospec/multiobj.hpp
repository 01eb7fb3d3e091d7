#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "combospec/combo.hpp"
#include "combospec/matrix.hpp"
#include "combospec/parallel.hpp"
#include "combospec/pca.hpp"
#include "combospec/rng.hpp"
#include "combospec/svd.hpp"

namespace combospec {

/// Two differentiable scalar objectives over R^n with analytic gradient
/// evaluators. Gradient consistency with the objectives is checked by
/// max_gradient_fd_error, not on every call.
struct ObjectivePair {
    std::size_t dim = 0;
    std::string name;
    std::function<double(const Vector&)> j1;
    std::function<double(const Vector&)> j2;
    std::function<Vector(const Vector&)> grad1;
    std::function<Vector(const Vector&)> grad2;
    bool concurrent_safe = true;
};

/// Per-coordinate [lo, hi] bounds for drawing random points.
using Box = std::vector<std::pair<double, double>>;

inline Box uniform_box(std::size_t n, double lo, double hi) {
    return Box(n, {lo, hi});
}

struct OptimizerConfig {
    double step_size = 0.1;
    std::size_t max_iters = 1000;
    double grad_tol = 1e-8;
    std::size_t n_starts = 1;
    std::uint64_t seed = 0;
    Box start_box;  // empty means [-1, 1]^n
    bool backtracking = true;
};

struct ReducedGradientConfig {
    std::size_t m_samples = 16;
    std::size_t d = 1;
    Box sample_box;  // empty means [-1, 1]^n
    bool include_mean = true;
};

enum class GradientMode { exact, reduced };

inline const char* to_string(GradientMode mode) {
    return mode == GradientMode::exact ? "exact" : "reduced";
}

struct ParetoPoint {
    double alpha = 0.0;
    Vector p_star;
    double j1 = 0.0;
    double j2 = 0.0;
    std::size_t iters = 0;
    bool converged = false;
    GradientMode mode = GradientMode::exact;
    std::string note;  // nonempty when something went wrong
};

namespace detail {

inline std::string format_point(const Vector& p) {
    std::string s = "(";
    char buf[32];
    for (std::size_t i = 0; i < p.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.6g", p[i]);
        s += buf;
        if (i + 1 < p.size()) s += ", ";
    }
    return s + ")";
}

inline void require_alpha(double alpha, const char* where) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument(std::string(where) + ": alpha must be in [0, 1]");
    }
}

inline Box resolve_box(const Box& box, std::size_t n, const char* where) {
    if (box.empty()) return uniform_box(n, -1.0, 1.0);
    if (box.size() != n) {
        throw std::invalid_argument(std::string(where) + ": box must have one [lo, hi] per coordinate");
    }
    for (const auto& [lo, hi] : box) {
        if (!(lo <= hi)) {
            throw std::invalid_argument(std::string(where) + ": box bounds must satisfy lo <= hi");
        }
    }
    return box;
}

}  // namespace detail

/// The scalarized trade-off alpha * J1(p) + (1 - alpha) * J2(p).
inline double weighted_value(const ObjectivePair& pair, double alpha, const Vector& p) {
    detail::require_alpha(alpha, "weighted_value");
    try {
        return alpha * pair.j1(p) + (1.0 - alpha) * pair.j2(p);
    } catch (const std::exception& e) {
        throw std::runtime_error("objective evaluation failed at p = " +
                                 detail::format_point(p) + ": " + e.what());
    }
}

/// Gradient of the scalarized trade-off; linear in the two gradients.
inline Vector weighted_gradient(const ObjectivePair& pair, double alpha, const Vector& p) {
    detail::require_alpha(alpha, "weighted_gradient");
    Vector g1, g2;
    try {
        g1 = pair.grad1(p);
        g2 = pair.grad2(p);
    } catch (const std::exception& e) {
        throw std::runtime_error("gradient evaluation failed at p = " +
                                 detail::format_point(p) + ": " + e.what());
    }
    Vector g(pair.dim);
    const double beta = 1.0 - alpha;
    for (std::size_t i = 0; i < pair.dim; ++i) g[i] = alpha * g1[i] + beta * g2[i];
    return g;
}

/// Evaluates the scalarized gradient at every sample point; row j holds the
/// gradient at points[j]. The result is the data matrix of the gradient
/// field, the convex combination of the two per-objective fields.
inline Matrix sample_gradient_field(const ObjectivePair& pair, double alpha,
                                    const std::vector<Vector>& points) {
    detail::require_alpha(alpha, "sample_gradient_field");
    if (points.empty()) {
        throw std::invalid_argument("sample_gradient_field: needs at least one point");
    }
    Matrix field(points.size(), pair.dim);
    for (std::size_t j = 0; j < points.size(); ++j) {
        if (points[j].size() != pair.dim) {
            throw std::invalid_argument("sample_gradient_field: point " + std::to_string(j) +
                                        " has wrong length");
        }
        Vector g;
        try {
            g = weighted_gradient(pair, alpha, points[j]);
        } catch (const std::exception& e) {
            throw std::runtime_error("sample_gradient_field: sample j = " + std::to_string(j) +
                                     " failed: " + e.what());
        }
        field.set_row(j, g);
    }
    return field;
}

/// Orthonormal basis of the projection subspace: the leading principal
/// directions of the centered gradient field plus, when requested and
/// independent, the mean gradient direction. Directions beyond the field's
/// numerical rank are dropped, so the returned width r can be below d + 1.
inline Matrix reduced_basis(const Matrix& gradients, const ReducedGradientConfig& cfg) {
    require_data_matrix(gradients, "reduced_basis");
    const std::size_t m = gradients.rows();
    const std::size_t n = gradients.cols();
    if (m < 2) throw std::invalid_argument("reduced_basis: needs at least 2 sampled gradients");
    if (cfg.d < 1 || cfg.d > std::min(m, n)) {
        throw std::invalid_argument("reduced_basis: d must be in [1, min(m_samples, n)]");
    }
    if (gradients.frobenius_norm() == 0.0) {
        throw std::domain_error("reduced_basis: gradient field is identically zero");
    }

    auto [centered, mean] = center(gradients);
    const SvdFactors f = svd(centered);
    const double rank_tol = f.sigma[0] * static_cast<double>(std::max(m, n)) *
                            std::numeric_limits<double>::epsilon();
    std::size_t rank = 0;
    while (rank < f.sigma.size() && f.sigma[rank] > rank_tol) ++rank;
    const std::size_t keep = std::min(cfg.d, rank);

    std::vector<Vector> basis;
    basis.reserve(keep + 1);
    for (std::size_t j = 0; j < keep; ++j) basis.push_back(f.v.column(j));

    const double mean_norm = norm2(mean);
    const double field_scale = gradients.frobenius_norm() / std::sqrt(static_cast<double>(m));
    if (cfg.include_mean && mean_norm > 1e-12 * field_scale) {
        Vector r(n);
        for (std::size_t i = 0; i < n; ++i) r[i] = mean[i] / mean_norm;
        for (int pass = 0; pass < 2; ++pass) {
            for (const Vector& b : basis) {
                const double proj = dot(b, r);
                for (std::size_t i = 0; i < n; ++i) r[i] -= proj * b[i];
            }
        }
        const double rn = norm2(r);
        if (rn >= 1e-12) {
            for (double& x : r) x /= rn;
            basis.push_back(std::move(r));
        }
    }
    if (basis.empty()) {
        throw std::domain_error("reduced_basis: no usable directions (zero-variance field)");
    }

    Matrix out(n, basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j)
        for (std::size_t i = 0; i < n; ++i) out(i, j) = basis[j][i];
    return out;
}

inline std::vector<Vector> sample_box_points(const Box& box, std::size_t count,
                                             RandomStream& stream) {
    std::vector<Vector> pts(count);
    for (auto& p : pts) {
        p.resize(box.size());
        for (std::size_t i = 0; i < box.size(); ++i) {
            p[i] = stream.uniform(box[i].first, box[i].second);
        }
    }
    return pts;
}

struct DescentResult {
    Vector p;
    std::size_t iters = 0;
    bool converged = false;
    bool failed = false;
    std::string note;
};

/// Fixed-step gradient descent from one start. When basis is non-null each
/// step follows the projection of the exact gradient onto its column span;
/// convergence is declared on the norm of that step-driving vector. With
/// backtracking enabled the step is halved while the scalarized value would
/// increase (or leave the finite range).
inline DescentResult descend(const ObjectivePair& pair, double alpha, const OptimizerConfig& cfg,
                             Vector start, const Matrix* basis = nullptr,
                             std::vector<Vector>* trace = nullptr) {
    DescentResult res;
    res.p = std::move(start);
    if (trace) trace->push_back(res.p);

    double j_cur;
    try {
        j_cur = weighted_value(pair, alpha, res.p);
    } catch (const std::exception& e) {
        res.failed = true;
        res.note = e.what();
        return res;
    }
    if (!std::isfinite(j_cur)) {
        res.failed = true;
        res.note = "non-finite objective at start " + detail::format_point(res.p);
        return res;
    }

    while (true) {
        Vector g;
        try {
            g = weighted_gradient(pair, alpha, res.p);
        } catch (const std::exception& e) {
            res.failed = true;
            res.note = e.what();
            return res;
        }
        if (!all_finite(g)) {
            res.failed = true;
            res.note = "non-finite gradient at " + detail::format_point(res.p);
            return res;
        }

        Vector step_dir = g;
        if (basis) {
            step_dir = basis->cols() == 0 ? Vector(pair.dim, 0.0)
                                          : basis->times(basis->transpose_times(g));
        }
        if (norm2(step_dir) <= cfg.grad_tol) {
            res.converged = true;
            return res;
        }
        if (res.iters >= cfg.max_iters) return res;

        if (!cfg.backtracking) {
            Vector p_new(pair.dim);
            for (std::size_t i = 0; i < pair.dim; ++i) {
                p_new[i] = res.p[i] - cfg.step_size * step_dir[i];
            }
            double j_new;
            try {
                j_new = weighted_value(pair, alpha, p_new);
            } catch (const std::exception& e) {
                res.failed = true;
                res.note = e.what();
                return res;
            }
            if (!std::isfinite(j_new)) {
                res.failed = true;
                res.note = "non-finite objective during descent at iteration " +
                           std::to_string(res.iters + 1);
                return res;
            }
            res.p = std::move(p_new);
            j_cur = j_new;
        } else {
            double h = cfg.step_size;
            bool stepped = false;
            // Near a minimum the true per-step decrease drops below the
            // resolution of the objective's floating-point value, so an exact
            // non-increase test would reject steps on round-off wobble and
            // stall before tight gradient tolerances are reachable. Allow a
            // few ulps of slack — relative only, so it vanishes along with
            // the objective; genuine divergence overshoots it instantly.
            const double j_slack =
                32.0 * std::numeric_limits<double>::epsilon() * std::abs(j_cur);
            for (int halvings = 0; halvings <= 60; ++halvings) {
                Vector p_new(pair.dim);
                for (std::size_t i = 0; i < pair.dim; ++i) {
                    p_new[i] = res.p[i] - h * step_dir[i];
                }
                double j_new;
                try {
                    j_new = weighted_value(pair, alpha, p_new);
                } catch (const std::exception& e) {
                    res.failed = true;
                    res.note = e.what();
                    return res;
                }
                if (std::isfinite(j_new) && j_new <= j_cur + j_slack) {
                    res.p = std::move(p_new);
                    j_cur = j_new;
                    stepped = true;
                    break;
                }
                h *= 0.5;
            }
            if (!stepped) {
                res.note = "backtracking stalled at iteration " + std::to_string(res.iters + 1);
                return res;
            }
        }
        ++res.iters;
        if (trace) trace->push_back(res.p);
    }
}

namespace detail {

inline void require_optimizer_config(const OptimizerConfig& cfg) {
    if (!(cfg.step_size > 0.0)) throw std::invalid_argument("OptimizerConfig: step_size must be > 0");
    if (!(cfg.grad_tol > 0.0)) throw std::invalid_argument("OptimizerConfig: grad_tol must be > 0");
    if (cfg.n_starts < 1) throw std::invalid_argument("OptimizerConfig: n_starts must be >= 1");
}

}  // namespace detail

/// Multi-start descent on the scalarized objective at one alpha. Starts are
/// drawn from a named stream off cfg.seed; when a reduction config is given
/// the projection basis is built once from a fixed sample of the gradient
/// field and reused by every start. Returns the best final point across
/// starts; fails only when every start fails.
inline ParetoPoint minimize(const ObjectivePair& pair, double alpha, const OptimizerConfig& cfg,
                            const std::optional<ReducedGradientConfig>& reduction = {}) {
    detail::require_alpha(alpha, "minimize");
    detail::require_optimizer_config(cfg);

    RandomStream start_stream(cfg.seed, "optimizer.starts");
    const Box start_box = detail::resolve_box(cfg.start_box, pair.dim, "minimize (start_box)");
    const std::vector<Vector> starts = sample_box_points(start_box, cfg.n_starts, start_stream);

    Matrix basis;
    bool use_basis = false;
    if (reduction) {
        RandomStream point_stream(cfg.seed, "reduction.samples");
        const Box sample_box =
            detail::resolve_box(reduction->sample_box, pair.dim, "minimize (sample_box)");
        const std::vector<Vector> pts =
            sample_box_points(sample_box, reduction->m_samples, point_stream);
        const Matrix field = sample_gradient_field(pair, alpha, pts);
        try {
            basis = reduced_basis(field, *reduction);
        } catch (const std::domain_error&) {
            basis = Matrix(pair.dim, 0);  // flat field: projected gradient is zero
        }
        use_basis = true;
    }

    ParetoPoint best;
    bool have_best = false;
    double best_value = std::numeric_limits<double>::infinity();
    std::vector<std::string> failures;

    for (const Vector& start : starts) {
        DescentResult run = descend(pair, alpha, cfg, start, use_basis ? &basis : nullptr);
        if (run.failed) {
            failures.push_back(run.note);
            continue;
        }
        const double value = weighted_value(pair, alpha, run.p);
        // Switch to a later start only on a meaningful improvement. When a
        // problem has a continuum of minimizers, every start bottoms out at
        // the same objective up to round-off, and a plain < would let noise
        // pick the winner; requiring a margin keeps the selection stable.
        const double margin = 1e-12 * std::abs(best_value);
        if (!have_best || value < best_value - margin) {
            have_best = true;
            best_value = value;
            best.p_star = run.p;
            best.iters = run.iters;
            best.converged = run.converged;
            best.note = run.note;
        }
    }
    if (!have_best) {
        std::string msg = "minimize: all starts failed";
        for (const auto& f : failures) msg += "; " + f;
        throw std::runtime_error(msg);
    }

    best.alpha = alpha;
    best.mode = use_basis ? GradientMode::reduced : GradientMode::exact;
    best.j1 = pair.j1(best.p_star);
    best.j2 = pair.j2(best.p_star);
    return best;
}

struct SweepResult {
    std::vector<ParetoPoint> points;
    std::size_t failures = 0;
};

/// One minimize run per alpha, order preserved, no warm-starting. Entries
/// that fail outright are recorded with a note instead of aborting the
/// sweep. Parallel execution is used only when the evaluators declare
/// themselves concurrent-safe.
inline SweepResult pareto_sweep(const ObjectivePair& pair, const Vector& alphas,
                                const OptimizerConfig& cfg,
                                const std::optional<ReducedGradientConfig>& reduction = {},
                                unsigned threads = 1) {
    if (alphas.empty()) throw std::invalid_argument("pareto_sweep: alphas must be non-empty");
    SweepResult result;
    result.points.resize(alphas.size());
    const unsigned effective_threads = pair.concurrent_safe ? threads : 1;
    parallel_for(alphas.size(), effective_threads, [&](std::size_t i) {
        try {
            result.points[i] = minimize(pair, alphas[i], cfg, reduction);
        } catch (const std::exception& e) {
            ParetoPoint p;
            p.alpha = alphas[i];
            p.p_star = Vector(pair.dim, 0.0);
            p.j1 = std::numeric_limits<double>::quiet_NaN();
            p.j2 = std::numeric_limits<double>::quiet_NaN();
            p.converged = false;
            p.mode = reduction ? GradientMode::reduced : GradientMode::exact;
            p.note = e.what();
            result.points[i] = p;
        }
    });
    for (const auto& p : result.points) {
        if (!p.note.empty() && !p.converged) ++result.failures;
    }
    return result;
}

/// Predicted eigenvalue intervals of the centered gradient-field Gram matrix
/// at an arbitrary alpha, from a grid of resolution K over the two centered
/// per-objective fields sampled at fixed points. Dividing the endpoints by
/// the number of sample points gives variance intervals under the
/// divide-by-m convention.
inline EigenIntervals variance_forecast(const ObjectivePair& pair,
                                        const std::vector<Vector>& points, std::size_t k,
                                        double alpha) {
    detail::require_alpha(alpha, "variance_forecast");
    const Matrix field1 = sample_gradient_field(pair, 1.0, points);
    const Matrix field2 = sample_gradient_field(pair, 0.0, points);
    auto [c1, m1] = center(field1);
    auto [c2, m2] = center(field2);
    (void)m1;
    (void)m2;
    const ComboPair combo = make_combo_pair(std::move(c1), std::move(c2));
    const SpectrumTable table = build_table(combo, k);
    return predict_intervals(table, combo, alpha, IntervalMode::nearest);
}

/// Worst relative disagreement between the analytic gradients and central
/// finite differences over the given points, across both objectives.
inline double max_gradient_fd_error(const ObjectivePair& pair,
                                    const std::vector<Vector>& points) {
    double worst = 0.0;
    const auto check = [&](const std::function<double(const Vector&)>& f,
                           const std::function<Vector(const Vector&)>& grad) {
        for (const Vector& p : points) {
            const Vector g = grad(p);
            Vector fd(pair.dim);
            for (std::size_t i = 0; i < pair.dim; ++i) {
                const double h = 1e-6 * std::max(1.0, std::abs(p[i]));
                Vector hi = p, lo = p;
                hi[i] += h;
                lo[i] -= h;
                fd[i] = (f(hi) - f(lo)) / (2.0 * h);
            }
            double diff = 0.0;
            for (std::size_t i = 0; i < pair.dim; ++i) {
                const double r = g[i] - fd[i];
                diff += r * r;
            }
            worst = std::max(worst, std::sqrt(diff) / std::max(1.0, norm2(g)));
        }
    };
    check(pair.j1, pair.grad1);
    check(pair.j2, pair.grad2);
    return worst;
}

}  // namespace combospec
