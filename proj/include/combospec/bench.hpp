#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "combospec/matrix.hpp"
#include "combospec/multiobj.hpp"
#include "combospec/rng.hpp"

namespace combospec {

/// An ObjectivePair bundled with its closed-form answer, for checking the
/// optimizer against something it cannot influence.
struct BenchProblem {
    ObjectivePair pair;
    /// Closed-form minimizer of the alpha-weighted sum; null when the
    /// problem has none. For problems whose minimizer is a whole affine
    /// set this returns the minimum-norm representative.
    std::function<Vector(double)> weighted_minimizer;
    bool minimizer_unique = true;
    /// Dimension of the span containing every gradient the problem can
    /// produce (the shared Hessian range). Equals the ambient dimension
    /// for unstructured problems.
    std::size_t field_rank = 0;
    std::string description;
};

namespace detail {

/// Lower-triangular L with a = L L'. Empty when a is not positive definite.
inline std::optional<Matrix> try_cholesky(const Matrix& a) {
    const std::size_t n = a.rows();
    if (n == 0 || a.cols() != n) return std::nullopt;
    Matrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double diag = a(j, j);
        for (std::size_t k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
        if (!(diag > 0.0)) return std::nullopt;
        l(j, j) = std::sqrt(diag);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / l(j, j);
        }
    }
    return l;
}

/// Solves L L' x = b by forward then back substitution.
inline Vector cholesky_solve(const Matrix& l, const Vector& b) {
    const std::size_t n = l.rows();
    Vector y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
        y[i] = s / l(i, i);
    }
    Vector x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * x[k];
        x[ii] = s / l(ii, ii);
    }
    return x;
}

inline void require_spd(const Matrix& a, const char* label) {
    if (a.rows() != a.cols() || a.empty()) {
        throw std::invalid_argument(std::string("anisotropic_quadratics: ") + label +
                                    " must be square and non-empty");
    }
    const double scale = std::max(1.0, a.max_abs());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = i + 1; j < a.cols(); ++j) {
            if (std::abs(a(i, j) - a(j, i)) > 1e-12 * scale) {
                throw std::invalid_argument(std::string("anisotropic_quadratics: ") + label +
                                            " is not symmetric");
            }
        }
    }
    if (!try_cholesky(a)) {
        throw std::invalid_argument(std::string("anisotropic_quadratics: ") + label +
                                    " is not positive definite (factorization failed)");
    }
}

}  // namespace detail

/// J1 = half the squared distance to a, J2 to b. The weighted minimizer is
/// the convex combination alpha*a + (1-alpha)*b, so the Pareto set is the
/// segment between the anchors.
inline BenchProblem isotropic_quadratics(Vector a, Vector b) {
    if (a.size() != b.size() || a.empty()) {
        throw std::invalid_argument("isotropic_quadratics: anchors must be non-empty and equal length");
    }
    if (a == b) {
        throw std::domain_error("isotropic_quadratics: anchors coincide; objectives are identical");
    }
    const std::size_t n = a.size();

    BenchProblem prob;
    prob.pair.dim = n;
    prob.pair.name = "iso-quad";
    prob.pair.j1 = [a](const Vector& p) {
        double s = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) s += (p[i] - a[i]) * (p[i] - a[i]);
        return 0.5 * s;
    };
    prob.pair.j2 = [b](const Vector& p) {
        double s = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) s += (p[i] - b[i]) * (p[i] - b[i]);
        return 0.5 * s;
    };
    prob.pair.grad1 = [a](const Vector& p) {
        Vector g(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) g[i] = p[i] - a[i];
        return g;
    };
    prob.pair.grad2 = [b](const Vector& p) {
        Vector g(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) g[i] = p[i] - b[i];
        return g;
    };
    prob.weighted_minimizer = [a, b](double alpha) {
        Vector p(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) p[i] = alpha * a[i] + (1.0 - alpha) * b[i];
        return p;
    };
    prob.minimizer_unique = true;
    prob.field_rank = n;
    prob.description = "two isotropic quadratic bowls; Pareto set is the anchor segment";
    return prob;
}

/// J_i = half the A_i-weighted squared distance to its anchor. The weighted
/// minimizer solves (alpha*A1 + (1-alpha)*A2) p = alpha*A1 a + (1-alpha)*A2 b,
/// a positive-definite system for every alpha in [0, 1].
inline BenchProblem anisotropic_quadratics(Matrix a1, Vector a, Matrix a2, Vector b) {
    detail::require_spd(a1, "A1");
    detail::require_spd(a2, "A2");
    const std::size_t n = a1.rows();
    if (a.size() != n || b.size() != n || a2.rows() != n) {
        throw std::invalid_argument("anisotropic_quadratics: dimension mismatch");
    }

    const auto quad = [](const Matrix& q, const Vector& c, const Vector& p) {
        double s = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            double row = 0.0;
            for (std::size_t j = 0; j < p.size(); ++j) row += q(i, j) * (p[j] - c[j]);
            s += (p[i] - c[i]) * row;
        }
        return 0.5 * s;
    };
    const auto grad = [](const Matrix& q, const Vector& c, const Vector& p) {
        Vector g(p.size(), 0.0);
        for (std::size_t i = 0; i < p.size(); ++i) {
            for (std::size_t j = 0; j < p.size(); ++j) g[i] += q(i, j) * (p[j] - c[j]);
        }
        return g;
    };

    BenchProblem prob;
    prob.pair.dim = n;
    prob.pair.name = "aniso-quad";
    prob.pair.j1 = [a1, a, quad](const Vector& p) { return quad(a1, a, p); };
    prob.pair.j2 = [a2, b, quad](const Vector& p) { return quad(a2, b, p); };
    prob.pair.grad1 = [a1, a, grad](const Vector& p) { return grad(a1, a, p); };
    prob.pair.grad2 = [a2, b, grad](const Vector& p) { return grad(a2, b, p); };
    prob.weighted_minimizer = [a1, a, a2, b, n](double alpha) {
        Matrix m(n, n);
        Vector rhs(n, 0.0);
        const double beta = 1.0 - alpha;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                m(i, j) = alpha * a1(i, j) + beta * a2(i, j);
                rhs[i] += alpha * a1(i, j) * a[j] + beta * a2(i, j) * b[j];
            }
        }
        const auto l = detail::try_cholesky(m);
        if (!l) throw std::runtime_error("anisotropic oracle: weighted Hessian not positive definite");
        return detail::cholesky_solve(*l, rhs);
    };
    prob.minimizer_unique = true;
    prob.field_rank = n;
    prob.description = "two anisotropic quadratic bowls with distinct curvature";
    return prob;
}

/// Quadratics whose Hessians share the same r-dimensional range, so every
/// gradient either objective can produce lies in that span and any sampled
/// gradient field has (centered) rank at most r. Along directions outside
/// the span the weighted objective is flat, so the minimizer is an affine
/// set; the oracle returns its minimum-norm point.
inline BenchProblem lowrank_gradient_field(std::size_t n, std::size_t r, std::uint64_t seed = 0) {
    if (n == 0 || r == 0) {
        throw std::invalid_argument("lowrank_gradient_field: n and r must be >= 1");
    }
    if (r >= n) {
        throw std::invalid_argument("lowrank_gradient_field: r must be < n");
    }

    // Orthonormal columns u_1..u_r spanning the shared Hessian range.
    RandomStream dir_stream(seed, "bench.lowrank.directions");
    std::vector<Vector> basis;
    basis.reserve(r);
    while (basis.size() < r) {
        Vector v = dir_stream.uniform_vector(n, -1.0, 1.0);
        for (int pass = 0; pass < 2; ++pass) {
            for (const Vector& u : basis) {
                const double proj = dot(u, v);
                for (std::size_t i = 0; i < n; ++i) v[i] -= proj * u[i];
            }
        }
        const double nv = norm2(v);
        if (nv < 1e-8) continue;  // nearly dependent draw; try another
        for (double& x : v) x /= nv;
        basis.push_back(std::move(v));
    }

    RandomStream curv_stream(seed, "bench.lowrank.curvatures");
    Vector s1(r), s2(r);
    for (std::size_t j = 0; j < r; ++j) s1[j] = curv_stream.uniform(0.5, 2.5);
    for (std::size_t j = 0; j < r; ++j) s2[j] = curv_stream.uniform(0.5, 2.5);

    RandomStream center_stream(seed, "bench.lowrank.centers");
    const Vector c1 = center_stream.uniform_vector(n, -1.0, 1.0);
    const Vector c2 = center_stream.uniform_vector(n, -1.0, 1.0);

    // y_j(p) = u_j . (p - c); J = 1/2 sum_j s_j y_j^2; grad = sum_j s_j y_j u_j.
    const auto coords = [basis](const Vector& p, const Vector& c) {
        Vector y(basis.size());
        for (std::size_t j = 0; j < basis.size(); ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < p.size(); ++i) s += basis[j][i] * (p[i] - c[i]);
            y[j] = s;
        }
        return y;
    };
    const auto value = [coords](const Vector& s, const Vector& c, const Vector& p) {
        const Vector y = coords(p, c);
        double total = 0.0;
        for (std::size_t j = 0; j < y.size(); ++j) total += s[j] * y[j] * y[j];
        return 0.5 * total;
    };
    const auto gradient = [basis, coords](const Vector& s, const Vector& c, const Vector& p) {
        const Vector y = coords(p, c);
        Vector g(p.size(), 0.0);
        for (std::size_t j = 0; j < y.size(); ++j) {
            for (std::size_t i = 0; i < p.size(); ++i) g[i] += s[j] * y[j] * basis[j][i];
        }
        return g;
    };

    BenchProblem prob;
    prob.pair.dim = n;
    prob.pair.name = "lowrank";
    prob.pair.j1 = [value, s1, c1](const Vector& p) { return value(s1, c1, p); };
    prob.pair.j2 = [value, s2, c2](const Vector& p) { return value(s2, c2, p); };
    prob.pair.grad1 = [gradient, s1, c1](const Vector& p) { return gradient(s1, c1, p); };
    prob.pair.grad2 = [gradient, s2, c2](const Vector& p) { return gradient(s2, c2, p); };
    prob.weighted_minimizer = [basis, s1, s2, c1, c2, n](double alpha) {
        // Per range direction the weighted objective is a 1-D quadratic in
        // y_j with positive curvature; outside the range it is constant, so
        // the minimum-norm minimizer has no component there.
        const double beta = 1.0 - alpha;
        Vector p(n, 0.0);
        for (std::size_t j = 0; j < basis.size(); ++j) {
            double y1 = 0.0, y2 = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                y1 += basis[j][i] * c1[i];
                y2 += basis[j][i] * c2[i];
            }
            const double y_star =
                (alpha * s1[j] * y1 + beta * s2[j] * y2) / (alpha * s1[j] + beta * s2[j]);
            for (std::size_t i = 0; i < n; ++i) p[i] += y_star * basis[j][i];
        }
        return p;
    };
    prob.minimizer_unique = false;
    prob.field_rank = r;
    prob.description = "quadratics with a shared rank-" + std::to_string(r) +
                       " Hessian range in dimension " + std::to_string(n);
    return prob;
}

/// Catalog used by the command-line tool; every problem's random data flows
/// from the given seed through named streams.
inline BenchProblem make_problem(const std::string& name, std::uint64_t seed) {
    if (name == "iso-quad") {
        RandomStream sa(seed, "bench.iso.a");
        RandomStream sb(seed, "bench.iso.b");
        return isotropic_quadratics(sa.uniform_vector(6, -2.0, 2.0),
                                    sb.uniform_vector(6, -2.0, 2.0));
    }
    if (name == "aniso-quad") {
        const std::size_t n = 5;
        const auto spd_from = [n](RandomStream& s) {
            Matrix w(n, n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) w(i, j) = s.uniform(-1.0, 1.0);
            Matrix a = w.transpose() * w;
            for (std::size_t i = 0; i < n; ++i) a(i, i) += 0.5;
            return a;
        };
        RandomStream w1(seed, "bench.aniso.w1");
        RandomStream w2(seed, "bench.aniso.w2");
        RandomStream sa(seed, "bench.aniso.a");
        RandomStream sb(seed, "bench.aniso.b");
        return anisotropic_quadratics(spd_from(w1), sa.uniform_vector(n, -2.0, 2.0),
                                      spd_from(w2), sb.uniform_vector(n, -2.0, 2.0));
    }
    if (name == "lowrank") {
        return lowrank_gradient_field(8, 2, seed);
    }
    throw std::invalid_argument("make_problem: unknown problem name '" + name +
                                "' (expected iso-quad, aniso-quad, or lowrank)");
}

}  // namespace combospec
