#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "combospec/matrix.hpp"

namespace combospec {

/// Full singular value decomposition X = U * Sigma * V'.
/// U is m x m orthogonal, V is n x n orthogonal, sigma holds the
/// q = min(m, n) singular values in non-increasing order.
struct SvdFactors {
    Matrix u;
    Vector sigma;
    Matrix v;
};

/// Eigenvalues of the Gram matrix G = X * X', i.e. the squared singular
/// values of X padded with zeros up to m when m > n. Non-increasing.
struct GramSpectrum {
    Vector eigenvalues;
};

namespace detail {

// Off-diagonal convergence threshold for the Jacobi sweeps, relative to the
// geometric mean of the paired column norms. Coarser than machine epsilon so
// the sweeps terminate instead of chasing round-off, but far below the
// 1e-10 orthogonality budget of SvdFactors.
inline constexpr double kJacobiTol = 1e-13;
inline constexpr int kMaxJacobiSweeps = 100;

// Columns whose norm falls this far below the Frobenius norm of the input
// are numerically null: annihilation residue, not data. They are frozen out
// of further rotations; without the freeze, pairs of residue columns keep
// re-annihilating each other toward denormals, where the relative rotation
// threshold loses meaning and the sweeps never settle.
inline constexpr double kColumnFloorRel = 1e-18;

// Appends orthonormal columns to u (filled up to `filled`) until all m
// columns are populated. Candidates are the standard basis vectors; the one
// with the largest residual against the current columns is taken each time.
inline void complete_orthonormal_basis(Matrix& u, std::size_t filled) {
    const std::size_t m = u.rows();
    while (filled < m) {
        double best_norm = -1.0;
        Vector best;
        for (std::size_t cand = 0; cand < m; ++cand) {
            Vector r(m, 0.0);
            r[cand] = 1.0;
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t k = 0; k < filled; ++k) {
                    double proj = 0.0;
                    for (std::size_t i = 0; i < m; ++i) proj += u(i, k) * r[i];
                    for (std::size_t i = 0; i < m; ++i) r[i] -= proj * u(i, k);
                }
            }
            const double rn = norm2(r);
            if (rn > best_norm) {
                best_norm = rn;
                best = std::move(r);
            }
        }
        for (std::size_t i = 0; i < m; ++i) u(i, filled) = best[i] / best_norm;
        ++filled;
    }
}

}  // namespace detail

/// One-sided Jacobi SVD: plane rotations orthogonalize the columns of a
/// working copy of X while the same rotations accumulate into V. At
/// convergence the column norms are the singular values and the normalized
/// columns are the corresponding left singular vectors.
inline SvdFactors svd(const Matrix& x) {
    require_data_matrix(x, "svd");
    const std::size_t m = x.rows();
    const std::size_t n = x.cols();
    const std::size_t q = std::min(m, n);

    // One-sided Jacobi wants at least as many rows as columns; a wide input
    // would force n - m columns to collapse to annihilation residue. Factor
    // the transpose instead and swap the roles of U and V.
    if (m < n) {
        SvdFactors t = svd(x.transpose());
        return SvdFactors{std::move(t.v), std::move(t.sigma), std::move(t.u)};
    }

    Matrix a = x;
    Matrix v = Matrix::identity(n);
    const double frob = x.frobenius_norm();
    const double floor2 = (frob * detail::kColumnFloorRel) * (frob * detail::kColumnFloorRel);

    int sweep = 0;
    for (; sweep < detail::kMaxJacobiSweeps; ++sweep) {
        std::size_t rotated = 0;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t r = p + 1; r < n; ++r) {
                double app = 0.0, arr = 0.0, apr = 0.0;
                for (std::size_t i = 0; i < m; ++i) {
                    const double ap = a(i, p);
                    const double ar = a(i, r);
                    app += ap * ap;
                    arr += ar * ar;
                    apr += ap * ar;
                }
                if (apr == 0.0) continue;
                if (app <= floor2 || arr <= floor2) continue;
                if (std::abs(apr) <= detail::kJacobiTol * std::sqrt(app * arr)) continue;

                const double zeta = (arr - app) / (2.0 * apr);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;

                for (std::size_t i = 0; i < m; ++i) {
                    const double ap = a(i, p);
                    const double ar = a(i, r);
                    a(i, p) = c * ap - s * ar;
                    a(i, r) = s * ap + c * ar;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vp = v(i, p);
                    const double vr = v(i, r);
                    v(i, p) = c * vp - s * vr;
                    v(i, r) = s * vp + c * vr;
                }
                ++rotated;
            }
        }
        if (rotated == 0) break;
    }
    if (sweep >= detail::kMaxJacobiSweeps) {
        throw std::runtime_error("svd: Jacobi iteration did not converge after " +
                                 std::to_string(sweep) + " sweeps");
    }

    Vector col_norm(n);
    for (std::size_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < m; ++i) acc += a(i, j) * a(i, j);
        col_norm[j] = std::sqrt(acc);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t lhs, std::size_t rhs) { return col_norm[lhs] > col_norm[rhs]; });

    SvdFactors f;
    f.sigma.resize(q);
    for (std::size_t j = 0; j < q; ++j) f.sigma[j] = col_norm[order[j]];

    f.v = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) f.v(i, j) = v(i, order[j]);

    f.u = Matrix(m, m);
    const double sigma_max = f.sigma.empty() ? 0.0 : f.sigma[0];
    const double null_tol =
        sigma_max * static_cast<double>(std::max(m, n)) * std::numeric_limits<double>::epsilon();
    std::size_t filled = 0;
    for (std::size_t j = 0; j < q; ++j) {
        if (f.sigma[j] <= null_tol) break;  // sorted, so the rest are null too
        for (std::size_t i = 0; i < m; ++i) f.u(i, filled) = a(i, order[j]) / f.sigma[j];
        ++filled;
    }
    detail::complete_orthonormal_basis(f.u, filled);
    return f;
}

/// The q = min(m, n) singular values of X, non-increasing.
inline Vector singular_values(const Matrix& x) { return svd(x).sigma; }

/// Spectrum of G = X * X': sigma_i(X)^2 for i <= min(m, n), then exact zeros
/// padded up to m rows when m > n.
inline GramSpectrum gram_spectrum(const Matrix& x) {
    const Vector s = singular_values(x);
    GramSpectrum g;
    g.eigenvalues.assign(x.rows(), 0.0);
    for (std::size_t i = 0; i < s.size() && i < g.eigenvalues.size(); ++i) {
        g.eigenvalues[i] = s[i] * s[i];
    }
    return g;
}

/// max_i |sigma_i(A) - sigma_i(A + B)|. The singular value perturbation
/// inequality bounds this by sigma_1(B); the bound is a tested contract,
/// not an assumption of this routine.
inline double sv_perturbation_gap(const Matrix& a, const Matrix& b) {
    if (!a.same_shape(b)) {
        throw std::invalid_argument("sv_perturbation_gap: shape mismatch");
    }
    const Vector sa = singular_values(a);
    const Vector sab = singular_values(a + b);
    double gap = 0.0;
    for (std::size_t i = 0; i < sa.size(); ++i) gap = std::max(gap, std::abs(sa[i] - sab[i]));
    return gap;
}

}  // namespace combospec
