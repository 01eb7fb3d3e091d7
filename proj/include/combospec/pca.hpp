#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>

#include "combospec/matrix.hpp"
#include "combospec/svd.hpp"

namespace combospec {

/// Centered principal component analysis of a data matrix whose rows are
/// samples. Eigenvalues follow the divide-by-m covariance convention
/// C = (1/m) X'X, computed on the centered data.
struct PcaModel {
    Vector mean;           // column averages, length n
    Matrix directions;     // n x d, orthonormal columns
    Vector c_eigenvalues;  // all n eigenvalues of C, non-increasing, zero-padded
    std::size_t d = 0;
    bool degenerate = false;  // centered data is numerically zero
};

/// Subtracts the column mean from every row. Returns the centered matrix and
/// the mean vector.
inline std::pair<Matrix, Vector> center(const Matrix& x) {
    require_data_matrix(x, "center");
    const std::size_t m = x.rows();
    const std::size_t n = x.cols();
    Vector mean(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < m; ++i) acc += x(i, j);
        mean[j] = acc / static_cast<double>(m);
    }
    Matrix c = x;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) c(i, j) -= mean[j];
    return {std::move(c), std::move(mean)};
}

namespace detail {

// Fixes each column's sign so its largest-magnitude entry is positive,
// breaking magnitude ties toward the lowest index. Keeps fitted directions
// reproducible; the spanned subspace is unchanged.
inline void fix_column_signs(Matrix& columns) {
    for (std::size_t j = 0; j < columns.cols(); ++j) {
        std::size_t arg = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < columns.rows(); ++i) {
            const double a = std::abs(columns(i, j));
            if (a > best) {
                best = a;
                arg = i;
            }
        }
        if (columns(arg, j) < 0.0) {
            for (std::size_t i = 0; i < columns.rows(); ++i) columns(i, j) = -columns(i, j);
        }
    }
}

}  // namespace detail

/// Fits PCA with d retained directions. Centers internally; callers pass raw
/// data. Degenerate (zero-variance) input fits successfully with all-zero
/// eigenvalues and the degenerate flag set.
inline PcaModel fit(const Matrix& x, std::size_t d) {
    require_data_matrix(x, "pca::fit");
    const std::size_t m = x.rows();
    const std::size_t n = x.cols();
    const std::size_t q = std::min(m, n);
    if (d < 1 || d > q) {
        throw std::invalid_argument("pca::fit: d must be in [1, min(m, n)]");
    }

    auto [centered, mean] = center(x);
    const SvdFactors f = svd(centered);

    PcaModel model;
    model.mean = std::move(mean);
    model.d = d;
    model.c_eigenvalues.assign(n, 0.0);
    for (std::size_t i = 0; i < q; ++i) {
        model.c_eigenvalues[i] = f.sigma[i] * f.sigma[i] / static_cast<double>(m);
    }
    model.degenerate = f.sigma[0] <= 1e-12 * std::max(1.0, x.frobenius_norm());

    model.directions = Matrix(n, d);
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = 0; i < n; ++i) model.directions(i, j) = f.v(i, j);
    detail::fix_column_signs(model.directions);
    return model;
}

/// Coordinates of x in the retained subspace: directions' * (x - mean).
inline Vector project(const PcaModel& model, const Vector& x) {
    if (x.size() != model.mean.size()) {
        throw std::invalid_argument("pca::project: vector length mismatch");
    }
    Vector centered(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) centered[i] = x[i] - model.mean[i];
    return model.directions.transpose_times(centered);
}

/// Mean squared reconstruction error over rows when only the first d
/// principal directions are kept. Equals the sum of the discarded
/// C-eigenvalues; that identity is a tested contract.
inline double reconstruction_mse(const Matrix& x, std::size_t d) {
    const PcaModel model = fit(x, d);
    auto [centered, mean] = center(x);
    (void)mean;
    double acc = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const Vector xc = centered.row(i);
        const Vector z = model.directions.transpose_times(xc);
        const Vector recon = model.directions.times(z);
        for (std::size_t j = 0; j < xc.size(); ++j) {
            const double r = xc[j] - recon[j];
            acc += r * r;
        }
    }
    return acc / static_cast<double>(x.rows());
}

/// Fraction of total variance captured by each retained direction.
inline Vector explained_variance(const PcaModel& model) {
    double total = 0.0;
    for (double e : model.c_eigenvalues) total += e;
    if (model.degenerate || total <= 0.0) {
        throw std::domain_error("pca::explained_variance: zero total variance");
    }
    Vector out(model.d);
    for (std::size_t i = 0; i < model.d; ++i) out[i] = model.c_eigenvalues[i] / total;
    return out;
}

}  // namespace combospec
