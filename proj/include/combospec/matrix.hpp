#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace combospec {

using Vector = std::vector<double>;

/// Dense row-major matrix of doubles. Throughout the library the rows of a
/// data matrix are the sample vectors of a dataset.
class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    Matrix(std::initializer_list<std::initializer_list<double>> rows) {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_) {
                throw std::invalid_argument("Matrix: ragged initializer");
            }
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Vector row(std::size_t i) const {
        return Vector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                      data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
    }

    void set_row(std::size_t i, const Vector& r) {
        if (r.size() != cols_) throw std::invalid_argument("Matrix::set_row: length mismatch");
        std::copy(r.begin(), r.end(), data_.begin() + static_cast<std::ptrdiff_t>(i * cols_));
    }

    Vector column(std::size_t j) const {
        Vector c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    Matrix operator*(const Matrix& rhs) const {
        if (cols_ != rhs.rows_) throw std::invalid_argument("Matrix::operator*: inner dimension mismatch");
        Matrix out(rows_, rhs.cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t k = 0; k < cols_; ++k) {
                const double a = (*this)(i, k);
                if (a == 0.0) continue;
                for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
            }
        }
        return out;
    }

    /// this * v
    Vector times(const Vector& v) const {
        if (v.size() != cols_) throw std::invalid_argument("Matrix::times: length mismatch");
        Vector out(rows_, 0.0);
        for (std::size_t i = 0; i < rows_; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < cols_; ++j) acc += (*this)(i, j) * v[j];
            out[i] = acc;
        }
        return out;
    }

    /// transpose(this) * v
    Vector transpose_times(const Vector& v) const {
        if (v.size() != rows_) throw std::invalid_argument("Matrix::transpose_times: length mismatch");
        Vector out(cols_, 0.0);
        for (std::size_t i = 0; i < rows_; ++i) {
            const double a = v[i];
            for (std::size_t j = 0; j < cols_; ++j) out[j] += (*this)(i, j) * a;
        }
        return out;
    }

    Matrix operator+(const Matrix& rhs) const {
        require_same_shape(rhs, "operator+");
        Matrix out = *this;
        for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += rhs.data_[i];
        return out;
    }

    Matrix operator-(const Matrix& rhs) const {
        require_same_shape(rhs, "operator-");
        Matrix out = *this;
        for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= rhs.data_[i];
        return out;
    }

    Matrix scaled(double s) const {
        Matrix out = *this;
        for (double& v : out.data_) v *= s;
        return out;
    }

    double frobenius_norm() const {
        double acc = 0.0;
        for (double v : data_) acc += v * v;
        return std::sqrt(acc);
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : data_) m = std::max(m, std::abs(v));
        return m;
    }

    bool all_finite() const {
        for (double v : data_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    bool same_shape(const Matrix& rhs) const { return rows_ == rhs.rows_ && cols_ == rhs.cols_; }

private:
    void require_same_shape(const Matrix& rhs, const char* op) const {
        if (!same_shape(rhs)) {
            throw std::invalid_argument(std::string("Matrix::") + op + ": shape mismatch");
        }
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline double dot(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

inline double norm2(const Vector& v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return std::sqrt(acc);
}

inline bool all_finite(const Vector& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

/// Rejects empty and non-finite data matrices at operation entry points.
inline void require_data_matrix(const Matrix& x, const char* where) {
    if (x.rows() == 0 || x.cols() == 0) {
        throw std::invalid_argument(std::string(where) + ": matrix must be at least 1x1");
    }
    if (!x.all_finite()) {
        throw std::invalid_argument(std::string(where) + ": matrix has non-finite entries");
    }
}

}  // namespace combospec
