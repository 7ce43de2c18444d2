#pragma once

#include "bopmat/rational.hpp"

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace bopmat {

struct SingularMatrixError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Dense row-major matrix over an exact or floating scalar.
template <typename T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Matrix transposed() const {
        Matrix out(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
        return out;
    }

    Matrix operator*(const Matrix& rhs) const {
        if (cols_ != rhs.rows_) throw std::invalid_argument("Matrix multiply: dimension mismatch");
        Matrix out(rows_, rhs.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const T& a = (*this)(i, k);
                if (a == T(0)) continue;
                for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
            }
        return out;
    }

    std::vector<T> operator*(std::span<const T> x) const {
        if (cols_ != x.size()) throw std::invalid_argument("Matrix apply: dimension mismatch");
        std::vector<T> out(rows_, T(0));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * x[j];
        return out;
    }

    /// Returns A^T x without materializing the transpose.
    std::vector<T> transpose_times(std::span<const T> x) const {
        if (rows_ != x.size()) throw std::invalid_argument("Matrix transpose apply: dimension mismatch");
        std::vector<T> out(cols_, T(0));
        for (std::size_t i = 0; i < rows_; ++i) {
            if (x[i] == T(0)) continue;
            for (std::size_t j = 0; j < cols_; ++j) out[j] += (*this)(i, j) * x[i];
        }
        return out;
    }

    Matrix& operator+=(const Matrix& rhs) {
        if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw std::invalid_argument("Matrix add: dimension mismatch");
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
        return *this;
    }

    Matrix operator+(const Matrix& rhs) const {
        Matrix out = *this;
        out += rhs;
        return out;
    }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<T> data_;
};

inline Matrix<double> to_double_matrix(const Matrix<Rational>& m) {
    Matrix<double> out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = to_double(m(i, j));
    return out;
}

template <typename T>
Matrix<T> cast_matrix(const Matrix<Rational>& m) {
    Matrix<T> out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = scalar_cast<T>(m(i, j));
    return out;
}

template <typename T>
std::vector<T> cast_vector(const std::vector<Rational>& v) {
    std::vector<T> out;
    out.reserve(v.size());
    for (const auto& x : v) out.push_back(scalar_cast<T>(x));
    return out;
}

template <typename T>
T dot(std::span<const T> a, std::span<const T> b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
    T acc(0);
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

/// Max-norm reported in double regardless of the scalar type.
template <typename T>
double max_abs(std::span<const T> v) {
    double m = 0.0;
    for (const auto& x : v) {
        double val;
        if constexpr (std::is_same_v<T, Rational>) {
            val = std::abs(to_double(x));
        } else {
            val = std::abs(static_cast<double>(x));
        }
        if (val > m) m = val;
    }
    return m;
}

/// Gaussian elimination with partial pivoting; exact when T is Rational.
template <typename T>
std::vector<T> solve_dense(Matrix<T> a, std::vector<T> b) {
    const std::size_t n = a.rows();
    if (a.cols() != n || b.size() != n) throw std::invalid_argument("solve_dense: dimension mismatch");
    using std::abs;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (abs(a(r, col)) > abs(a(pivot, col))) pivot = r;
        if (a(pivot, col) == T(0)) throw SingularMatrixError("solve_dense: singular matrix");
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(pivot, j));
            std::swap(b[col], b[pivot]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            if (a(r, col) == T(0)) continue;
            const T factor = a(r, col) / a(col, col);
            a(r, col) = T(0);
            for (std::size_t j = col + 1; j < n; ++j) a(r, j) -= factor * a(col, j);
            b[r] -= factor * b[col];
        }
    }
    std::vector<T> x(n, T(0));
    for (std::size_t ri = n; ri-- > 0;) {
        T acc = b[ri];
        for (std::size_t j = ri + 1; j < n; ++j) acc -= a(ri, j) * x[j];
        x[ri] = acc / a(ri, ri);
    }
    if constexpr (std::is_floating_point_v<T>) {
        for (const T v : x)
            if (!std::isfinite(v)) throw SingularMatrixError("solve_dense: non-finite solution");
    }
    return x;
}

}  // namespace bopmat
