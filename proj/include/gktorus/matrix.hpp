// Small dense matrices with exact linear algebra over the rationals.
#pragma once

#include <gktorus/rational.hpp>

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace gktorus {

template <class T>
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(std::size_t rows, std::size_t cols, const T& fill = T())
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n, T(0));
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = T(1);
        }
        return m;
    }

    static Matrix from_rows(std::initializer_list<std::initializer_list<T>> rows) {
        Matrix m(rows.size(), rows.size() ? rows.begin()->size() : 0);
        std::size_t i = 0;
        for (const auto& row : rows) {
            if (row.size() != m.cols_) {
                throw std::invalid_argument("ragged initializer for Matrix");
            }
            std::size_t j = 0;
            for (const auto& x : row) {
                m(i, j++) = x;
            }
            ++i;
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

    Matrix operator+(const Matrix& o) const {
        check_same_shape(o);
        Matrix r = *this;
        for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] += o.data_[i];
        return r;
    }

    Matrix operator-(const Matrix& o) const {
        check_same_shape(o);
        Matrix r = *this;
        for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] -= o.data_[i];
        return r;
    }

    Matrix operator-() const {
        Matrix r = *this;
        for (auto& x : r.data_) x = -x;
        return r;
    }

    Matrix operator*(const Matrix& o) const {
        if (cols_ != o.rows_) {
            throw std::invalid_argument("matrix product shape mismatch");
        }
        Matrix r(rows_, o.cols_, T(0));
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t k = 0; k < cols_; ++k) {
                const T& a = (*this)(i, k);
                if (a == T(0)) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) {
                    r(i, j) += a * o(k, j);
                }
            }
        }
        return r;
    }

    Matrix scaled(const T& s) const {
        Matrix r = *this;
        for (auto& x : r.data_) x *= s;
        return r;
    }

    Matrix transposed() const {
        Matrix r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        }
        return r;
    }

    std::vector<T> column(std::size_t j) const {
        std::vector<T> c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }

    std::vector<T> apply(const std::vector<T>& v) const {
        if (v.size() != cols_) {
            throw std::invalid_argument("matrix-vector shape mismatch");
        }
        std::vector<T> r(rows_, T(0));
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
        }
        return r;
    }

private:
    void check_same_shape(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) {
            throw std::invalid_argument("matrix shape mismatch");
        }
    }

    std::size_t rows_;
    std::size_t cols_;
    std::vector<T> data_;
};

using QMatrix = Matrix<Rational>;
using DMatrix = Matrix<double>;

inline DMatrix to_double_matrix(const QMatrix& m) {
    DMatrix r(m.rows(), m.cols(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = to_double(m(i, j));
    }
    return r;
}

inline double max_abs(const DMatrix& m) {
    double r = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) r = std::max(r, std::fabs(m(i, j)));
    }
    return r;
}

inline Rational max_abs(const QMatrix& m) {
    Rational r(0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            Rational a = abs(m(i, j));
            if (a > r) r = a;
        }
    }
    return r;
}

inline QMatrix block_diag(const QMatrix& a, const QMatrix& b) {
    QMatrix r(a.rows() + b.rows(), a.cols() + b.cols(), Rational(0));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) r(a.rows() + i, a.cols() + j) = b(i, j);
    return r;
}

/// Result of exact row reduction: reduced matrix, pivot column per pivot row.
struct Rref {
    QMatrix reduced;
    std::vector<std::size_t> pivot_cols;
    std::size_t rank() const { return pivot_cols.size(); }
};

inline Rref rref(QMatrix m) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t sel = row;
        while (sel < m.rows() && m(sel, col) == 0) ++sel;
        if (sel == m.rows()) continue;
        if (sel != row) {
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(sel, j), m(row, j));
        }
        Rational inv = Rational(1) / m(row, col);
        for (std::size_t j = col; j < m.cols(); ++j) m(row, j) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == row || m(i, col) == 0) continue;
            Rational f = m(i, col);
            for (std::size_t j = col; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return Rref{std::move(m), std::move(pivots)};
}

inline std::size_t rank(const QMatrix& m) {
    return rref(m).rank();
}

/// Basis of the right kernel from a precomputed reduction of the matrix.
inline std::vector<std::vector<Rational>> kernel_basis(const Rref& r) {
    std::size_t cols = r.reduced.cols();
    std::vector<bool> is_pivot(cols, false);
    for (std::size_t c : r.pivot_cols) is_pivot[c] = true;
    std::vector<std::vector<Rational>> basis;
    for (std::size_t free_col = 0; free_col < cols; ++free_col) {
        if (is_pivot[free_col]) continue;
        std::vector<Rational> v(cols, Rational(0));
        v[free_col] = 1;
        for (std::size_t pr = 0; pr < r.pivot_cols.size(); ++pr) {
            v[r.pivot_cols[pr]] = -r.reduced(pr, free_col);
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Basis of the right kernel, one vector per free column, deterministic order.
inline std::vector<std::vector<Rational>> kernel_basis(const QMatrix& m) {
    return kernel_basis(rref(m));
}

/// Solves m x = t column by column; empty when some column of t falls
/// outside the column span of m. Free variables are set to zero.
inline std::optional<QMatrix> solve_columns(const QMatrix& m, const QMatrix& t) {
    if (m.rows() != t.rows()) {
        throw std::invalid_argument("solve shape mismatch");
    }
    QMatrix aug(m.rows(), m.cols() + t.cols(), Rational(0));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
        for (std::size_t j = 0; j < t.cols(); ++j) aug(i, m.cols() + j) = t(i, j);
    }
    Rref r = rref(std::move(aug));
    for (std::size_t c : r.pivot_cols) {
        if (c >= m.cols()) return std::nullopt;
    }
    QMatrix x(m.cols(), t.cols(), Rational(0));
    for (std::size_t pr = 0; pr < r.pivot_cols.size(); ++pr) {
        for (std::size_t j = 0; j < t.cols(); ++j) {
            x(r.pivot_cols[pr], j) = r.reduced(pr, m.cols() + j);
        }
    }
    return x;
}

inline Rational det(QMatrix m) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("determinant of non-square matrix");
    }
    Rational d(1);
    for (std::size_t col = 0; col < m.cols(); ++col) {
        std::size_t sel = col;
        while (sel < m.rows() && m(sel, col) == 0) ++sel;
        if (sel == m.rows()) return Rational(0);
        if (sel != col) {
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(sel, j), m(col, j));
            d = -d;
        }
        d *= m(col, col);
        Rational inv = Rational(1) / m(col, col);
        for (std::size_t i = col + 1; i < m.rows(); ++i) {
            if (m(i, col) == 0) continue;
            Rational f = m(i, col) * inv;
            for (std::size_t j = col; j < m.cols(); ++j) m(i, j) -= f * m(col, j);
        }
    }
    return d;
}

inline QMatrix inverse(const QMatrix& m) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("inverse of non-square matrix");
    }
    std::size_t n = m.rows();
    QMatrix aug(n, 2 * n, Rational(0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
        aug(i, n + i) = 1;
    }
    Rref r = rref(std::move(aug));
    if (r.rank() < n || r.pivot_cols.back() >= n) {
        throw std::domain_error("matrix is singular");
    }
    QMatrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) inv(i, j) = r.reduced(i, n + j);
    }
    return inv;
}

/// Solves M x = b exactly; empty result when inconsistent.
inline std::optional<std::vector<Rational>> solve(const QMatrix& m, const std::vector<Rational>& b) {
    if (b.size() != m.rows()) {
        throw std::invalid_argument("solve shape mismatch");
    }
    QMatrix aug(m.rows(), m.cols() + 1);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
        aug(i, m.cols()) = b[i];
    }
    Rref r = rref(std::move(aug));
    for (std::size_t c : r.pivot_cols) {
        if (c == m.cols()) return std::nullopt;
    }
    std::vector<Rational> x(m.cols(), Rational(0));
    for (std::size_t pr = 0; pr < r.pivot_cols.size(); ++pr) {
        x[r.pivot_cols[pr]] = r.reduced(pr, m.cols());
    }
    return x;
}

}  // namespace gktorus
