#pragma once

#include "complex_rational.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace qsharm {

inline bool is_zero_scalar(const ComplexRational& z) { return z.is_zero(); }
inline bool is_zero_scalar(const mpq_class& q) { return sgn(q) == 0; }

// Dense row-major matrix over an exact field.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

    static Matrix identity(std::size_t n)
    {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    friend Matrix operator*(const Matrix& a, const Matrix& b)
    {
        if (a.cols_ != b.rows_) throw std::invalid_argument("Matrix: shape mismatch in product");
        Matrix r(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                if (is_zero_scalar(a(i, k))) continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    if (!is_zero_scalar(b(k, j))) r(i, j) += a(i, k) * b(k, j);
            }
        return r;
    }
    friend Matrix operator+(Matrix a, const Matrix& b)
    {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("Matrix: shape mismatch");
        for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
        return a;
    }
    friend Matrix operator-(Matrix a, const Matrix& b)
    {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("Matrix: shape mismatch");
        for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
        return a;
    }
    friend Matrix operator*(const T& s, Matrix a)
    {
        for (auto& v : a.data_) v = s * v;
        return a;
    }
    friend bool operator==(const Matrix&, const Matrix&) = default;

    bool is_zero() const
    {
        for (const auto& v : data_)
            if (!is_zero_scalar(v)) return false;
        return true;
    }

    // stack rows of b below a
    static Matrix vstack(const Matrix& a, const Matrix& b)
    {
        if (a.cols_ != b.cols_) throw std::invalid_argument("Matrix: column mismatch in vstack");
        Matrix r(a.rows_ + b.rows_, a.cols_);
        std::copy(a.data_.begin(), a.data_.end(), r.data_.begin());
        std::copy(b.data_.begin(), b.data_.end(), r.data_.begin() + static_cast<std::ptrdiff_t>(a.data_.size()));
        return r;
    }

    Matrix columns(const std::vector<std::size_t>& idx) const
    {
        Matrix r(rows_, idx.size());
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < idx.size(); ++j) r(i, j) = (*this)(i, idx[j]);
        return r;
    }

    // In-place reduced row echelon form; returns pivot columns.
    std::vector<std::size_t> rref()
    {
        std::vector<std::size_t> pivots;
        std::size_t row = 0;
        for (std::size_t col = 0; col < cols_ && row < rows_; ++col) {
            std::size_t p = row;
            while (p < rows_ && is_zero_scalar((*this)(p, col))) ++p;
            if (p == rows_) continue;
            swap_rows(p, row);
            T inv = T(1) / (*this)(row, col);
            for (std::size_t j = col; j < cols_; ++j)
                if (!is_zero_scalar((*this)(row, j))) (*this)(row, j) = (*this)(row, j) * inv;
            for (std::size_t i = 0; i < rows_; ++i) {
                if (i == row || is_zero_scalar((*this)(i, col))) continue;
                T f = (*this)(i, col);
                for (std::size_t j = col; j < cols_; ++j)
                    if (!is_zero_scalar((*this)(row, j))) (*this)(i, j) -= f * (*this)(row, j);
            }
            pivots.push_back(col);
            ++row;
        }
        return pivots;
    }

    std::size_t rank() const
    {
        Matrix m = *this;
        return m.rref().size();
    }

    // Basis of {v : A v = 0}, one column vector per entry.
    std::vector<std::vector<T>> nullspace() const
    {
        Matrix m = *this;
        auto piv = m.rref();
        std::vector<bool> is_pivot(cols_, false);
        for (auto c : piv) is_pivot[c] = true;
        std::vector<std::vector<T>> basis;
        for (std::size_t f = 0; f < cols_; ++f) {
            if (is_pivot[f]) continue;
            std::vector<T> v(cols_, T(0));
            v[f] = T(1);
            for (std::size_t r = 0; r < piv.size(); ++r)
                if (!is_zero_scalar(m(r, f))) v[piv[r]] = -m(r, f);
            basis.push_back(std::move(v));
        }
        return basis;
    }

    // Solve A X = B; nullopt when inconsistent. Free variables are set to zero.
    std::optional<Matrix> solve(const Matrix& b) const
    {
        if (b.rows_ != rows_) throw std::invalid_argument("Matrix: shape mismatch in solve");
        Matrix aug(rows_, cols_ + b.cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) aug(i, j) = (*this)(i, j);
            for (std::size_t j = 0; j < b.cols_; ++j) aug(i, cols_ + j) = b(i, j);
        }
        auto piv = aug.rref();
        Matrix x(cols_, b.cols_);
        for (std::size_t r = 0; r < piv.size(); ++r) {
            if (piv[r] >= cols_) return std::nullopt;
            for (std::size_t j = 0; j < b.cols_; ++j) x(piv[r], j) = aug(r, cols_ + j);
        }
        return x;
    }

private:
    void swap_rows(std::size_t a, std::size_t b)
    {
        if (a == b) return;
        for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
    }

    std::size_t rows_ = 0, cols_ = 0;
    std::vector<T> data_;
};

} // namespace qsharm
