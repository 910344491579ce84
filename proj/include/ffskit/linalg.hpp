#pragma once

#include "ffskit/numberfield.hpp"
#include "ffskit/rational.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace ffskit {

template <class K>
struct FieldTraits;

template <>
struct FieldTraits<Rational> {
    static Rational zero_like(const Rational&) { return 0; }
    static Rational one_like(const Rational&) { return 1; }
    static bool is_zero(const Rational& x) { return sgn(x) == 0; }
    static Rational inverse(const Rational& x) { return 1 / x; }
};

template <>
struct FieldTraits<FieldElem> {
    static FieldElem zero_like(const FieldElem& x) { return x.field().zero(); }
    static FieldElem one_like(const FieldElem& x) { return x.field().one(); }
    static bool is_zero(const FieldElem& x) { return x.is_zero(); }
    static FieldElem inverse(const FieldElem& x) { return x.inverse(); }
};

/// Dense row-major matrix over an exact field.
template <class K>
class Matrix {
public:
    Matrix(std::size_t rows, std::size_t cols, const K& fill) : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

    static Matrix identity(std::size_t n, const K& like)
    {
        Matrix m(n, n, FieldTraits<K>::zero_like(like));
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = FieldTraits<K>::one_like(like);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    K& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const K& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
    const std::vector<K>& data() const { return a_; }

    Matrix transpose() const
    {
        Matrix t(*this);
        t.rows_ = cols_;
        t.cols_ = rows_;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                t(j, i) = (*this)(i, j);
        return t;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b)
    {
        if (a.cols_ != b.rows_)
            throw std::invalid_argument("matrix shape mismatch");
        const K& like = a.a_.empty() ? b.a_.front() : a.a_.front();
        Matrix c(a.rows_, b.cols_, FieldTraits<K>::zero_like(like));
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                if (FieldTraits<K>::is_zero(a(i, k)))
                    continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    c(i, j) += a(i, k) * b(k, j);
            }
        return c;
    }

    friend Matrix operator+(Matrix a, const Matrix& b)
    {
        for (std::size_t i = 0; i < a.a_.size(); ++i)
            a.a_[i] += b.a_[i];
        return a;
    }

    friend Matrix operator-(Matrix a, const Matrix& b)
    {
        for (std::size_t i = 0; i < a.a_.size(); ++i)
            a.a_[i] -= b.a_[i];
        return a;
    }

    friend bool operator==(const Matrix& a, const Matrix& b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<K> a_;
};

/// Reduced row echelon form in place; returns pivot columns.
template <class K>
std::vector<std::size_t> rref(Matrix<K>& m)
{
    using T = FieldTraits<K>;
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t p = row;
        while (p < m.rows() && T::is_zero(m(p, col)))
            ++p;
        if (p == m.rows())
            continue;
        if (p != row)
            for (std::size_t j = 0; j < m.cols(); ++j)
                std::swap(m(p, j), m(row, j));
        const K inv = T::inverse(m(row, col));
        for (std::size_t j = col; j < m.cols(); ++j)
            m(row, j) = m(row, j) * inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == row || T::is_zero(m(i, col)))
                continue;
            const K f = m(i, col);
            for (std::size_t j = col; j < m.cols(); ++j)
                m(i, j) -= f * m(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

template <class K>
std::size_t rank(Matrix<K> m)
{
    return rref(m).size();
}

template <class K>
K determinant(Matrix<K> m)
{
    using T = FieldTraits<K>;
    if (m.rows() != m.cols())
        throw std::invalid_argument("determinant of non-square matrix");
    const std::size_t n = m.rows();
    K det = T::one_like(m(0, 0));
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t p = col;
        while (p < n && T::is_zero(m(p, col)))
            ++p;
        if (p == n)
            return T::zero_like(det);
        if (p != col) {
            for (std::size_t j = 0; j < n; ++j)
                std::swap(m(p, j), m(col, j));
            det = -det;
        }
        det *= m(col, col);
        const K inv = T::inverse(m(col, col));
        for (std::size_t i = col + 1; i < n; ++i) {
            if (T::is_zero(m(i, col)))
                continue;
            const K f = m(i, col) * inv;
            for (std::size_t j = col; j < n; ++j)
                m(i, j) -= f * m(col, j);
        }
    }
    return det;
}

/// Inverse of a square matrix; std::nullopt when singular.
template <class K>
std::optional<Matrix<K>> inverse(const Matrix<K>& m)
{
    const std::size_t n = m.rows();
    Matrix<K> aug(n, 2 * n, FieldTraits<K>::zero_like(m(0, 0)));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            aug(i, j) = m(i, j);
        aug(i, n + i) = FieldTraits<K>::one_like(m(0, 0));
    }
    const auto pivots = rref(aug);
    if (pivots.size() < n || pivots[n - 1] != n - 1)
        return std::nullopt;
    Matrix<K> inv(n, n, aug(0, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            inv(i, j) = aug(i, n + j);
    return inv;
}

/// Some solution x of A x = b, or std::nullopt when inconsistent.
template <class K>
std::optional<std::vector<K>> solve(const Matrix<K>& a, const std::vector<K>& b)
{
    const std::size_t r = a.rows();
    const std::size_t c = a.cols();
    const K zero = FieldTraits<K>::zero_like(b.front());
    Matrix<K> aug(r, c + 1, zero);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < c; ++j)
            aug(i, j) = a(i, j);
        aug(i, c) = b[i];
    }
    const auto pivots = rref(aug);
    if (!pivots.empty() && pivots.back() == c)
        return std::nullopt;
    std::vector<K> x(c, zero);
    for (std::size_t k = 0; k < pivots.size(); ++k)
        x[pivots[k]] = aug(k, c);
    return x;
}

/// Basis of the right kernel {x : A x = 0}, as vectors.
template <class K>
std::vector<std::vector<K>> kernel(Matrix<K> a, const K& like)
{
    const auto pivots = rref(a);
    const K zero = FieldTraits<K>::zero_like(like);
    const K one = FieldTraits<K>::one_like(like);
    std::vector<bool> is_pivot(a.cols(), false);
    for (auto p : pivots)
        is_pivot[p] = true;
    std::vector<std::vector<K>> basis;
    for (std::size_t free = 0; free < a.cols(); ++free) {
        if (is_pivot[free])
            continue;
        std::vector<K> v(a.cols(), zero);
        v[free] = one;
        for (std::size_t k = 0; k < pivots.size(); ++k)
            v[pivots[k]] = -a(k, free);
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace ffskit
