// SPDX-License-Identifier: Apache-2.0
//! \file alphaperm/matrix.hpp
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace alphaperm
{

//---------------------------------------------------------------------------//
/*!
 * Dense d-by-d matrix of a uniform scalar type, stored row-major.
 *
 * The scalar mode ("rational" or "float") is a property of the type \c T,
 * so every entry of a given matrix shares it. Indices are zero-based.
 */
template<Scalar T>
class SquareMatrix
{
  public:
    using value_type = T;

    SquareMatrix() = default;

    explicit SquareMatrix(std::size_t d) : d_(d), data_(d * d, T(0)) {}

    SquareMatrix(std::initializer_list<std::initializer_list<T>> rows)
        : d_(rows.size()), data_()
    {
        data_.reserve(d_ * d_);
        for (auto const& row : rows)
        {
            if (row.size() != d_)
                throw domain_error("matrix rows must all have length d");
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static SquareMatrix identity(std::size_t d)
    {
        SquareMatrix m(d);
        for (std::size_t i = 0; i < d; ++i)
            m(i, i) = T(1);
        return m;
    }

    std::size_t dim() const { return d_; }
    bool empty() const { return d_ == 0; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * d_ + j]; }
    T const& operator()(std::size_t i, std::size_t j) const
    {
        return data_[i * d_ + j];
    }

    std::span<T const> row(std::size_t i) const
    {
        return {data_.data() + i * d_, d_};
    }

    bool is_zero(std::size_t i, std::size_t j) const
    {
        return scalar_traits<T>::is_zero((*this)(i, j));
    }

    //! Principal submatrix on the given (sorted or unsorted) index list.
    SquareMatrix principal(std::span<std::size_t const> keep) const
    {
        SquareMatrix m(keep.size());
        for (std::size_t a = 0; a < keep.size(); ++a)
            for (std::size_t b = 0; b < keep.size(); ++b)
                m(a, b) = (*this)(keep[a], keep[b]);
        return m;
    }

    template<Scalar U>
    SquareMatrix<U> cast() const
    {
        SquareMatrix<U> m(d_);
        for (std::size_t i = 0; i < d_; ++i)
            for (std::size_t j = 0; j < d_; ++j)
            {
                if constexpr (std::is_same_v<U, Rational>)
                {
                    if constexpr (std::is_same_v<T, Rational>)
                        m(i, j) = (*this)(i, j);
                    else
                        m(i, j) = rational_from_double((*this)(i, j));
                }
                else
                {
                    m(i, j) = static_cast<U>(
                        scalar_traits<T>::to_double((*this)(i, j)));
                }
            }
        return m;
    }

    friend bool operator==(SquareMatrix const& a, SquareMatrix const& b)
    {
        return a.d_ == b.d_ && a.data_ == b.data_;
    }

  private:
    std::size_t d_ = 0;
    std::vector<T> data_;
};

template<Scalar T>
SquareMatrix<T> operator*(SquareMatrix<T> const& a, SquareMatrix<T> const& b)
{
    std::size_t const d = a.dim();
    SquareMatrix<T> c(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t k = 0; k < d; ++k)
        {
            if (a.is_zero(i, k))
                continue;
            for (std::size_t j = 0; j < d; ++j)
                c(i, j) += a(i, k) * b(k, j);
        }
    return c;
}

template<Scalar T>
SquareMatrix<T> operator-(SquareMatrix<T> const& a, SquareMatrix<T> const& b)
{
    SquareMatrix<T> c(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j)
            c(i, j) = a(i, j) - b(i, j);
    return c;
}

//! I - P
template<Scalar T>
SquareMatrix<T> identity_minus(SquareMatrix<T> const& p)
{
    return SquareMatrix<T>::identity(p.dim()) - p;
}

namespace detail
{
// Index of the pivot row in column k at or below row k, or d if none.
template<Scalar T>
std::size_t choose_pivot(SquareMatrix<T> const& m, std::size_t k)
{
    std::size_t const d = m.dim();
    if constexpr (is_exact_v<T>)
    {
        for (std::size_t r = k; r < d; ++r)
            if (!m.is_zero(r, k))
                return r;
        return d;
    }
    else
    {
        std::size_t best = d;
        T best_abs = 0;
        for (std::size_t r = k; r < d; ++r)
        {
            T v = std::abs(m(r, k));
            if (v > best_abs)
            {
                best_abs = v;
                best = r;
            }
        }
        return best;
    }
}

template<Scalar T>
void swap_rows(SquareMatrix<T>& m, std::size_t a, std::size_t b)
{
    for (std::size_t j = 0; j < m.dim(); ++j)
        std::swap(m(a, j), m(b, j));
}
} // namespace detail

//---------------------------------------------------------------------------//
//! Determinant by Gaussian elimination (fraction-exact for rationals).
template<Scalar T>
T determinant(SquareMatrix<T> m)
{
    std::size_t const d = m.dim();
    T det(1);
    for (std::size_t k = 0; k < d; ++k)
    {
        std::size_t p = detail::choose_pivot(m, k);
        if (p == d)
            return T(0);
        if (p != k)
        {
            detail::swap_rows(m, p, k);
            det = -det;
        }
        T const pivot = m(k, k);
        det *= pivot;
        for (std::size_t r = k + 1; r < d; ++r)
        {
            if (m.is_zero(r, k))
                continue;
            T const f = m(r, k) / pivot;
            for (std::size_t j = k; j < d; ++j)
                m(r, j) -= f * m(k, j);
        }
    }
    return det;
}

//! Solve M X = B for a square right-hand side block; throws on singular M.
template<Scalar T>
SquareMatrix<T> solve(SquareMatrix<T> m, SquareMatrix<T> b)
{
    std::size_t const d = m.dim();
    for (std::size_t k = 0; k < d; ++k)
    {
        std::size_t p = detail::choose_pivot(m, k);
        if (p == d)
            throw internal_error("singular matrix in linear solve");
        if (p != k)
        {
            detail::swap_rows(m, p, k);
            detail::swap_rows(b, p, k);
        }
        T const pivot = m(k, k);
        for (std::size_t r = 0; r < d; ++r)
        {
            if (r == k || m.is_zero(r, k))
                continue;
            T const f = m(r, k) / pivot;
            for (std::size_t j = k; j < d; ++j)
                m(r, j) -= f * m(k, j);
            for (std::size_t j = 0; j < d; ++j)
                b(r, j) -= f * b(k, j);
        }
    }
    for (std::size_t k = 0; k < d; ++k)
    {
        T const pivot = m(k, k);
        for (std::size_t j = 0; j < d; ++j)
            b(k, j) /= pivot;
    }
    return b;
}

template<Scalar T>
SquareMatrix<T> inverse(SquareMatrix<T> const& m)
{
    return solve(m, SquareMatrix<T>::identity(m.dim()));
}

//! Solve M x = b for a single vector.
template<Scalar T>
std::vector<T> solve(SquareMatrix<T> const& m, std::vector<T> const& b)
{
    std::size_t const d = m.dim();
    SquareMatrix<T> rhs(d);
    for (std::size_t i = 0; i < d; ++i)
        rhs(i, 0) = b[i];
    SquareMatrix<T> x = solve(m, std::move(rhs));
    std::vector<T> out(d);
    for (std::size_t i = 0; i < d; ++i)
        out[i] = x(i, 0);
    return out;
}

} // namespace alphaperm
