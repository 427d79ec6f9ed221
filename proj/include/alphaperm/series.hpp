// SPDX-License-Identifier: Apache-2.0
//! \file alphaperm/series.hpp
//! Truncated multivariate power series in z_1..z_d, enough to expand
//! det(I - ZA)^{-alpha} and compare it with alpha-permanents of blocks.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "block.hpp"
#include "matrix.hpp"
#include "permanent.hpp"

namespace alphaperm
{

//---------------------------------------------------------------------------//
/*!
 * Dense coefficients over the box 0 <= q_i <= cap_i.
 *
 * Every operation only combines multi-indices j <= k componentwise, so each
 * stored coefficient equals the coefficient of the untruncated result.
 */
template<Scalar T>
class MultiSeries
{
  public:
    using Index = std::vector<unsigned>;

    MultiSeries() = default;

    explicit MultiSeries(Index cap) : cap_(std::move(cap)), stride_(cap_.size())
    {
        std::size_t n = 1;
        for (std::size_t i = 0; i < cap_.size(); ++i)
        {
            stride_[i] = n;
            n *= cap_[i] + 1;
        }
        c_.assign(n, T(0));
    }

    static MultiSeries constant(Index cap, T const& v)
    {
        MultiSeries s(std::move(cap));
        s.c_[0] = v;
        return s;
    }

    std::size_t vars() const { return cap_.size(); }
    Index const& cap() const { return cap_; }
    std::size_t size() const { return c_.size(); }

    //! Linear positions enumerate the box with z_1 varying fastest, so
    //! j <= k componentwise implies position(j) <= position(k).
    std::size_t position(Index const& k) const
    {
        std::size_t p = 0;
        for (std::size_t i = 0; i < k.size(); ++i)
            p += k[i] * stride_[i];
        return p;
    }

    Index index(std::size_t p) const
    {
        Index k(cap_.size());
        for (std::size_t i = 0; i < cap_.size(); ++i)
        {
            k[i] = static_cast<unsigned>(p % (cap_[i] + 1));
            p /= cap_[i] + 1;
        }
        return k;
    }

    bool in_box(Index const& k) const
    {
        for (std::size_t i = 0; i < k.size(); ++i)
            if (k[i] > cap_[i])
                return false;
        return true;
    }

    T& operator[](Index const& k) { return c_[position(k)]; }
    T const& operator[](Index const& k) const { return c_[position(k)]; }
    T& at(std::size_t p) { return c_[p]; }
    T const& at(std::size_t p) const { return c_[p]; }

    MultiSeries& operator+=(MultiSeries const& o)
    {
        for (std::size_t p = 0; p < c_.size(); ++p)
            c_[p] += o.c_[p];
        return *this;
    }

    MultiSeries& operator*=(T const& s)
    {
        for (auto& v : c_)
            v *= s;
        return *this;
    }

    friend MultiSeries operator*(MultiSeries const& a, MultiSeries const& b)
    {
        MultiSeries out(a.cap_);
        for (std::size_t pk = 0; pk < out.size(); ++pk)
        {
            Index k = out.index(pk);
            T acc(0);
            a.for_each_below(k, [&](Index const& j, std::size_t pj) {
                Index rest(k.size());
                for (std::size_t i = 0; i < k.size(); ++i)
                    rest[i] = k[i] - j[i];
                acc += a.c_[pj] * b.c_[b.position(rest)];
            });
            out.c_[pk] = acc;
        }
        return out;
    }

    friend bool operator==(MultiSeries const& a, MultiSeries const& b)
    {
        return a.cap_ == b.cap_ && a.c_ == b.c_;
    }

    //! Calls f(j, position(j)) for every j with 0 <= j <= k.
    template<class F>
    void for_each_below(Index const& k, F&& f) const
    {
        Index j(k.size(), 0);
        while (true)
        {
            f(j, position(j));
            std::size_t i = 0;
            for (; i < k.size(); ++i)
            {
                if (j[i] < k[i])
                {
                    ++j[i];
                    break;
                }
                j[i] = 0;
            }
            if (i == k.size())
                return;
        }
    }

  private:
    Index cap_;
    std::vector<std::size_t> stride_;
    std::vector<T> c_;
};

inline unsigned total_degree(std::vector<unsigned> const& k)
{
    return std::accumulate(k.begin(), k.end(), 0u);
}

//---------------------------------------------------------------------------//
//! log S for S with constant term one, from S * (E log S) = E S with the
//! Euler operator E = sum z_i d/dz_i.
template<Scalar T>
MultiSeries<T> series_log(MultiSeries<T> const& s)
{
    if (s.at(0) != T(1))
        throw domain_error("series logarithm needs constant term 1");
    std::size_t const n = s.size();
    std::vector<T> g(n, T(0)); // g_k = |k| (log S)_k
    MultiSeries<T> out(s.cap());
    for (std::size_t pk = 1; pk < n; ++pk)
    {
        auto k = s.index(pk);
        unsigned const deg = total_degree(k);
        T acc = T(deg) * s.at(pk);
        s.for_each_below(k, [&](auto const& j, std::size_t pj) {
            if (pj == 0 || pj == pk)
                return;
            std::vector<unsigned> rest(k.size());
            for (std::size_t i = 0; i < k.size(); ++i)
                rest[i] = k[i] - j[i];
            acc -= s.at(pj) * g[s.position(rest)];
        });
        g[pk] = acc;
        out.at(pk) = acc / T(deg);
    }
    return out;
}

//! exp T for T with zero constant term: |k| W_k = sum_{0<j<=k} |j| T_j W_{k-j}.
template<Scalar T>
MultiSeries<T> series_exp(MultiSeries<T> const& t)
{
    if (t.at(0) != T(0))
        throw domain_error("series exponential needs constant term 0");
    std::size_t const n = t.size();
    MultiSeries<T> w(t.cap());
    w.at(0) = T(1);
    for (std::size_t pk = 1; pk < n; ++pk)
    {
        auto k = t.index(pk);
        unsigned const deg = total_degree(k);
        T acc(0);
        t.for_each_below(k, [&](auto const& j, std::size_t pj) {
            if (pj == 0)
                return;
            std::vector<unsigned> rest(k.size());
            for (std::size_t i = 0; i < k.size(); ++i)
                rest[i] = k[i] - j[i];
            acc += T(total_degree(j)) * t.at(pj) * w.at(w.position(rest));
        });
        w.at(pk) = acc / T(deg);
    }
    return w;
}

//! S^{-alpha} = exp(-alpha log S).
template<Scalar T>
MultiSeries<T> series_neg_alpha_power(MultiSeries<T> const& s, T const& alpha)
{
    if (s.at(0) != T(1))
        throw domain_error("series power needs constant term 1");
    auto l = series_log(s);
    l *= T(-alpha);
    return series_exp(l);
}

//! Largest dimension accepted by the Leibniz expansion of det(I - ZA).
inline constexpr std::size_t series_det_max_dim = 6;

/*!
 * The polynomial det(I - ZA), Z = diag(z), by Leibniz expansion. Each row i
 * contributes (delta_{i,pi(i)} - z_i A_{i,pi(i)}), so the result is
 * multilinear and every term is a subset monomial z^S.
 */
template<Scalar T>
MultiSeries<T> series_det_IminusZA(SquareMatrix<Rational> const& a, std::vector<unsigned> cap)
{
    std::size_t const d = a.dim();
    if (d > series_det_max_dim)
        throw size_error("det(I - ZA) expansion supports d <= "
                         + std::to_string(series_det_max_dim));
    if (cap.size() != d)
        throw domain_error("cap length does not match matrix dimension");

    MultiSeries<T> out(std::move(cap));
    std::vector<std::size_t> pi(d);
    std::iota(pi.begin(), pi.end(), std::size_t{0});
    std::vector<unsigned> k(d);
    do
    {
        // sign via inversion count
        int sign = 1;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i + 1; j < d; ++j)
                if (pi[i] > pi[j])
                    sign = -sign;

        for (std::size_t subset = 0; subset < (std::size_t{1} << d); ++subset)
        {
            Rational term(sign);
            bool alive = true;
            for (std::size_t i = 0; i < d && alive; ++i)
            {
                bool has_z = (subset >> i) & 1u;
                if (has_z)
                {
                    if (out.cap()[i] < 1 || sgn(a(i, pi[i])) == 0)
                        alive = false;
                    else
                        term *= -a(i, pi[i]);
                }
                else if (pi[i] != i)
                {
                    alive = false;
                }
                k[i] = has_z ? 1u : 0u;
            }
            if (!alive)
                continue;
            if constexpr (is_exact_v<T>)
                out[k] += term;
            else
                out[k] += static_cast<T>(term.get_d());
        }
    } while (std::next_permutation(pi.begin(), pi.end()));
    return out;
}

//---------------------------------------------------------------------------//
struct MacMahonRow
{
    BlockSpec q;
    std::string series_coeff;
    std::string permanent_coeff;
    double residual = 0; //!< exact mode: 0 or 1 (mismatch); float: relative
};

struct MacMahonReport
{
    bool exact = true;
    std::vector<MacMahonRow> rows;
    double max_residual = 0;
    bool pass = true;
};

//! Float-mode acceptance threshold on the relative residual.
inline constexpr double macmahon_float_tolerance = 1e-9;

namespace detail
{
inline std::string format_float(long double v)
{
    std::ostringstream os;
    os.precision(17);
    os << static_cast<double>(v);
    return os.str();
}

template<class F>
void for_each_in_box(std::vector<unsigned> const& cap, F&& f)
{
    std::vector<unsigned> q(cap.size(), 0);
    while (true)
    {
        f(q);
        std::size_t i = 0;
        for (; i < q.size(); ++i)
        {
            if (q[i] < cap[i])
            {
                ++q[i];
                break;
            }
            q[i] = 0;
        }
        if (i == q.size())
            return;
    }
}

inline Rational factorial_product(BlockSpec const& q)
{
    Rational r(1);
    for (auto v : q)
        r *= Rational(factorial(v));
    return r;
}
} // namespace detail

/*!
 * Compare every coefficient of det(I - ZA)^{-alpha} over the box 0..cap with
 * per_alpha(A[q]) / prod q_i!. Exact rational alpha demands equality.
 */
inline MacMahonReport macmahon_check(SquareMatrix<Rational> const& a,
                                     Rational const& alpha,
                                     std::vector<unsigned> const& cap,
                                     std::size_t brute_cap = default_brute_cap)
{
    auto series = series_neg_alpha_power(series_det_IminusZA<Rational>(a, cap), alpha);
    MacMahonReport report;
    report.exact = true;
    detail::for_each_in_box(cap, [&](std::vector<unsigned> const& q) {
        Rational perm = per_alpha_block(a, q, brute_cap).evaluate(alpha)
                        / detail::factorial_product(q);
        Rational const& coeff = series[q];
        MacMahonRow row{q, to_string(coeff), to_string(perm), coeff == perm ? 0.0 : 1.0};
        report.max_residual = std::max(report.max_residual, row.residual);
        report.rows.push_back(std::move(row));
    });
    report.pass = report.max_residual == 0;
    return report;
}

/*!
 * Float mode: extended-precision series at real alpha. The residual is
 * |series - perm| / max(|perm|, 1e-12 * max_q |perm_q|), so coefficients that
 * vanish identically are compared on the scale of the whole expansion.
 */
inline MacMahonReport macmahon_check(SquareMatrix<Rational> const& a,
                                     double alpha,
                                     std::vector<unsigned> const& cap,
                                     std::size_t brute_cap = default_brute_cap)
{
    using Real = long double;
    auto series = series_neg_alpha_power(series_det_IminusZA<Real>(a, cap), Real(alpha));

    std::vector<std::pair<BlockSpec, long double>> perms;
    long double scale = 0;
    detail::for_each_in_box(cap, [&](std::vector<unsigned> const& q) {
        auto poly = per_alpha_block(a, q, brute_cap);
        long double acc = 0;
        auto const& c = poly.coeffs();
        for (std::size_t k = c.size(); k-- > 0;)
            acc = acc * alpha + static_cast<long double>(c[k].get_d());
        acc /= static_cast<long double>(detail::factorial_product(q).get_d());
        scale = std::max(scale, std::fabs(acc));
        perms.emplace_back(q, acc);
    });

    MacMahonReport report;
    report.exact = false;
    for (auto const& [q, perm] : perms)
    {
        long double coeff = series[q];
        long double denom = std::max(std::fabs(perm), 1e-12L * scale);
        double residual = static_cast<double>(std::fabs(coeff - perm) / denom);
        report.max_residual = std::max(report.max_residual, residual);
        report.rows.push_back(
            {q, detail::format_float(coeff), detail::format_float(perm), residual});
    }
    report.pass = report.max_residual <= macmahon_float_tolerance;
    return report;
}

} // namespace alphaperm
