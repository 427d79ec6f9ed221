// SPDX-License-Identifier: Apache-2.0
//! \file alphaperm/polynomial.hpp
#pragma once

#include <cstddef>
#include <ostream>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "rational.hpp"

namespace alphaperm
{

//---------------------------------------------------------------------------//
/*!
 * Polynomial in the formal variable alpha with exact rational coefficients.
 *
 * coeffs()[k] is the coefficient of alpha^k. Trailing zeros are always
 * trimmed, so the zero polynomial has no coefficients at all.
 */
class AlphaPolynomial
{
  public:
    AlphaPolynomial() = default;

    explicit AlphaPolynomial(std::vector<Rational> coeffs) : c_(std::move(coeffs))
    {
        trim();
    }

    static AlphaPolynomial constant(Rational const& v)
    {
        return AlphaPolynomial(std::vector<Rational>{v});
    }
    static AlphaPolynomial one() { return constant(Rational(1)); }
    //! The monomial alpha.
    static AlphaPolynomial alpha() { return AlphaPolynomial({Rational(0), Rational(1)}); }

    std::vector<Rational> const& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    //! Degree; -1 for the zero polynomial.
    long degree() const { return static_cast<long>(c_.size()) - 1; }

    Rational coeff(std::size_t k) const { return k < c_.size() ? c_[k] : Rational(0); }

    Rational evaluate(Rational const& x) const
    {
        Rational acc(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it)
            acc = acc * x + *it;
        return acc;
    }

    double evaluate(double x) const
    {
        long double acc = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it)
            acc = acc * x + static_cast<long double>(it->get_d());
        return static_cast<double>(acc);
    }

    AlphaPolynomial& operator+=(AlphaPolynomial const& o)
    {
        if (o.c_.size() > c_.size())
            c_.resize(o.c_.size(), Rational(0));
        for (std::size_t k = 0; k < o.c_.size(); ++k)
            c_[k] += o.c_[k];
        trim();
        return *this;
    }

    AlphaPolynomial& operator-=(AlphaPolynomial const& o)
    {
        if (o.c_.size() > c_.size())
            c_.resize(o.c_.size(), Rational(0));
        for (std::size_t k = 0; k < o.c_.size(); ++k)
            c_[k] -= o.c_[k];
        trim();
        return *this;
    }

    AlphaPolynomial& operator*=(Rational const& s)
    {
        for (auto& v : c_)
            v *= s;
        trim();
        return *this;
    }

    friend AlphaPolynomial operator+(AlphaPolynomial a, AlphaPolynomial const& b)
    {
        return a += b;
    }
    friend AlphaPolynomial operator-(AlphaPolynomial a, AlphaPolynomial const& b)
    {
        return a -= b;
    }
    friend AlphaPolynomial operator*(AlphaPolynomial a, Rational const& s)
    {
        return a *= s;
    }
    friend AlphaPolynomial operator*(Rational const& s, AlphaPolynomial a)
    {
        return a *= s;
    }

    friend AlphaPolynomial operator*(AlphaPolynomial const& a, AlphaPolynomial const& b)
    {
        if (a.is_zero() || b.is_zero())
            return {};
        std::vector<Rational> c(a.c_.size() + b.c_.size() - 1, Rational(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
        {
            if (sgn(a.c_[i]) == 0)
                continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                c[i + j] += a.c_[i] * b.c_[j];
        }
        return AlphaPolynomial(std::move(c));
    }

    AlphaPolynomial& operator*=(AlphaPolynomial const& o) { return *this = *this * o; }

    friend bool operator==(AlphaPolynomial const& a, AlphaPolynomial const& b)
    {
        return a.c_ == b.c_;
    }

    //! Euclidean division: returns {quotient, remainder}.
    friend std::pair<AlphaPolynomial, AlphaPolynomial>
    divmod(AlphaPolynomial const& num, AlphaPolynomial const& den)
    {
        if (den.is_zero())
            throw domain_error("polynomial division by zero");
        std::vector<Rational> rem = num.c_;
        if (rem.size() < den.c_.size())
            return {AlphaPolynomial{}, num};
        std::size_t const dd = den.c_.size() - 1;
        Rational const lead = den.c_.back();
        std::vector<Rational> quot(rem.size() - dd, Rational(0));
        for (std::size_t k = rem.size(); k-- > dd;)
        {
            Rational f = rem[k] / lead;
            quot[k - dd] = f;
            if (sgn(f) == 0)
                continue;
            for (std::size_t j = 0; j <= dd; ++j)
                rem[k - dd + j] -= f * den.c_[j];
        }
        return {AlphaPolynomial(std::move(quot)), AlphaPolynomial(std::move(rem))};
    }

  private:
    std::vector<Rational> c_;

    void trim()
    {
        while (!c_.empty() && sgn(c_.back()) == 0)
            c_.pop_back();
    }
};

//! Rising factorial (alpha)_k = alpha (alpha + 1) ... (alpha + k - 1); (alpha)_0 = 1.
inline AlphaPolynomial rising_factorial(unsigned k)
{
    AlphaPolynomial p = AlphaPolynomial::one();
    for (unsigned m = 0; m < k; ++m)
        p *= AlphaPolynomial({Rational(m), Rational(1)});
    return p;
}

//! Build from integer counts: counts[k] permutations with k cycles.
template<class Int>
AlphaPolynomial polynomial_from_counts(std::vector<Int> const& counts)
{
    std::vector<Rational> c;
    c.reserve(counts.size());
    for (auto const& v : counts)
    {
        if constexpr (std::is_same_v<Int, Integer>)
            c.emplace_back(v);
        else
            c.emplace_back(Integer(std::to_string(v)));
    }
    return AlphaPolynomial(std::move(c));
}

//! Human-readable form in descending powers, e.g. "2α^2 + 2α".
inline std::string to_string(AlphaPolynomial const& p)
{
    auto const& c = p.coeffs();
    if (c.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = c.size(); k-- > 0;)
    {
        if (sgn(c[k]) == 0)
            continue;
        Rational mag = abs(c[k]);
        if (first)
        {
            if (sgn(c[k]) < 0)
                os << "-";
        }
        else
        {
            os << (sgn(c[k]) < 0 ? " - " : " + ");
        }
        first = false;
        bool unit = (mag == 1);
        bool frac = (mag.get_den() != 1);
        if (k == 0 || !unit)
            os << (frac && k > 0 ? "(" : "") << mag.get_str() << (frac && k > 0 ? ")" : "");
        if (k >= 1)
            os << "α";
        if (k >= 2)
            os << "^" << k;
    }
    return os.str();
}

inline std::ostream& operator<<(std::ostream& os, AlphaPolynomial const& p)
{
    return os << to_string(p);
}

} // namespace alphaperm
