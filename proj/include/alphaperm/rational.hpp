// SPDX-License-Identifier: Apache-2.0
//! \file alphaperm/rational.hpp
//! Exact rational scalars and the scalar traits shared by all templates.
#pragma once

#include <cctype>
#include <cmath>
#include <concepts>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "errors.hpp"

namespace alphaperm
{

using Rational = mpq_class;
using Integer = mpz_class;

//---------------------------------------------------------------------------//
/*!
 * Uniform access to the two scalar families used across the library:
 * exact GMP rationals and IEEE floating point.
 */
template<class T>
struct scalar_traits;

template<>
struct scalar_traits<Rational>
{
    static constexpr bool is_exact = true;
    static constexpr char const* mode_name = "rational";

    static bool is_zero(Rational const& x) { return sgn(x) == 0; }
    static double to_double(Rational const& x) { return x.get_d(); }
    static Rational from_rational(Rational const& x) { return x; }
};

template<std::floating_point F>
struct scalar_traits<F>
{
    static constexpr bool is_exact = false;
    static constexpr char const* mode_name = "float";

    static bool is_zero(F x) { return x == F(0); }
    static double to_double(F x) { return static_cast<double>(x); }
    static F from_rational(Rational const& x) { return static_cast<F>(x.get_d()); }
};

template<class T>
inline constexpr bool is_exact_v = scalar_traits<T>::is_exact;

template<class T>
concept Scalar = requires { scalar_traits<T>::is_exact; };

//---------------------------------------------------------------------------//
//! Parse "p/q", "p", or a finite decimal such as "0.25" into an exact rational.
inline Rational parse_rational(std::string_view text)
{
    std::string s(text);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.erase(s.begin());
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.pop_back();
    if (s.empty())
        throw domain_error("empty rational literal");

    auto dot = s.find('.');
    if (dot != std::string::npos)
    {
        if (s.find_first_of("/eE") != std::string::npos)
            throw domain_error("unsupported rational literal '" + s + "'");
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        if (digits.empty() || digits == "-" || digits == "+")
            throw domain_error("bad rational literal '" + s + "'");
        if (digits.front() == '+')
            digits.erase(digits.begin());
        Integer num;
        if (num.set_str(digits, 10) != 0)
            throw domain_error("bad rational literal '" + s + "'");
        Integer den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, s.size() - dot - 1);
        Rational r(num, den);
        r.canonicalize();
        return r;
    }

    if (s.front() == '+')
        s.erase(s.begin());
    Rational r;
    if (r.set_str(s, 10) != 0)
        throw domain_error("bad rational literal '" + s + "'");
    if (sgn(r.get_den()) == 0)
        throw domain_error("zero denominator in '" + s + "'");
    r.canonicalize();
    return r;
}

//! Canonical "p/q" (or "p" when the denominator is one).
inline std::string to_string(Rational const& r)
{
    return r.get_str(10);
}

//! Exact conversion of a finite double.
inline Rational rational_from_double(double x)
{
    if (!std::isfinite(x))
        throw domain_error("non-finite value cannot be made exact");
    return Rational(x);
}

inline Rational pow(Rational const& base, unsigned long exponent)
{
    Rational r;
    mpz_pow_ui(r.get_num_mpz_t(), base.get_num_mpz_t(), exponent);
    mpz_pow_ui(r.get_den_mpz_t(), base.get_den_mpz_t(), exponent);
    r.canonicalize();
    return r;
}

inline Integer factorial(unsigned long n)
{
    Integer r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

} // namespace alphaperm
