// SPDX-License-Identifier: Apache-2.0
//! \file alphaperm/loop.hpp
//! Oriented loops on a chain and the loop measure mu.
#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "chain.hpp"

namespace alphaperm
{

//! Vertex sequence (x_0, ..., x_{n-1}) traversed cyclically from x_0.
using RootedLoop = std::vector<std::size_t>;

//! Start index of the lexicographically least rotation.
inline std::size_t least_rotation(std::span<std::size_t const> s)
{
    std::size_t const n = s.size();
    std::size_t i = 0, j = 1, k = 0;
    while (i < n && j < n && k < n)
    {
        auto a = s[(i + k) % n], b = s[(j + k) % n];
        if (a == b)
        {
            ++k;
            continue;
        }
        if (a > b)
            i += k + 1;
        else
            j += k + 1;
        if (i == j)
            ++j;
        k = 0;
    }
    return std::min(i, j);
}

//! Largest J such that the loop is a J-fold concatenation of one block.
inline std::size_t loop_multiplicity(std::span<std::size_t const> s)
{
    std::size_t const n = s.size();
    if (n == 0)
        return 1;
    std::vector<std::size_t> pi(n, 0);
    for (std::size_t q = 1; q < n; ++q)
    {
        std::size_t k = pi[q - 1];
        while (k > 0 && s[q] != s[k])
            k = pi[k - 1];
        if (s[q] == s[k])
            ++k;
        pi[q] = k;
    }
    std::size_t period = n - pi[n - 1];
    return n % period == 0 ? n / period : 1;
}

//---------------------------------------------------------------------------//
/*!
 * Unrooted oriented loop, stored as its least rotation. Reversal gives a
 * different loop.
 */
class UnrootedLoop
{
  public:
    UnrootedLoop() = default;
    explicit UnrootedLoop(std::span<std::size_t const> rooted)
    {
        if (rooted.empty())
            throw domain_error("a loop needs at least one vertex");
        auto start = least_rotation(rooted);
        v_.reserve(rooted.size());
        for (std::size_t k = 0; k < rooted.size(); ++k)
            v_.push_back(rooted[(start + k) % rooted.size()]);
    }

    std::vector<std::size_t> const& vertices() const { return v_; }
    std::size_t length() const { return v_.size(); }
    std::size_t multiplicity() const { return loop_multiplicity(v_); }

    friend auto operator<=>(UnrootedLoop const&, UnrootedLoop const&) = default;
    friend bool operator==(UnrootedLoop const&, UnrootedLoop const&) = default;

  private:
    std::vector<std::size_t> v_;
};

//! Product of transition probabilities around the loop (closing step included).
template<Scalar T>
T loop_weight(std::span<std::size_t const> loop, SquareMatrix<T> const& p)
{
    T w(1);
    for (std::size_t k = 0; k < loop.size(); ++k)
    {
        auto x = loop[k], y = loop[(k + 1) % loop.size()];
        if (x >= p.dim() || y >= p.dim())
            throw domain_error("loop vertex out of range");
        w *= p(x, y);
    }
    return w;
}

//! mu(loop) = weight / J(loop). Zero off the support of P.
template<Scalar T>
T loop_measure(std::span<std::size_t const> loop, SubMarkovChain<T> const& chain)
{
    if (loop.empty())
        throw domain_error("a loop needs at least one vertex");
    return loop_weight(loop, chain.matrix()) / T(loop_multiplicity(loop));
}

template<Scalar T>
T loop_measure(UnrootedLoop const& loop, SubMarkovChain<T> const& chain)
{
    return loop_measure<T>(std::span<std::size_t const>(loop.vertices()), chain);
}

//! Total mass of mu, -log det(I - P).
template<Scalar T>
double total_mass(SubMarkovChain<T> const& chain)
{
    return -std::log(scalar_traits<T>::to_double(det_I_minus_P(chain)));
}

//! Comma-separated vertex labels, e.g. "1,2,1,2".
inline std::string format_loop(std::span<std::size_t const> loop,
                               std::vector<std::string> const& labels)
{
    std::string out;
    for (std::size_t k = 0; k < loop.size(); ++k)
    {
        if (k)
            out += ',';
        out += labels.at(loop[k]);
    }
    return out;
}

inline std::string format_loop(UnrootedLoop const& loop,
                               std::vector<std::string> const& labels)
{
    return format_loop(std::span<std::size_t const>(loop.vertices()), labels);
}

inline RootedLoop parse_loop(std::string const& text, std::vector<std::string> const& labels)
{
    RootedLoop loop;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        auto b = item.find_first_not_of(" \t");
        auto e = item.find_last_not_of(" \t");
        std::string tok = b == std::string::npos ? "" : item.substr(b, e - b + 1);
        auto it = std::find(labels.begin(), labels.end(), tok);
        if (it == labels.end())
            throw domain_error("unknown vertex label '" + tok + "' in loop");
        loop.push_back(static_cast<std::size_t>(it - labels.begin()));
    }
    if (loop.empty())
        throw domain_error("empty loop text");
    return loop;
}

} // namespace alphaperm
