// SPDX-License-Identifier: Apache-2.0
//! \file alphaperm/laws.hpp
//! Closed-form laws of the occupation fields of the loop soup.
//!
//! Every law here has the shape det(I - P)^alpha * W(alpha). The weight W is
//! a polynomial in alpha with rational coefficients, so it can be evaluated
//! exactly at rational alpha; the det^alpha factor is only ever taken in
//! floating point.
#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "chain.hpp"
#include "crossing.hpp"
#include "permanent.hpp"

namespace alphaperm
{

//! det(I - P)^alpha in floating point.
inline double det_power(SubMarkovChain<Rational> const& chain, double alpha)
{
    return std::pow(det_I_minus_P(chain).get_d(), alpha);
}

inline Rational factorial_product(BlockSpec const& q)
{
    Rational r(1);
    for (unsigned v : q)
        r *= Rational(factorial(v));
    return r;
}

//---------------------------------------------------------------------------//
// theta law

//! per_alpha(P[q]) / prod q_x!
inline AlphaPolynomial theta_law_weight(SubMarkovChain<Rational> const& chain,
                                        BlockSpec const& q,
                                        std::size_t cap = default_brute_cap)
{
    if (q.size() != chain.dim())
        throw domain_error("q length does not match chain dimension");
    auto poly = per_alpha(chain.matrix(), q, cap);
    Rational scale = 1 / factorial_product(q);
    return poly * scale;
}

inline double theta_law(SubMarkovChain<Rational> const& chain, double alpha,
                        BlockSpec const& q, std::size_t cap = default_brute_cap)
{
    return det_power(chain, alpha) * theta_law_weight(chain, q, cap).evaluate(alpha);
}

//---------------------------------------------------------------------------//
// crossing law on *-forests

namespace detail
{
inline InducedGraph checked_star_forest(SubMarkovChain<Rational> const& chain,
                                        CrossingMatrix const& n)
{
    if (n.dim() != chain.dim())
        throw domain_error("crossing matrix dimension does not match chain");
    auto g = graph_of_matrix(chain.matrix());
    if (!g.is_star_forest())
        throw structure_error("crossing law requires a *-forest chain");
    if (!in_tq(g, n.row_sums(), n))
        throw domain_error("crossing matrix is not in T_q for its row sums");
    return g;
}
} // namespace detail

/*!
 * prod_x (alpha)_{q_x} / (prod_E n_xy! prod_{E, x != y} (alpha)_{n_xy})
 * times prod P_xy^{n_xy}, with one factor per unordered edge.
 */
inline AlphaPolynomial n_law_starforest_weight(SubMarkovChain<Rational> const& chain,
                                               CrossingMatrix const& n)
{
    detail::checked_star_forest(chain, n);
    std::size_t const d = chain.dim();
    auto const q = n.row_sums();

    AlphaPolynomial num = AlphaPolynomial::one();
    AlphaPolynomial den = AlphaPolynomial::one();
    Rational scale = monomial(chain.matrix(), n);
    for (std::size_t x = 0; x < d; ++x)
    {
        num *= rising_factorial(q[x]);
        scale /= Rational(factorial(n(x, x)));
        for (std::size_t y = x + 1; y < d; ++y)
        {
            if (n(x, y) == 0)
                continue;
            den *= rising_factorial(n(x, y));
            scale /= Rational(factorial(n(x, y)));
        }
    }
    auto [quot, rem] = divmod(num, den);
    if (!rem.is_zero())
        throw internal_error("rising-factorial ratio is not a polynomial");
    return quot * scale;
}

/*!
 * Floating-point evaluation through log-Gamma:
 * log(alpha)_k = lgamma(k + alpha) - lgamma(alpha), summed with
 * compensation.
 */
inline double n_law_starforest(SubMarkovChain<Rational> const& chain, double alpha,
                               CrossingMatrix const& n)
{
    if (!(alpha > 0))
        throw domain_error("alpha must be positive");
    detail::checked_star_forest(chain, n);
    std::size_t const d = chain.dim();
    auto const q = n.row_sums();

    double sum = 0, comp = 0;
    auto add = [&](double v) {
        double y = v - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    };
    double const lga = std::lgamma(alpha);
    add(alpha * std::log(det_I_minus_P(chain).get_d()));
    for (std::size_t x = 0; x < d; ++x)
    {
        add(std::lgamma(q[x] + alpha) - lga);
        add(-std::lgamma(n(x, x) + 1.0));
        for (std::size_t y = 0; y < d; ++y)
        {
            if (n(x, y) == 0)
                continue;
            double pxy = chain(x, y).get_d();
            if (pxy == 0)
                return 0;
            add(n(x, y) * std::log(pxy));
            if (x < y)
                add(-std::lgamma(n(x, y) + alpha) + lga - std::lgamma(n(x, y) + 1.0));
        }
    }
    return std::exp(sum);
}

//---------------------------------------------------------------------------//
// crossing law on general chains

/*!
 * R(n)(alpha) prod P^n / prod q_x! for every n reachable with row sums q,
 * from one brute-force pass over S_|q|.
 */
inline std::map<CrossingMatrix, AlphaPolynomial>
edge_law_table(SubMarkovChain<Rational> const& chain, BlockSpec const& q,
               std::size_t cap = default_brute_cap)
{
    auto e = expansion_by_crossing(chain.matrix(), q, cap);
    Rational scale = 1 / factorial_product(q);
    std::map<CrossingMatrix, AlphaPolynomial> out;
    for (auto& [n, r] : e)
    {
        Rational w = monomial(chain.matrix(), n);
        if (sgn(w) != 0)
            out.emplace(n, r * (w * scale));
    }
    return out;
}

inline AlphaPolynomial edge_law_weight(SubMarkovChain<Rational> const& chain,
                                       CrossingMatrix const& n,
                                       std::size_t cap = default_brute_cap)
{
    if (n.dim() != chain.dim())
        throw domain_error("crossing matrix dimension does not match chain");
    if (!n.is_sourceless())
        throw domain_error("crossing matrix is not sourceless");
    auto table = edge_law_table(chain, n.row_sums(), cap);
    auto it = table.find(n);
    return it == table.end() ? AlphaPolynomial{} : it->second;
}

inline double edge_law_general(SubMarkovChain<Rational> const& chain, double alpha,
                               CrossingMatrix const& n, std::size_t cap = default_brute_cap)
{
    return det_power(chain, alpha) * edge_law_weight(chain, n, cap).evaluate(alpha);
}

//---------------------------------------------------------------------------//
//! Visit every q with q_x <= cap_x and |q| <= max_order, z_1 fastest.
inline void for_each_q(BlockSpec const& cap, std::size_t max_order,
                       std::function<void(BlockSpec const&)> const& f)
{
    BlockSpec q(cap.size(), 0);
    while (true)
    {
        if (order(q) <= max_order)
            f(q);
        std::size_t k = 0;
        while (k < q.size() && q[k] == cap[k])
            q[k++] = 0;
        if (k == q.size())
            return;
        ++q[k];
    }
}

} // namespace alphaperm
