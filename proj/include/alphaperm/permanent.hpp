// SPDX-License-Identifier: Apache-2.0
//! \file alphaperm/permanent.hpp
//! Exact alpha-permanents: brute force, crossing-resolved expansion and the
//! closed form for matrices whose graph is a *-forest.
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "block.hpp"
#include "crossing.hpp"
#include "graph.hpp"
#include "matrix.hpp"
#include "polynomial.hpp"

namespace alphaperm
{

//! Default largest order accepted by the permutation enumerators (9! = 362880).
inline constexpr std::size_t default_brute_cap = 9;

namespace detail
{
//---------------------------------------------------------------------------//
/*!
 * Depth-first enumeration of the permutations pi of {0..m-1} with
 * allowed(i, pi(i)) for every i, tracking the cycle count incrementally.
 *
 * Rows are assigned in order. The partial permutation is a set of disjoint
 * paths and closed cycles; start_of[e] / end_of[s] link the endpoints of
 * every open path, so closing a cycle is detected in O(1).
 *
 * The visitor receives enter(row, col) / leave(row, col) around each
 * assignment and leaf(cycles) for each complete permutation.
 */
template<class Allowed, class Visitor>
class PermutationWalker
{
  public:
    PermutationWalker(std::size_t m, Allowed allowed, Visitor& visitor)
        : m_(m),
          allowed_(std::move(allowed)),
          visitor_(visitor),
          used_(m, false),
          start_of_(m),
          end_of_(m)
    {
        for (std::size_t v = 0; v < m; ++v)
            start_of_[v] = end_of_[v] = v;
    }

    void run() { descend(0, 0); }

  private:
    std::size_t m_;
    Allowed allowed_;
    Visitor& visitor_;
    std::vector<bool> used_;
    std::vector<std::size_t> start_of_;
    std::vector<std::size_t> end_of_;

    void descend(std::size_t row, unsigned cycles)
    {
        if (row == m_)
        {
            visitor_.leaf(cycles);
            return;
        }
        std::size_t const s = start_of_[row];
        for (std::size_t col = 0; col < m_; ++col)
        {
            if (used_[col] || !allowed_(row, col))
                continue;
            used_[col] = true;
            visitor_.enter(row, col);
            if (col == s)
            {
                descend(row + 1, cycles + 1);
            }
            else
            {
                std::size_t const e = end_of_[col];
                std::size_t const old_end = end_of_[s];
                std::size_t const old_start = start_of_[e];
                end_of_[s] = e;
                start_of_[e] = s;
                descend(row + 1, cycles);
                end_of_[s] = old_end;
                start_of_[e] = old_start;
            }
            visitor_.leave(row, col);
            used_[col] = false;
        }
    }
};

template<class Allowed, class Visitor>
void walk_permutations(std::size_t m, Allowed allowed, Visitor& visitor)
{
    PermutationWalker<Allowed, Visitor>(m, std::move(allowed), visitor).run();
}

inline void check_cap(std::size_t m, std::size_t cap)
{
    if (m > cap)
        throw size_error("matrix order " + std::to_string(m)
                         + " exceeds the brute-force cap of " + std::to_string(cap));
}
} // namespace detail

//---------------------------------------------------------------------------//
/*!
 * per_alpha(M) = sum over permutations of alpha^{#cycles} prod M_{i,pi(i)}.
 *
 * Entries are scaled to integers by the common denominator L, the walk
 * accumulates integer products per cycle count, and the result is divided
 * by L^m at the end. Zero entries prune the walk.
 */
inline AlphaPolynomial
per_alpha_brute(SquareMatrix<Rational> const& m, std::size_t cap = default_brute_cap)
{
    std::size_t const order = m.dim();
    detail::check_cap(order, cap);
    if (order == 0)
        return AlphaPolynomial::one();

    Integer denom(1);
    for (std::size_t i = 0; i < order; ++i)
        for (std::size_t j = 0; j < order; ++j)
            mpz_lcm(denom.get_mpz_t(), denom.get_mpz_t(), m(i, j).get_den_mpz_t());

    std::vector<Integer> scaled(order * order);
    for (std::size_t i = 0; i < order; ++i)
        for (std::size_t j = 0; j < order; ++j)
            scaled[i * order + j] = m(i, j).get_num() * (denom / m(i, j).get_den());

    struct Accumulate
    {
        std::vector<Integer> const& entries;
        std::size_t order;
        std::vector<Integer> partial; // partial[k] = product of first k rows
        std::vector<Integer> by_cycles;

        void enter(std::size_t row, std::size_t col)
        {
            partial[row + 1] = partial[row] * entries[row * order + col];
        }
        void leave(std::size_t, std::size_t) {}
        void leaf(unsigned cycles) { by_cycles[cycles] += partial[order]; }
    } acc{scaled, order, std::vector<Integer>(order + 1), std::vector<Integer>(order + 1)};
    acc.partial[0] = 1;

    detail::walk_permutations(
        order,
        [&](std::size_t r, std::size_t c) { return sgn(scaled[r * order + c]) != 0; },
        acc);

    Integer scale;
    mpz_pow_ui(scale.get_mpz_t(), denom.get_mpz_t(), order);
    std::vector<Rational> coeffs(order + 1);
    for (std::size_t k = 0; k <= order; ++k)
    {
        coeffs[k] = Rational(acc.by_cycles[k], scale);
        coeffs[k].canonicalize();
    }
    return AlphaPolynomial(std::move(coeffs));
}

//! per_alpha(A[q]); the empty block (|q| = 0) has permanent one.
inline AlphaPolynomial per_alpha_block(SquareMatrix<Rational> const& a,
                                       BlockSpec const& q,
                                       std::size_t cap = default_brute_cap)
{
    if (q.size() != a.dim())
        throw domain_error("block spec length does not match matrix dimension");
    if (order(q) == 0)
        return AlphaPolynomial::one();
    detail::check_cap(order(q), cap);
    return per_alpha_brute(block_expand(a, q).matrix, cap);
}

//---------------------------------------------------------------------------//
//! N(pi)_ij = number of copies of i that pi maps to a copy of j.
inline CrossingMatrix crossing_of_permutation(std::span<std::size_t const> pi,
                                              BlockSpec const& q)
{
    auto base = block_base_map(q);
    if (pi.size() != base.size())
        throw domain_error("permutation size does not match |q|");
    CrossingMatrix n(q.size());
    std::vector<bool> seen(pi.size(), false);
    for (std::size_t a = 0; a < pi.size(); ++a)
    {
        if (pi[a] >= pi.size() || seen[pi[a]])
            throw domain_error("not a permutation of the block index set");
        seen[pi[a]] = true;
        ++n(base[a], base[pi[a]]);
    }
    return n;
}

//! Terms R(n) of per_alpha(A[q]) grouped by crossing matrix, in canonical key order.
using MonomialExpansion = std::map<CrossingMatrix, AlphaPolynomial>;

//! prod A_ij^{n_ij} with 0^0 = 1.
inline Rational monomial(SquareMatrix<Rational> const& a, CrossingMatrix const& n)
{
    Rational r(1);
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j)
            if (n(i, j) != 0)
                r *= pow(a(i, j), n(i, j));
    return r;
}

/*!
 * Group alpha^{#(pi)} over permutations of the block index set by N(pi).
 *
 * Only permutations whose crossings stay on the edges of the graph G(A) are
 * enumerated; every other permutation carries a factor A_ij = A_ji = 0.
 * Hence sum_n R(n) prod A^n reconstructs per_alpha(A[q]).
 */
inline MonomialExpansion expansion_by_crossing(SquareMatrix<Rational> const& a,
                                               BlockSpec const& q,
                                               std::size_t cap = default_brute_cap)
{
    if (q.size() != a.dim())
        throw domain_error("block spec length does not match matrix dimension");
    std::size_t const d = a.dim();
    std::size_t const m = order(q);
    detail::check_cap(m, cap);

    MonomialExpansion out;
    if (m == 0)
    {
        out.emplace(CrossingMatrix(d), AlphaPolynomial::one());
        return out;
    }

    auto const g = graph_of_matrix(a);
    auto const base = block_base_map(q);

    struct Group
    {
        std::vector<std::size_t> const& base;
        std::size_t m;
        CrossingMatrix n;
        std::map<CrossingMatrix, std::vector<std::uint64_t>> counts;

        void enter(std::size_t r, std::size_t c) { ++n(base[r], base[c]); }
        void leave(std::size_t r, std::size_t c) { --n(base[r], base[c]); }
        void leaf(unsigned cycles)
        {
            auto [it, inserted] = counts.try_emplace(n);
            if (inserted)
                it->second.assign(m + 1, 0);
            ++it->second[cycles];
        }
    } group{base, m, CrossingMatrix(d), {}};

    detail::walk_permutations(
        m, [&](std::size_t r, std::size_t c) { return g.has_edge(base[r], base[c]); }, group);

    for (auto const& [n, counts] : group.counts)
        out.emplace(n, polynomial_from_counts(counts));
    return out;
}

//! sum_n R(n) prod A^n over an expansion.
inline AlphaPolynomial reconstruct(SquareMatrix<Rational> const& a, MonomialExpansion const& e)
{
    AlphaPolynomial total;
    for (auto const& [n, poly] : e)
    {
        Rational w = monomial(a, n);
        if (sgn(w) != 0)
            total += poly * w;
    }
    return total;
}

//---------------------------------------------------------------------------//
/*!
 * Coefficient of prod A^n in per_alpha(A[q]) for n in T_q of a *-forest:
 *
 *   prod_i (alpha)_{q_i} q_i!  /  ( prod_i n_ii!  prod_{i<j} (alpha)_{n_ij} n_ij! )
 *
 * Pairs with n_ij = 0 contribute one, so the product effectively runs over
 * the edges used by n. The polynomial division must be exact.
 */
inline AlphaPolynomial closed_form_coefficient(BlockSpec const& q, CrossingMatrix const& n)
{
    std::size_t const d = q.size();
    if (n.dim() != d)
        throw domain_error("crossing matrix dimension does not match block spec");
    for (std::size_t i = 0; i < d; ++i)
        if (n.row_sum(i) != q[i])
            throw domain_error("crossing matrix row sums differ from q");

    AlphaPolynomial numerator = AlphaPolynomial::one();
    Rational scalar(1);
    for (std::size_t i = 0; i < d; ++i)
    {
        numerator *= rising_factorial(q[i]);
        scalar *= Rational(factorial(q[i]));
        scalar /= Rational(factorial(n(i, i)));
    }
    AlphaPolynomial denominator = AlphaPolynomial::one();
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j)
        {
            if (n(i, j) == 0)
                continue;
            denominator *= rising_factorial(n(i, j));
            scalar /= Rational(factorial(n(i, j)));
        }

    auto [quotient, remainder] = divmod(numerator, denominator);
    if (!remainder.is_zero())
        throw internal_error("closed-form coefficient is not a polynomial: "
                             "n is not in T_q of a *-forest");
    return quotient * scalar;
}

//! Closed-form per_alpha(A[q]) for a *-forest matrix, summed over T_q.
inline AlphaPolynomial per_alpha_starforest(SquareMatrix<Rational> const& a, BlockSpec const& q)
{
    if (q.size() != a.dim())
        throw domain_error("block spec length does not match matrix dimension");
    auto const g = graph_of_matrix(a);
    if (!g.is_star_forest())
        throw structure_error("closed form requires a matrix associated to a *-forest");
    AlphaPolynomial total;
    for (auto const& n : tq_enumerate(g, q))
    {
        Rational w = monomial(a, n);
        if (sgn(w) != 0)
            total += closed_form_coefficient(q, n) * w;
    }
    return total;
}

//! Closed form when G(A) is a *-forest, brute force otherwise.
inline AlphaPolynomial per_alpha(SquareMatrix<Rational> const& a,
                                 BlockSpec const& q,
                                 std::size_t cap = default_brute_cap)
{
    if (graph_of_matrix(a).is_star_forest())
        return per_alpha_starforest(a, q);
    return per_alpha_block(a, q, cap);
}

} // namespace alphaperm
