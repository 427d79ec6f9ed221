// SPDX-License-Identifier: Apache-2.0
//! \file tests/oracles.hpp
//! Test-only reference computations and random generators. Nothing here
//! calls into the code paths it is used to check.
#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include "alphaperm/block.hpp"
#include "alphaperm/chain.hpp"
#include "alphaperm/crossing.hpp"
#include "alphaperm/graph.hpp"
#include "alphaperm/matrix.hpp"
#include "alphaperm/polynomial.hpp"

namespace oracle
{
using alphaperm::AlphaPolynomial;
using alphaperm::BlockSpec;
using alphaperm::CrossingMatrix;
using alphaperm::InducedGraph;
using alphaperm::Rational;
using alphaperm::SquareMatrix;

inline unsigned count_cycles(std::vector<std::size_t> const& p)
{
    std::vector<bool> seen(p.size(), false);
    unsigned c = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
    {
        if (seen[i])
            continue;
        ++c;
        for (std::size_t j = i; !seen[j]; j = p[j])
            seen[j] = true;
    }
    return c;
}

//! per_alpha by std::next_permutation over all m! permutations.
inline AlphaPolynomial per_alpha_lexicographic(SquareMatrix<Rational> const& m)
{
    std::size_t const n = m.dim();
    std::vector<Rational> c(n + 1, Rational(0));
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), std::size_t{0});
    do
    {
        Rational prod(1);
        for (std::size_t i = 0; i < n && sgn(prod) != 0; ++i)
            prod *= m(i, p[i]);
        c[count_cycles(p)] += prod;
    } while (std::next_permutation(p.begin(), p.end()));
    return AlphaPolynomial(std::move(c));
}

//! Block matrix built directly from the definition (independent of block_expand).
inline SquareMatrix<Rational> naive_block(SquareMatrix<Rational> const& a, BlockSpec const& q)
{
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < q.size(); ++i)
        for (unsigned k = 0; k < q[i]; ++k)
            idx.push_back(i);
    SquareMatrix<Rational> m(idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r)
        for (std::size_t c = 0; c < idx.size(); ++c)
            m(r, c) = a(idx[r], idx[c]);
    return m;
}

//! Classical permanent by Ryser's inclusion-exclusion formula.
inline Rational ryser_permanent(SquareMatrix<Rational> const& m)
{
    std::size_t const n = m.dim();
    if (n == 0)
        return Rational(1);
    Rational total(0);
    for (std::uint64_t s = 1; s < (std::uint64_t{1} << n); ++s)
    {
        Rational prod(1);
        for (std::size_t i = 0; i < n; ++i)
        {
            Rational row(0);
            for (std::size_t j = 0; j < n; ++j)
                if ((s >> j) & 1u)
                    row += m(i, j);
            prod *= row;
        }
        int bits = __builtin_popcountll(s);
        if ((n - bits) % 2 == 0)
            total += prod;
        else
            total -= prod;
    }
    return total;
}

/*!
 * T_q by brute force: every n whose support lies on the edges, entries in
 * 0..max(q), filtered by the three defining conditions.
 */
inline std::vector<CrossingMatrix> tq_brute(InducedGraph const& g, BlockSpec const& q)
{
    std::size_t const d = g.vertex_count();
    unsigned const top = q.empty() ? 0 : *std::max_element(q.begin(), q.end());
    std::vector<std::pair<std::size_t, std::size_t>> slots;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            if (g.has_edge(i, j))
                slots.emplace_back(i, j);

    std::vector<CrossingMatrix> out;
    CrossingMatrix n(d);
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
        if (k == slots.size())
        {
            if (!n.is_sourceless())
                return;
            for (std::size_t i = 0; i < d; ++i)
                if (n.row_sum(i) != q[i])
                    return;
            out.push_back(n);
            return;
        }
        auto [i, j] = slots[k];
        for (unsigned v = 0; v <= top; ++v)
        {
            n(i, j) = v;
            rec(k + 1);
        }
        n(i, j) = 0;
    };
    rec(0);
    std::sort(out.begin(), out.end());
    return out;
}

//! Random rational with numerator in [-num, num] \ {0} and denominator in [1, den].
template<class Rng>
Rational random_nonzero_rational(Rng& rng, int num = 5, int den = 4)
{
    std::uniform_int_distribution<int> pn(1, num), pd(1, den), sign(0, 1);
    Rational r(pn(rng) * (sign(rng) ? 1 : -1), pd(rng));
    r.canonicalize();
    return r;
}

struct ForestShape
{
    std::size_t d;
    std::vector<std::pair<std::size_t, std::size_t>> edges; //!< i < j
    std::vector<bool> loops;
};

//! Random *-forest: random recursive tree with dropped edges and optional loops.
template<class Rng>
ForestShape random_star_forest_shape(Rng& rng, std::size_t d, bool allow_loops = true)
{
    ForestShape s{d, {}, std::vector<bool>(d, false)};
    std::vector<std::size_t> perm(d);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    std::bernoulli_distribution keep(0.8), loop(0.35);
    for (std::size_t k = 1; k < d; ++k)
    {
        std::uniform_int_distribution<std::size_t> pick(0, k - 1);
        std::size_t a = perm[k], b = perm[pick(rng)];
        if (keep(rng))
            s.edges.emplace_back(std::min(a, b), std::max(a, b));
    }
    if (allow_loops)
        for (std::size_t i = 0; i < d; ++i)
            s.loops[i] = loop(rng);
    return s;
}

//! Fill a shape with random nonzero rationals; each edge direction is
//! independently zeroed with probability `one_way`.
template<class Rng>
SquareMatrix<Rational> fill_shape(Rng& rng, ForestShape const& s, double one_way = 0.15)
{
    SquareMatrix<Rational> a(s.d);
    std::bernoulli_distribution drop(one_way);
    for (auto [i, j] : s.edges)
    {
        a(i, j) = random_nonzero_rational(rng);
        a(j, i) = random_nonzero_rational(rng);
        if (drop(rng))
            (drop(rng) ? a(i, j) : a(j, i)) = 0;
    }
    for (std::size_t i = 0; i < s.d; ++i)
        if (s.loops[i])
            a(i, i) = random_nonzero_rational(rng);
    return a;
}

//! Random q with entries in [0, top] and |q| <= max_total.
template<class Rng>
BlockSpec random_q(Rng& rng, std::size_t d, unsigned top, std::size_t max_total)
{
    std::uniform_int_distribution<unsigned> pick(0, top);
    while (true)
    {
        BlockSpec q(d);
        for (auto& v : q)
            v = pick(rng);
        if (alphaperm::order(q) <= max_total)
            return q;
    }
}

//! All labelled forests on d vertices as edge lists (each i<j pair in or out,
//! kept when acyclic).
inline std::vector<std::vector<std::pair<std::size_t, std::size_t>>> all_forests(std::size_t d)
{
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j)
            pairs.emplace_back(i, j);
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs.size()); ++mask)
    {
        std::vector<std::size_t> comp(d);
        std::iota(comp.begin(), comp.end(), std::size_t{0});
        std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
            return comp[x] == x ? x : comp[x] = find(comp[x]);
        };
        bool ok = true;
        std::vector<std::pair<std::size_t, std::size_t>> edges;
        for (std::size_t k = 0; k < pairs.size() && ok; ++k)
        {
            if (!((mask >> k) & 1u))
                continue;
            auto [i, j] = pairs[k];
            auto ri = find(i), rj = find(j);
            if (ri == rj)
                ok = false;
            comp[ri] = rj;
            edges.push_back(pairs[k]);
        }
        if (ok)
            out.push_back(std::move(edges));
    }
    return out;
}

//! Random transient chain with small-integer weights and killing at every row.
template<class Rng>
alphaperm::SubMarkovChain<Rational> random_chain(Rng& rng, std::size_t d, double zero = 0.3)
{
    std::uniform_int_distribution<int> w(1, 6);
    std::bernoulli_distribution drop(zero);
    while (true)
    {
        SquareMatrix<Rational> p(d);
        for (std::size_t x = 0; x < d; ++x)
        {
            std::vector<int> raw(d);
            int total = 0;
            for (auto& v : raw)
            {
                v = drop(rng) ? 0 : w(rng);
                total += v;
            }
            int kill = w(rng);
            for (std::size_t y = 0; y < d; ++y)
            {
                p(x, y) = Rational(raw[y], total + kill);
                p(x, y).canonicalize();
            }
        }
        try
        {
            return alphaperm::validate_chain(std::move(p));
        }
        catch (alphaperm::domain_error const&)
        {
        }
    }
}

} // namespace oracle
