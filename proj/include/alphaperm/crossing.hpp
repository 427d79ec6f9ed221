// SPDX-License-Identifier: Apache-2.0
//! \file alphaperm/crossing.hpp
#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <vector>

#include "block.hpp"
#include "graph.hpp"

namespace alphaperm
{

//---------------------------------------------------------------------------//
/*!
 * Nonnegative integer d-by-d matrix n = (n_ij), used both for elements of
 * T_q and for realised edge-crossing counts N. Ordering is lexicographic in
 * row-major entries, which is the canonical key order.
 */
class CrossingMatrix
{
  public:
    CrossingMatrix() = default;
    explicit CrossingMatrix(std::size_t d) : d_(d), n_(d * d, 0) {}

    std::size_t dim() const { return d_; }

    unsigned& operator()(std::size_t i, std::size_t j) { return n_[i * d_ + j]; }
    unsigned operator()(std::size_t i, std::size_t j) const
    {
        return n_[i * d_ + j];
    }

    unsigned row_sum(std::size_t i) const
    {
        unsigned s = 0;
        for (std::size_t j = 0; j < d_; ++j)
            s += (*this)(i, j);
        return s;
    }
    unsigned col_sum(std::size_t j) const
    {
        unsigned s = 0;
        for (std::size_t i = 0; i < d_; ++i)
            s += (*this)(i, j);
        return s;
    }

    BlockSpec row_sums() const
    {
        BlockSpec q(d_);
        for (std::size_t i = 0; i < d_; ++i)
            q[i] = row_sum(i);
        return q;
    }

    //! Row sums equal column sums at every vertex.
    bool is_sourceless() const
    {
        for (std::size_t i = 0; i < d_; ++i)
            if (row_sum(i) != col_sum(i))
                return false;
        return true;
    }

    bool is_zero() const
    {
        return std::all_of(n_.begin(), n_.end(), [](unsigned v) { return v == 0; });
    }

    friend auto operator<=>(CrossingMatrix const&, CrossingMatrix const&) = default;
    friend bool operator==(CrossingMatrix const&, CrossingMatrix const&) = default;

  private:
    std::size_t d_ = 0;
    std::vector<unsigned> n_;
};

//! True when n satisfies the three T_q conditions for graph g.
inline bool in_tq(InducedGraph const& g, BlockSpec const& q, CrossingMatrix const& n)
{
    std::size_t const d = g.vertex_count();
    if (n.dim() != d || q.size() != d)
        return false;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            if (n(i, j) != 0 && !g.has_edge(i, j))
                return false;
    if (!n.is_sourceless())
        return false;
    for (std::size_t i = 0; i < d; ++i)
        if (n.row_sum(i) != q[i])
            return false;
    return true;
}

namespace detail
{
// Parent of every vertex in a BFS forest rooted at each component's minimal
// vertex, and the visit order. parent[root] == root.
struct RootedForest
{
    std::vector<std::size_t> parent;
    std::vector<std::size_t> order;
};

inline RootedForest root_forest(InducedGraph const& g)
{
    std::size_t const d = g.vertex_count();
    RootedForest f{std::vector<std::size_t>(d, d), {}};
    f.order.reserve(d);
    for (std::size_t root = 0; root < d; ++root)
    {
        if (f.parent[root] != d)
            continue;
        f.parent[root] = root;
        std::size_t head = f.order.size();
        f.order.push_back(root);
        while (head < f.order.size())
        {
            std::size_t x = f.order[head++];
            for (std::size_t y : g.neighbours(x))
            {
                if (f.parent[y] != d)
                    continue;
                f.parent[y] = x;
                f.order.push_back(y);
            }
        }
    }
    return f;
}

// Given residual demands after self-loop assignment, the forest part of n is
// forced: strip leaves from the BFS order in reverse. Returns false when some
// residual goes negative or a root keeps unmatched demand.
inline bool solve_forest(RootedForest const& f,
                         std::vector<long> residual,
                         CrossingMatrix& n)
{
    for (auto it = f.order.rbegin(); it != f.order.rend(); ++it)
    {
        std::size_t v = *it;
        long r = residual[v];
        if (r < 0)
            return false;
        std::size_t p = f.parent[v];
        if (p == v)
        {
            if (r != 0)
                return false;
            continue;
        }
        n(v, p) = static_cast<unsigned>(r);
        n(p, v) = static_cast<unsigned>(r);
        residual[p] -= r;
    }
    return true;
}
} // namespace detail

//---------------------------------------------------------------------------//
/*!
 * Enumerate T_q for a *-forest.
 *
 * Each self-looped vertex x contributes a free split n_xx in [0, q_x]; once
 * the splits are fixed the off-diagonal part is forced by leaf stripping.
 * Output is ordered lexicographically by the split values (ascending vertex
 * index). A forest therefore yields at most one element.
 */
inline std::vector<CrossingMatrix> tq_enumerate(InducedGraph const& g, BlockSpec const& q)
{
    std::size_t const d = g.vertex_count();
    if (q.size() != d)
        throw domain_error("block spec length does not match graph size");
    if (!g.is_star_forest())
        throw structure_error("T_q enumeration requires a *-forest graph");

    auto forest = detail::root_forest(g);
    std::vector<std::size_t> looped;
    for (std::size_t x = 0; x < d; ++x)
        if (g.has_self_loop(x))
            looped.push_back(x);

    std::vector<CrossingMatrix> out;
    std::vector<unsigned> split(looped.size(), 0);
    std::vector<long> residual(q.begin(), q.end());

    // Odometer over the split values, last vertex fastest.
    auto recurse = [&](auto&& self, std::size_t k) -> void {
        if (k == looped.size())
        {
            CrossingMatrix n(d);
            for (std::size_t s = 0; s < looped.size(); ++s)
                n(looped[s], looped[s]) = split[s];
            if (detail::solve_forest(forest, residual, n))
                out.push_back(std::move(n));
            return;
        }
        std::size_t x = looped[k];
        for (unsigned v = 0; v <= q[x]; ++v)
        {
            split[k] = v;
            residual[x] = static_cast<long>(q[x]) - v;
            self(self, k + 1);
        }
        residual[x] = q[x];
    };
    recurse(recurse, 0);
    return out;
}

} // namespace alphaperm
