// SPDX-License-Identifier: Apache-2.0
//! \file alphaperm/block.hpp
#pragma once

#include <cstddef>
#include <numeric>
#include <vector>

#include "matrix.hpp"

namespace alphaperm
{

//! Repetition counts q; vertex i is repeated q[i] times in A[q].
using BlockSpec = std::vector<unsigned>;

inline std::size_t order(BlockSpec const& q)
{
    return std::accumulate(q.begin(), q.end(), std::size_t{0});
}

//! A[q] together with the base vertex of every copy.
template<Scalar T>
struct BlockMatrix
{
    SquareMatrix<T> matrix;
    std::vector<std::size_t> base; //!< base[a] = i for every copy a of vertex i
};

//! Copy-to-base map: copies of vertex 0 first, then vertex 1, ...
inline std::vector<std::size_t> block_base_map(BlockSpec const& q)
{
    std::vector<std::size_t> base;
    base.reserve(order(q));
    for (std::size_t i = 0; i < q.size(); ++i)
        base.insert(base.end(), q[i], i);
    return base;
}

/*!
 * Expand A into the block matrix A[q] of order |q|, whose (a, b) entry is
 * A(base[a], base[b]). Throws for |q| = 0; callers treat that case as the
 * empty matrix with permanent one.
 */
template<Scalar T>
BlockMatrix<T> block_expand(SquareMatrix<T> const& a, BlockSpec const& q)
{
    if (q.size() != a.dim())
        throw domain_error("block spec length does not match matrix dimension");
    auto base = block_base_map(q);
    if (base.empty())
        throw size_error("block expansion with |q| = 0 yields an empty matrix");
    SquareMatrix<T> m(base.size());
    for (std::size_t r = 0; r < base.size(); ++r)
        for (std::size_t c = 0; c < base.size(); ++c)
            m(r, c) = a(base[r], base[c]);
    return {std::move(m), std::move(base)};
}

} // namespace alphaperm
