// SPDX-License-Identifier: Apache-2.0
//! \file alphaperm/graph.hpp
#pragma once

#include <cstddef>
#include <numeric>
#include <string_view>
#include <utility>
#include <vector>

#include "matrix.hpp"

namespace alphaperm
{

enum class GraphClass
{
    forest,      //!< acyclic, no self-loops
    star_forest, //!< only cycles are self-loops (has at least one)
    general      //!< contains a cycle of length >= 3
};

inline std::string_view to_string(GraphClass c)
{
    switch (c)
    {
        case GraphClass::forest:
            return "forest";
        case GraphClass::star_forest:
            return "star-forest";
        case GraphClass::general:
            return "general";
    }
    return "?";
}

//---------------------------------------------------------------------------//
//! Disjoint-set forest with path halving and union by size.
class UnionFind
{
  public:
    explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1)
    {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t find(std::size_t x)
    {
        while (parent_[x] != x)
        {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    //! Returns false if a and b were already connected.
    bool unite(std::size_t a, std::size_t b)
    {
        a = find(a);
        b = find(b);
        if (a == b)
            return false;
        if (size_[a] < size_[b])
            std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
        return true;
    }

  private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> size_;
};

//---------------------------------------------------------------------------//
/*!
 * Undirected graph induced by a square matrix: {i,j} is an edge iff
 * A_ij != 0 or A_ji != 0, including self-pairs {i,i}.
 */
class InducedGraph
{
  public:
    using Edge = std::pair<std::size_t, std::size_t>; //!< first <= second

    InducedGraph() = default;

    //! Build from an explicit edge list (pairs are normalised to i <= j).
    InducedGraph(std::size_t n, std::vector<Edge> const& edges)
        : n_(n), adjacent_(n * n, false), self_loop_(n, false)
    {
        for (auto [i, j] : edges)
            add_edge(i, j);
        classify();
    }

    std::size_t vertex_count() const { return n_; }

    bool has_edge(std::size_t i, std::size_t j) const
    {
        return adjacent_[i * n_ + j];
    }
    bool has_self_loop(std::size_t i) const { return self_loop_[i]; }

    //! Edges in canonical order: lexicographic in (i, j) with i <= j.
    std::vector<Edge> const& edges() const { return edges_; }

    //! Neighbours of i excluding i itself, ascending.
    std::vector<std::size_t> neighbours(std::size_t i) const
    {
        std::vector<std::size_t> out;
        for (std::size_t j = 0; j < n_; ++j)
            if (j != i && has_edge(i, j))
                out.push_back(j);
        return out;
    }

    GraphClass classification() const { return class_; }
    bool is_star_forest() const { return class_ != GraphClass::general; }
    bool is_forest() const { return class_ == GraphClass::forest; }

    //! Component label per vertex; labels are the minimal vertex index.
    std::vector<std::size_t> components() const
    {
        UnionFind uf(n_);
        for (auto [i, j] : edges_)
            uf.unite(i, j);
        std::vector<std::size_t> root_min(n_, n_);
        for (std::size_t v = 0; v < n_; ++v)
        {
            auto r = uf.find(v);
            if (root_min[r] == n_)
                root_min[r] = v;
        }
        std::vector<std::size_t> label(n_);
        for (std::size_t v = 0; v < n_; ++v)
            label[v] = root_min[uf.find(v)];
        return label;
    }

  private:
    std::size_t n_ = 0;
    std::vector<bool> adjacent_;
    std::vector<bool> self_loop_;
    std::vector<Edge> edges_;
    GraphClass class_ = GraphClass::forest;

    void add_edge(std::size_t i, std::size_t j)
    {
        if (i >= n_ || j >= n_)
            throw domain_error("edge endpoint out of range");
        adjacent_[i * n_ + j] = true;
        adjacent_[j * n_ + i] = true;
        if (i == j)
            self_loop_[i] = true;
    }

    void classify()
    {
        edges_.clear();
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i; j < n_; ++j)
                if (has_edge(i, j))
                    edges_.emplace_back(i, j);

        UnionFind uf(n_);
        bool cyclic = false;
        bool loops = false;
        for (auto [i, j] : edges_)
        {
            if (i == j)
                loops = true;
            else if (!uf.unite(i, j))
                cyclic = true;
        }
        class_ = cyclic  ? GraphClass::general
                 : loops ? GraphClass::star_forest
                         : GraphClass::forest;
    }
};

template<Scalar T>
InducedGraph graph_of_matrix(SquareMatrix<T> const& a)
{
    std::vector<InducedGraph::Edge> edges;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = i; j < a.dim(); ++j)
            if (!a.is_zero(i, j) || !a.is_zero(j, i))
                edges.emplace_back(i, j);
    return InducedGraph(a.dim(), edges);
}

} // namespace alphaperm
