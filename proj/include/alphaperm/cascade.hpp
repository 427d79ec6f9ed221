// SPDX-License-Identifier: Apache-2.0
//! \file alphaperm/cascade.hpp
//! Exact sampling of (theta, N) on *-forest chains by a negative
//! multinomial cascade down a rooted tree.
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "chain.hpp"
#include "random.hpp"
#include "soup.hpp"

namespace alphaperm
{

//! Killing below this is treated as zero in the tree precondition.
inline constexpr double cascade_kill_tolerance = 1e-12;

namespace detail
{
struct TreeOrder
{
    std::vector<std::size_t> parent; //!< parent[root] == root
    std::vector<std::size_t> order;  //!< breadth-first from the root
    std::vector<std::vector<std::size_t>> children;
};

inline TreeOrder tree_order(InducedGraph const& g, std::size_t root)
{
    std::size_t const d = g.vertex_count();
    TreeOrder t{std::vector<std::size_t>(d, d), {root}, std::vector<std::vector<std::size_t>>(d)};
    t.parent[root] = root;
    for (std::size_t head = 0; head < t.order.size(); ++head)
    {
        std::size_t x = t.order[head];
        for (std::size_t y : g.neighbours(x))
        {
            if (t.parent[y] != d)
                continue;
            t.parent[y] = x;
            t.children[x].push_back(y);
            t.order.push_back(y);
        }
    }
    return t;
}
} // namespace detail

//---------------------------------------------------------------------------//
/*!
 * Prepared cascade on a tree chain killed only at the root.
 *
 * (N_{x0,c})_c ~ NM(alpha, P_{x0,.}); then, breadth first, for x with
 * N_{x,parent} = m, (N_{x,c})_c ~ NM(m + alpha, P_{x,.} over children), and
 * N_{c,x} = N_{x,c}. theta is the row sum.
 */
class TreeCascade
{
  public:
    TreeCascade(SubMarkovChain<double> const& chain, std::size_t root, double alpha)
        : alpha_(alpha), d_(chain.dim()), root_(root)
    {
        if (!(alpha > 0) || !std::isfinite(alpha))
            throw domain_error("alpha must be positive");
        if (root >= d_)
            throw domain_error("root vertex out of range");
        auto g = graph_of_matrix(chain.matrix());
        if (g.classification() != GraphClass::forest)
            throw structure_error("cascade requires a tree without self-loops");
        for (std::size_t x = 0; x < d_; ++x)
            if (x != root && chain.killing()[x] > cascade_kill_tolerance)
                throw structure_error("cascade requires killing only at the root; vertex "
                                      + chain.labels()[x] + " is killed");
        tree_ = detail::tree_order(g, root);
        if (tree_.order.size() != d_)
            throw structure_error("cascade requires a connected tree");
        probs_.resize(d_);
        for (std::size_t x = 0; x < d_; ++x)
            for (std::size_t c : tree_.children[x])
                probs_[x].push_back(chain(x, c));
    }

    std::size_t dim() const { return d_; }

    //! Adds the sampled crossings into n (vertex indices of the chain).
    template<class Rng>
    void sample_into(Rng& rng, CrossingMatrix& n) const
    {
        std::vector<std::uint64_t> up(d_, 0); // N_{x, parent x}
        for (std::size_t x : tree_.order)
        {
            auto const& kids = tree_.children[x];
            if (kids.empty())
                continue;
            double r = alpha_ + static_cast<double>(x == root_ ? 0 : up[x]);
            auto counts = nm_sample(r, std::span<double const>(probs_[x]), rng);
            for (std::size_t k = 0; k < kids.size(); ++k)
            {
                auto c = kids[k];
                up[c] = counts[k];
                n(x, c) += static_cast<unsigned>(counts[k]);
                n(c, x) += static_cast<unsigned>(counts[k]);
            }
        }
    }

    template<class Rng>
    OccupationFields sample(Rng& rng) const
    {
        OccupationFields f{BlockSpec(d_, 0), CrossingMatrix(d_)};
        sample_into(rng, f.crossings);
        f.theta = f.crossings.row_sums();
        return f;
    }

  private:
    double alpha_;
    std::size_t d_;
    std::size_t root_;
    detail::TreeOrder tree_;
    std::vector<std::vector<double>> probs_;
};

template<class Rng>
OccupationFields cascade_sample_tree(SubMarkovChain<double> const& chain, double alpha,
                                     std::size_t root, Rng& rng)
{
    return TreeCascade(chain, root, alpha).sample(rng);
}

//---------------------------------------------------------------------------//
/*!
 * Cascade for any *-forest chain.
 *
 * Self-loops are first replaced by star copies. The expanded chain is split
 * into components joined by edges used in both directions; a one-way
 * transition can never lie on a loop, so inside a component it acts as
 * killing. Each component is h-transformed towards its root (the minimal
 * index, or `root` for the component containing it) and sampled with a
 * TreeCascade. Crossings are projected back with n_xx = n*_{x,x*}.
 */
class ForestCascade
{
  public:
    template<Scalar T>
    ForestCascade(SubMarkovChain<T> const& chain, double alpha,
                  std::optional<std::size_t> root = std::nullopt)
    {
        auto g = graph_of_matrix(chain.matrix());
        if (!g.is_star_forest())
            throw structure_error("cascade requires a *-forest chain");
        if (root && *root >= chain.dim())
            throw domain_error("root vertex out of range");
        star_ = star_expand(to_float_chain(chain));
        auto const& ps = star_.chain.matrix();
        std::size_t const ds = ps.dim();

        UnionFind uf(ds);
        for (std::size_t x = 0; x < ds; ++x)
            for (std::size_t y = x + 1; y < ds; ++y)
                if (ps(x, y) > 0 && ps(y, x) > 0)
                    uf.unite(x, y);
        std::vector<std::size_t> comp_of(ds, ds);
        for (std::size_t x = 0; x < ds; ++x)
        {
            auto r = uf.find(x);
            if (comp_of[r] == ds)
            {
                comp_of[r] = parts_.size();
                parts_.push_back({});
            }
            parts_[comp_of[r]].members.push_back(x);
        }
        for (auto& part : parts_)
        {
            std::size_t local_root = 0; // members are ascending
            if (root)
                for (std::size_t a = 0; a < part.members.size(); ++a)
                    if (part.members[a] == *root)
                        local_root = a;
            auto sub = validate_chain(ps.principal(part.members));
            auto h = h_transform(sub, local_root);
            part.cascade.emplace(h, local_root, alpha);
        }
    }

    std::size_t dim() const { return star_.base_dim; }

    template<class Rng>
    OccupationFields sample(Rng& rng) const
    {
        std::size_t const ds = star_.chain.dim();
        CrossingMatrix star(ds);
        for (auto const& part : parts_)
        {
            std::size_t const m = part.members.size();
            CrossingMatrix local(m);
            part.cascade->sample_into(rng, local);
            for (std::size_t a = 0; a < m; ++a)
                for (std::size_t b = 0; b < m; ++b)
                    star(part.members[a], part.members[b]) = local(a, b);
        }
        OccupationFields f;
        f.crossings = star_.project(star);
        f.theta = f.crossings.row_sums();
        return f;
    }

    StarExpansion<double> const& expansion() const { return star_; }

  private:
    struct Part
    {
        std::vector<std::size_t> members;
        std::optional<TreeCascade> cascade;
    };
    StarExpansion<double> star_;
    std::vector<Part> parts_;
};

template<Scalar T, class Rng>
OccupationFields cascade_sample_general(SubMarkovChain<T> const& chain, double alpha,
                                        std::size_t root, Rng& rng)
{
    return ForestCascade(chain, alpha, root).sample(rng);
}

} // namespace alphaperm
