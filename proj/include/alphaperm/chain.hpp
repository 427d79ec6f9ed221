// SPDX-License-Identifier: Apache-2.0
//! \file alphaperm/chain.hpp
//! Transient sub-Markovian chains and the reductions used to simplify the
//! loop soup: Green functions, h-transform to a single killing vertex, and
//! the star expansion that turns self-loops into two-step excursions.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "crossing.hpp"
#include "graph.hpp"
#include "matrix.hpp"

namespace alphaperm
{

//! Row sums may exceed one by at most this much in float mode.
inline constexpr double row_sum_tolerance = 1e-12;
//! Transience requires spectral radius < 1 - this margin.
inline constexpr double transience_margin = 1e-10;

//! Spectral radius of a real square matrix (double precision eigen-solve).
template<Scalar T>
double spectral_radius(SquareMatrix<T> const& p)
{
    std::size_t const d = p.dim();
    if (d == 0)
        return 0;
    Eigen::MatrixXd m(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            m(i, j) = scalar_traits<T>::to_double(p(i, j));
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
    if (solver.info() != Eigen::Success)
        throw internal_error("eigenvalue solver did not converge");
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

inline std::vector<std::string> default_labels(std::size_t d)
{
    std::vector<std::string> labels(d);
    for (std::size_t i = 0; i < d; ++i)
        labels[i] = std::to_string(i + 1);
    return labels;
}

//---------------------------------------------------------------------------//
/*!
 * A transient sub-Markovian transition matrix P on V = {0..d-1}.
 *
 * Construct through \c validate_chain, which checks nonnegativity, row sums
 * at most one, and spectral radius strictly below one. The killing
 * probability of x is 1 - sum_y P_xy.
 */
template<Scalar T>
class SubMarkovChain
{
  public:
    SubMarkovChain() = default;

    std::size_t dim() const { return p_.dim(); }
    SquareMatrix<T> const& matrix() const { return p_; }
    T const& operator()(std::size_t x, std::size_t y) const { return p_(x, y); }
    std::vector<T> const& killing() const { return killing_; }
    std::vector<std::string> const& labels() const { return labels_; }
    double spectral_radius() const { return rho_; }

    static SubMarkovChain validate(SquareMatrix<T> p, std::vector<std::string> labels);

  private:
    SquareMatrix<T> p_;
    std::vector<T> killing_;
    std::vector<std::string> labels_;
    double rho_ = 0;
};

template<Scalar T>
SubMarkovChain<T>
SubMarkovChain<T>::validate(SquareMatrix<T> p, std::vector<std::string> labels)
{
    std::size_t const d = p.dim();
    if (d == 0)
        throw domain_error("chain needs at least one vertex");
    if (labels.empty())
        labels = default_labels(d);
    if (labels.size() != d)
        throw domain_error("label count does not match chain dimension");

    SubMarkovChain<T> c;
    c.killing_.resize(d);
    for (std::size_t x = 0; x < d; ++x)
    {
        T sum(0);
        for (std::size_t y = 0; y < d; ++y)
        {
            if (p(x, y) < T(0))
                throw domain_error("negative transition probability in row "
                                   + labels[x]);
            sum += p(x, y);
        }
        T kill = T(1) - sum;
        if constexpr (is_exact_v<T>)
        {
            if (kill < 0)
                throw domain_error("row " + labels[x] + " sums to more than one");
        }
        else
        {
            if (kill < -row_sum_tolerance)
                throw domain_error("row " + labels[x] + " sums to more than one");
            if (kill < 0)
                kill = 0;
        }
        c.killing_[x] = kill;
    }
    c.rho_ = alphaperm::spectral_radius(p);
    if (!(c.rho_ < 1 - transience_margin))
        throw domain_error("chain is not transient: spectral radius "
                           + std::to_string(c.rho_));
    c.p_ = std::move(p);
    c.labels_ = std::move(labels);
    return c;
}

template<Scalar T>
SubMarkovChain<T> validate_chain(SquareMatrix<T> p, std::vector<std::string> labels = {})
{
    return SubMarkovChain<T>::validate(std::move(p), std::move(labels));
}

//---------------------------------------------------------------------------//
//! G = (I - P)^{-1}; exact in rational mode.
template<Scalar T>
SquareMatrix<T> green_function(SubMarkovChain<T> const& chain)
{
    return inverse(identity_minus(chain.matrix()));
}

template<Scalar T>
T det_I_minus_P(SubMarkovChain<T> const& chain)
{
    return determinant(identity_minus(chain.matrix()));
}

//! Green function of the chain killed on entering any vertex outside `alive`.
template<Scalar T>
SquareMatrix<T> killed_green_function(SquareMatrix<T> const& p,
                                      std::vector<std::size_t> const& alive)
{
    return inverse(identity_minus(p.principal(alive)));
}

template<Scalar T>
struct DetIdentityReport
{
    std::vector<std::size_t> ordering;
    std::vector<T> diagonal;    //!< G_{V \ {x_0..x_{j-1}}}(x_j, x_j)
    T product = T(1);           //!< product of the diagonal terms
    T determinant = T(0);       //!< det(I - P)
    bool pass = false;
};

/*!
 * det(I - P) = [prod_j G_{V \ {x_0..x_{j-1}}}(x_j, x_j)]^{-1} for the given
 * enumeration x_0, x_1, ... of V. Exact comparison in rational mode,
 * relative 1e-10 in float mode.
 */
template<Scalar T>
DetIdentityReport<T> det_identity_check(SubMarkovChain<T> const& chain,
                                        std::vector<std::size_t> const& ordering)
{
    std::size_t const d = chain.dim();
    std::vector<bool> seen(d, false);
    if (ordering.size() != d)
        throw domain_error("ordering must enumerate every vertex");
    for (auto x : ordering)
    {
        if (x >= d || seen[x])
            throw domain_error("ordering is not a permutation of the vertices");
        seen[x] = true;
    }

    DetIdentityReport<T> rep;
    rep.ordering = ordering;
    for (std::size_t j = 0; j < d; ++j)
    {
        // alive = ordering[j..]; x_j sits at position 0
        std::vector<std::size_t> alive(ordering.begin() + j, ordering.end());
        auto g = killed_green_function(chain.matrix(), alive);
        rep.diagonal.push_back(g(0, 0));
        rep.product *= g(0, 0);
    }
    rep.determinant = det_I_minus_P(chain);
    if constexpr (is_exact_v<T>)
    {
        rep.pass = rep.product * rep.determinant == 1;
    }
    else
    {
        rep.pass = std::fabs(rep.product * rep.determinant - 1) <= 1e-10;
    }
    return rep;
}

//---------------------------------------------------------------------------//
//! h(x) = P^x(hit x0), solving h(x0) = 1 and h = P h off x0.
template<Scalar T>
std::vector<T> hitting_probability(SubMarkovChain<T> const& chain, std::size_t x0)
{
    std::size_t const d = chain.dim();
    if (x0 >= d)
        throw domain_error("root vertex out of range");
    std::vector<std::size_t> rest;
    for (std::size_t x = 0; x < d; ++x)
        if (x != x0)
            rest.push_back(x);

    std::vector<T> h(d, T(0));
    h[x0] = T(1);
    if (rest.empty())
        return h;
    auto m = identity_minus(chain.matrix().principal(rest));
    std::vector<T> rhs(rest.size());
    for (std::size_t a = 0; a < rest.size(); ++a)
        rhs[a] = chain(rest[a], x0);
    auto sol = solve(m, rhs);
    for (std::size_t a = 0; a < rest.size(); ++a)
        h[rest[a]] = sol[a];
    return h;
}

/*!
 * Doob h-transform with h(x) = P^x(T_{x0} < infinity):
 * P^h_xy = P_xy h(y) / h(x). The transformed chain is killed only at x0.
 */
template<Scalar T>
SubMarkovChain<T> h_transform(SubMarkovChain<T> const& chain, std::size_t x0)
{
    auto h = hitting_probability(chain, x0);
    std::size_t const d = chain.dim();
    for (std::size_t x = 0; x < d; ++x)
    {
        bool positive;
        if constexpr (is_exact_v<T>)
            positive = sgn(h[x]) > 0;
        else
            positive = h[x] > 0;
        if (!positive)
            throw domain_error("vertex " + chain.labels()[x] + " cannot reach root "
                               + chain.labels()[x0]);
    }
    SquareMatrix<T> ph(d);
    for (std::size_t x = 0; x < d; ++x)
        for (std::size_t y = 0; y < d; ++y)
            if (!chain.matrix().is_zero(x, y))
                ph(x, y) = chain(x, y) * h[y] / h[x];
    if constexpr (!is_exact_v<T>)
    {
        // remove rounding excess so non-root rows are exactly stochastic-or-less
        for (std::size_t x = 0; x < d; ++x)
        {
            T sum(0);
            for (std::size_t y = 0; y < d; ++y)
                sum += ph(x, y);
            if (sum > T(1))
                for (std::size_t y = 0; y < d; ++y)
                    ph(x, y) /= sum;
        }
    }
    return validate_chain(std::move(ph), chain.labels());
}

//---------------------------------------------------------------------------//
/*!
 * Star expansion: every self-loop x -> x becomes x -> x* -> x through a new
 * copy vertex x*, with P*_{x,x*} = P_xx and P*_{x*,x} = 1. Off-diagonal
 * transitions are kept and P*_xx = 0, so G(P*) has no self-loops.
 *
 * By default copies are only created for vertices with P_xx != 0; `full`
 * adds a copy of every vertex.
 */
template<Scalar T>
struct StarExpansion
{
    SubMarkovChain<T> chain;
    std::vector<std::size_t> origin;             //!< base vertex of each new vertex
    std::vector<std::optional<std::size_t>> copy; //!< copy vertex of each base vertex
    std::size_t base_dim = 0;

    //! Project crossings on V u V* back to V: n_xx = n*_{x,x*}.
    CrossingMatrix project(CrossingMatrix const& star) const
    {
        CrossingMatrix n(base_dim);
        for (std::size_t x = 0; x < base_dim; ++x)
        {
            for (std::size_t y = 0; y < base_dim; ++y)
                if (x != y)
                    n(x, y) = star(x, y);
            if (copy[x])
                n(x, x) = star(x, *copy[x]);
        }
        return n;
    }
};

template<Scalar T>
StarExpansion<T> star_expand(SubMarkovChain<T> const& chain, bool full = false)
{
    std::size_t const d = chain.dim();
    StarExpansion<T> out;
    out.base_dim = d;
    out.copy.assign(d, std::nullopt);
    out.origin.resize(d);
    for (std::size_t x = 0; x < d; ++x)
        out.origin[x] = x;
    auto labels = chain.labels();
    for (std::size_t x = 0; x < d; ++x)
    {
        if (full || !chain.matrix().is_zero(x, x))
        {
            out.copy[x] = out.origin.size();
            out.origin.push_back(x);
            labels.push_back(chain.labels()[x] + "*");
        }
    }
    SquareMatrix<T> ps(out.origin.size());
    for (std::size_t x = 0; x < d; ++x)
    {
        for (std::size_t y = 0; y < d; ++y)
            if (x != y)
                ps(x, y) = chain(x, y);
        if (out.copy[x])
        {
            ps(x, *out.copy[x]) = chain(x, x);
            ps(*out.copy[x], x) = T(1);
        }
    }
    out.chain = validate_chain(std::move(ps), std::move(labels));
    return out;
}

} // namespace alphaperm
