// SPDX-License-Identifier: Apache-2.0
//! \file alphaperm/soup.hpp
//! Poisson loop soup sampling and occupation fields.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "chain.hpp"
#include "crossing.hpp"
#include "loop.hpp"
#include "random.hpp"

namespace alphaperm
{

//! Hard limit on sampled loop length.
inline constexpr std::size_t max_loop_length = 1'000'000;

template<Scalar T>
SubMarkovChain<double> to_float_chain(SubMarkovChain<T> const& c)
{
    return validate_chain(c.matrix().template cast<double>(), c.labels());
}

struct LoopSoupSample
{
    std::vector<UnrootedLoop> loops; //!< sorted, repeats kept
    double alpha = 0;
    std::uint64_t seed = 0;
};

struct OccupationFields
{
    BlockSpec theta;          //!< visits per vertex
    CrossingMatrix crossings; //!< N_xy, ordered
};

//---------------------------------------------------------------------------//
/*!
 * Draws loops from mu / |mu|: length n with probability tr(P^n) / (n |mu|),
 * root x with probability (P^n)_xx / tr(P^n), then a bridge from x to x of
 * length n built one step at a time. Powers of P are cached as the length
 * distribution is explored. Not thread-safe; use one sampler per worker.
 */
class LoopSampler
{
  public:
    LoopSampler(SubMarkovChain<double> chain, double alpha)
        : chain_(std::move(chain)), alpha_(alpha)
    {
        if (!(alpha > 0) || !std::isfinite(alpha))
            throw domain_error("alpha must be positive");
        mass_ = alphaperm::total_mass(chain_);
        if (mass_ < 0)
            mass_ = 0;
        pow_.push_back(SquareMatrix<double>::identity(chain_.dim()));
        cdf_.push_back(0.0);
    }

    SubMarkovChain<double> const& chain() const { return chain_; }
    double alpha() const { return alpha_; }
    double total_mass() const { return mass_; }

    template<class Rng>
    UnrootedLoop sample_loop(Rng& rng)
    {
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        std::size_t const n = sample_length(unif(rng));
        std::size_t const d = chain_.dim();
        auto const& pn = pow_[n];

        double tr = 0;
        for (std::size_t x = 0; x < d; ++x)
            tr += pn(x, x);
        std::size_t root = pick(unif(rng) * tr, d, [&](std::size_t x) { return pn(x, x); });

        RootedLoop loop(n);
        loop[0] = root;
        std::size_t z = root;
        auto const& p = chain_.matrix();
        for (std::size_t k = 1; k < n; ++k)
        {
            std::size_t const rest = n - k; // steps left after this one
            auto const& next = pow_[rest];
            double total = 0;
            for (std::size_t y = 0; y < d; ++y)
                total += p(z, y) * next(y, root);
            z = pick(unif(rng) * total, d,
                     [&](std::size_t y) { return p(z, y) * next(y, root); });
            loop[k] = z;
        }
        return UnrootedLoop(loop);
    }

    //! One soup: K ~ Poisson(alpha |mu|) i.i.d. loops, sorted.
    template<class Rng>
    std::vector<UnrootedLoop> sample_soup(Rng& rng)
    {
        auto k = poisson_sample(alpha_ * mass_, rng);
        std::vector<UnrootedLoop> loops;
        loops.reserve(k);
        for (std::uint64_t i = 0; i < k; ++i)
            loops.push_back(sample_loop(rng));
        std::sort(loops.begin(), loops.end());
        return loops;
    }

  private:
    SubMarkovChain<double> chain_;
    double alpha_;
    double mass_ = 0;
    std::vector<SquareMatrix<double>> pow_; //!< pow_[n] = P^n
    std::vector<double> cdf_;               //!< cdf_[n] = P(length <= n)

    template<class W>
    static std::size_t pick(double target, std::size_t d, W weight)
    {
        std::size_t last = d;
        double acc = 0;
        for (std::size_t y = 0; y < d; ++y)
        {
            double w = weight(y);
            if (w <= 0)
                continue;
            last = y;
            acc += w;
            if (target < acc)
                return y;
        }
        if (last == d)
            throw internal_error("loop sampler reached a state with no admissible step");
        return last;
    }

    //! Extend the caches by one power; false when P^n has underflowed to zero.
    bool extend()
    {
        std::size_t n = pow_.size();
        if (n > max_loop_length)
            throw internal_error("loop length exceeded the safety cap of "
                                 + std::to_string(max_loop_length));
        pow_.push_back(pow_.back() * chain_.matrix());
        auto const& pn = pow_.back();
        double tr = 0, top = 0;
        for (std::size_t x = 0; x < pn.dim(); ++x)
        {
            tr += pn(x, x);
            for (std::size_t y = 0; y < pn.dim(); ++y)
                top = std::max(top, pn(x, y));
        }
        cdf_.push_back(cdf_.back() + tr / (static_cast<double>(n) * mass_));
        return top > 0;
    }

    std::size_t sample_length(double u)
    {
        auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        if (it != cdf_.end())
            return static_cast<std::size_t>(it - cdf_.begin());
        while (true)
        {
            bool alive = extend();
            if (cdf_.back() > u)
                return cdf_.size() - 1;
            if (!alive)
            {
                // rounding left u above the accumulated mass
                for (std::size_t n = cdf_.size() - 1; n > 0; --n)
                    if (cdf_[n] > cdf_[n - 1])
                        return n;
                throw internal_error("loop length distribution is empty");
            }
        }
    }
};

//---------------------------------------------------------------------------//
template<Scalar T>
LoopSoupSample sample_soup(SubMarkovChain<T> const& chain, double alpha, std::uint64_t seed)
{
    LoopSampler sampler(to_float_chain(chain), alpha);
    auto rng = block_engine(seed, 0);
    return {sampler.sample_soup(rng), alpha, seed};
}

inline OccupationFields occupation_fields(std::span<UnrootedLoop const> loops, std::size_t d)
{
    OccupationFields f{BlockSpec(d, 0), CrossingMatrix(d)};
    for (auto const& l : loops)
    {
        auto const& v = l.vertices();
        for (std::size_t k = 0; k < v.size(); ++k)
        {
            ++f.theta[v[k]];
            ++f.crossings(v[k], v[(k + 1) % v.size()]);
        }
    }
    return f;
}

inline OccupationFields occupation_fields(LoopSoupSample const& s, std::size_t d)
{
    return occupation_fields(std::span<UnrootedLoop const>(s.loops), d);
}

//---------------------------------------------------------------------------//
/*!
 * Run `samples` replicas split into blocks of \c replica_block. Block b uses
 * block_engine(seed, b), so the replica stream does not depend on the
 * number of workers. `make_worker(w)` returns a callable invoked as
 * f(engine, replica_index) for each replica handled by worker w.
 */
template<class MakeWorker>
void run_replicas(std::uint64_t samples, std::uint64_t seed, unsigned workers,
                  MakeWorker make_worker)
{
    if (workers == 0)
        throw domain_error("worker count must be positive");
    std::uint64_t const blocks = (samples + replica_block - 1) / replica_block;
    auto body = [&](unsigned w) {
        auto f = make_worker(w);
        for (std::uint64_t b = w; b < blocks; b += workers)
        {
            auto rng = block_engine(seed, b);
            std::uint64_t end = std::min(samples, (b + 1) * replica_block);
            for (std::uint64_t i = b * replica_block; i < end; ++i)
                f(rng, i);
        }
    };
    if (workers == 1)
    {
        body(0);
        return;
    }
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w)
        threads.emplace_back([&, w] {
            try
            {
                body(w);
            }
            catch (...)
            {
                errors[w] = std::current_exception();
            }
        });
    for (auto& t : threads)
        t.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

} // namespace alphaperm
