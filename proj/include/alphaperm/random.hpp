// SPDX-License-Identifier: Apache-2.0
//! \file alphaperm/random.hpp
//! Seeded streams and negative binomial / negative multinomial samplers.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "errors.hpp"

namespace alphaperm
{

using Engine = std::mt19937_64;

//! Replicas are grouped in fixed blocks; block b always uses the same stream.
inline constexpr std::uint64_t replica_block = 1024;

inline Engine block_engine(std::uint64_t seed, std::uint64_t block)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(block),
                      static_cast<std::uint32_t>(block >> 32)};
    return Engine(seq);
}

//! Poisson(mean) with mean 0 allowed.
template<class Rng>
std::uint64_t poisson_sample(double mean, Rng& rng)
{
    if (!(mean >= 0) || !std::isfinite(mean))
        throw domain_error("Poisson mean must be finite and nonnegative");
    if (mean == 0)
        return 0;
    return std::poisson_distribution<std::uint64_t>(mean)(rng);
}

/*!
 * NB(r, p): P(k) = Gamma(k + r) (1 - p)^r p^k / (Gamma(r) k!).
 * Sampled as Poisson(lambda) with lambda ~ Gamma(r, p / (1 - p)).
 */
template<class Rng>
std::uint64_t nb_sample(double r, double p, Rng& rng)
{
    if (!(r > 0) || !std::isfinite(r))
        throw domain_error("negative binomial needs r > 0");
    if (!(p >= 0 && p < 1))
        throw domain_error("negative binomial needs 0 <= p < 1");
    if (p == 0)
        return 0;
    double lambda = std::gamma_distribution<double>(r, p / (1 - p))(rng);
    return poisson_sample(lambda, rng);
}

//! Multi(m, w / |w|) by sequential binomial splitting.
template<class Rng>
std::vector<std::uint64_t>
multinomial_sample(std::uint64_t m, std::span<double const> w, Rng& rng)
{
    std::vector<std::uint64_t> out(w.size(), 0);
    std::vector<double> suffix(w.size() + 1, 0.0);
    for (std::size_t i = w.size(); i-- > 0;)
    {
        if (!(w[i] >= 0))
            throw domain_error("multinomial weights must be nonnegative");
        suffix[i] = suffix[i + 1] + w[i];
    }
    if (m > 0 && !(suffix[0] > 0))
        throw domain_error("multinomial weights sum to zero");
    for (std::size_t i = 0; i < w.size() && m > 0; ++i)
    {
        if (suffix[i + 1] == 0)
        {
            out[i] = m;
            break;
        }
        double pi = std::min(1.0, w[i] / suffix[i]);
        std::uint64_t k = pi <= 0 ? 0 : std::binomial_distribution<std::uint64_t>(m, pi)(rng);
        out[i] = k;
        m -= k;
    }
    return out;
}

/*!
 * NM(r, p) for |p|_1 < 1: an NB(r, |p|_1) total split multinomially in
 * proportion to p.
 */
template<class Rng>
std::vector<std::uint64_t> nm_sample(double r, std::span<double const> p, Rng& rng)
{
    double total = 0;
    for (double v : p)
    {
        if (!(v >= 0))
            throw domain_error("negative multinomial needs nonnegative p");
        total += v;
    }
    if (!(total < 1))
        throw domain_error("negative multinomial needs |p|_1 < 1");
    auto k = nb_sample(r, total, rng);
    return multinomial_sample(k, p, rng);
}

} // namespace alphaperm
