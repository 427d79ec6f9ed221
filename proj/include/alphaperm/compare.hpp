// SPDX-License-Identifier: Apache-2.0
//! \file alphaperm/compare.hpp
//! Empirical frequencies against a theoretical law.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "soup.hpp"

namespace alphaperm
{

struct ComparePolicy
{
    double min_tested_p = 1e-3;  //!< z-score is enforced only at or above this
    double z_limit = 4;          //!< |z| bound on tested outcomes
    double min_expected = 5;     //!< chi-square bin threshold
    double min_p_value = 1e-3;   //!< chi-square acceptance
    double law_tolerance = 1e-9; //!< enumerated mass may exceed one by this
    std::uint64_t min_samples = 1000;
};

struct LawRow
{
    std::string outcome;
    double theory = 0;
    std::uint64_t count = 0;
    double empirical = 0;
    double std_error = 0;
    double z = 0;
    bool tested = false;
    bool pass = true;
};

struct LawReport
{
    std::vector<LawRow> rows;
    std::uint64_t samples = 0;
    double theory_enumerated = 0;
    double tail_theory = 0;
    std::uint64_t tail_count = 0;
    double max_abs_z = 0;
    double chi_square = 0;
    unsigned dof = 0;
    double p_value = 1;
    bool pass = false;
    std::vector<std::string> failures;
};

/*!
 * Compare counts over `samples` replicas with `law` (outcome, probability).
 * Outcomes outside the law and the missing mass 1 - sum(law) form the tail.
 * Chi-square bins are the outcomes with expected count >= min_expected; the
 * remainder is pooled with the tail, and folded into the smallest bin when
 * the pool itself is too small.
 */
template<class Key>
LawReport empirical_compare(std::map<Key, std::uint64_t> const& counts, std::uint64_t samples,
                            std::vector<std::pair<Key, double>> const& law,
                            std::function<std::string(Key const&)> const& format,
                            ComparePolicy const& policy = {})
{
    LawReport rep;
    rep.samples = samples;
    if (samples < policy.min_samples)
        throw domain_error("at least " + std::to_string(policy.min_samples)
                           + " samples are required");
    double const m = static_cast<double>(samples);

    std::uint64_t enumerated_count = 0;
    struct Bin
    {
        double expected;
        double observed;
    };
    std::vector<Bin> bins;
    Bin pool{0, 0};
    for (auto const& [key, p] : law)
    {
        LawRow row;
        row.outcome = format(key);
        row.theory = p;
        auto it = counts.find(key);
        row.count = it == counts.end() ? 0 : it->second;
        enumerated_count += row.count;
        row.empirical = static_cast<double>(row.count) / m;
        row.std_error = std::sqrt(std::max(p * (1 - p), 0.0) / m);
        if (row.std_error > 0)
            row.z = (row.empirical - p) / row.std_error;
        else if (row.count > 0)
            row.z = std::numeric_limits<double>::infinity();
        row.tested = p >= policy.min_tested_p;
        if (p <= 0)
            row.pass = row.count == 0;
        else
            row.pass = !row.tested || std::fabs(row.z) <= policy.z_limit;
        if (!row.pass)
            rep.failures.push_back("outcome " + row.outcome + ": z = " + std::to_string(row.z));
        if (row.tested)
            rep.max_abs_z = std::max(rep.max_abs_z, std::fabs(row.z));
        rep.theory_enumerated += p;

        double expected = p * m;
        if (expected >= policy.min_expected)
            bins.push_back({expected, static_cast<double>(row.count)});
        else
        {
            pool.expected += expected;
            pool.observed += static_cast<double>(row.count);
        }
        rep.rows.push_back(std::move(row));
    }

    if (rep.theory_enumerated > 1 + policy.law_tolerance)
        rep.failures.push_back("enumerated law mass " + std::to_string(rep.theory_enumerated)
                               + " exceeds one");
    rep.tail_theory = std::max(0.0, 1 - rep.theory_enumerated);
    std::uint64_t total = 0;
    for (auto const& [key, c] : counts)
        total += c;
    if (total != samples)
        throw internal_error("outcome counts do not add up to the sample count");
    rep.tail_count = samples - enumerated_count;
    if (rep.tail_theory * m < 1e-6 && rep.tail_count > 0)
        rep.failures.push_back(std::to_string(rep.tail_count)
                               + " samples fell in a tail of negligible mass");

    pool.expected += rep.tail_theory * m;
    pool.observed += static_cast<double>(rep.tail_count);
    if (pool.expected >= policy.min_expected || bins.empty())
        bins.push_back(pool);
    else if (pool.expected > 0 || pool.observed > 0)
    {
        auto smallest = std::min_element(bins.begin(), bins.end(), [](Bin const& a, Bin const& b) {
            return a.expected < b.expected;
        });
        smallest->expected += pool.expected;
        smallest->observed += pool.observed;
    }

    for (auto const& b : bins)
        if (b.expected > 0)
            rep.chi_square += (b.observed - b.expected) * (b.observed - b.expected) / b.expected;
    if (bins.size() >= 2)
    {
        rep.dof = static_cast<unsigned>(bins.size() - 1);
        boost::math::chi_squared dist(rep.dof);
        rep.p_value = boost::math::cdf(boost::math::complement(dist, rep.chi_square));
    }
    if (rep.p_value < policy.min_p_value)
        rep.failures.push_back("chi-square p-value " + std::to_string(rep.p_value));
    rep.pass = rep.failures.empty();
    return rep;
}

/*!
 * Tally an outcome over replicas. `make_draw(w)` returns a callable
 * Key(Engine&) for worker w. Counting is order-independent, so the result
 * does not depend on the worker count.
 */
template<class Key, class MakeDraw>
std::map<Key, std::uint64_t> tally_replicas(std::uint64_t samples, std::uint64_t seed,
                                            unsigned workers, MakeDraw make_draw)
{
    std::vector<std::map<Key, std::uint64_t>> partial(std::max(workers, 1u));
    run_replicas(samples, seed, workers, [&](unsigned w) {
        return [&partial, w, draw = make_draw(w)](Engine& rng, std::uint64_t) mutable {
            ++partial[w][draw(rng)];
        };
    });
    std::map<Key, std::uint64_t> out;
    for (auto& p : partial)
        for (auto const& [k, c] : p)
            out[k] += c;
    return out;
}

} // namespace alphaperm
