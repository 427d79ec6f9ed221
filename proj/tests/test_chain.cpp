// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "alphaperm/chain.hpp"
#include "alphaperm/loop.hpp"
#include "oracles.hpp"

using namespace alphaperm;

namespace
{
Rational R(char const* s)
{
    return parse_rational(s);
}

SubMarkovChain<Rational> p2()
{
    return validate_chain(SquareMatrix<Rational>{{0, R("1/2")}, {R("1/2"), 0}});
}

std::vector<std::size_t> iota_vec(std::size_t d)
{
    std::vector<std::size_t> v(d);
    std::iota(v.begin(), v.end(), std::size_t{0});
    return v;
}
} // namespace

TEST(ValidateChain, Examples)
{
    auto c = p2();
    EXPECT_EQ(c.killing(), (std::vector<Rational>{R("1/2"), R("1/2")}));
    EXPECT_EQ(c.labels(), (std::vector<std::string>{"1", "2"}));
    EXPECT_THROW(validate_chain(SquareMatrix<Rational>{{0, 1}, {1, 0}}), domain_error);
    auto third = validate_chain(
        SquareMatrix<Rational>{{R("1/3"), R("1/3")}, {R("1/3"), R("1/3")}});
    EXPECT_EQ(third.killing()[0], R("1/3"));
    EXPECT_NEAR(third.spectral_radius(), 2.0 / 3.0, 1e-12);
}

TEST(ValidateChain, Rejections)
{
    EXPECT_THROW(validate_chain(SquareMatrix<Rational>{{R("-1/2")}}), domain_error);
    EXPECT_THROW(validate_chain(SquareMatrix<Rational>{{R("3/4"), R("1/2")}, {0, 0}}),
                 domain_error);
    EXPECT_THROW(validate_chain(SquareMatrix<double>{{1.0}}), domain_error);
    EXPECT_NO_THROW(validate_chain(SquareMatrix<double>{{0.5, 0.5 + 1e-13}, {0, 0}}));
    EXPECT_THROW(validate_chain(SquareMatrix<Rational>(0)), domain_error);
    EXPECT_THROW(validate_chain(SquareMatrix<Rational>{{0}}, {"a", "b"}), domain_error);
}

TEST(GreenFunction, Examples)
{
    auto c = p2();
    SquareMatrix<Rational> g{{R("4/3"), R("2/3")}, {R("2/3"), R("4/3")}};
    EXPECT_EQ(green_function(c), g);
    EXPECT_EQ(det_I_minus_P(c), R("3/4"));

    auto z = validate_chain(SquareMatrix<Rational>(3));
    EXPECT_EQ(green_function(z), SquareMatrix<Rational>::identity(3));
    EXPECT_EQ(det_I_minus_P(z), Rational(1));

    auto h = validate_chain(SquareMatrix<Rational>{{R("1/2")}});
    EXPECT_EQ(green_function(h), (SquareMatrix<Rational>{{2}}));
    EXPECT_EQ(det_I_minus_P(h), R("1/2"));
}

TEST(DetIdentity, TwoVertexByHand)
{
    auto rep = det_identity_check(p2(), {0, 1});
    EXPECT_EQ(rep.diagonal, (std::vector<Rational>{R("4/3"), Rational(1)}));
    EXPECT_EQ(rep.product, R("4/3"));
    EXPECT_EQ(rep.determinant, R("3/4"));
    EXPECT_TRUE(rep.pass);
    EXPECT_THROW(det_identity_check(p2(), {0, 0}), domain_error);
}

TEST(DetIdentity, DiagonalChain)
{
    auto c = validate_chain(
        SquareMatrix<Rational>{{R("1/2"), 0, 0}, {0, R("1/3"), 0}, {0, 0, R("1/5")}});
    auto rep = det_identity_check(c, {2, 0, 1});
    EXPECT_EQ(rep.product, Rational(5, 4) * 2 * Rational(3, 2));
    EXPECT_TRUE(rep.pass);
}

TEST(DetIdentity, EveryOrderingOnRandomChains)
{
    std::mt19937 rng(17);
    for (int trial = 0; trial < 20; ++trial)
    {
        std::size_t d = 1 + trial % 4;
        auto c = oracle::random_chain(rng, d);
        auto ord = iota_vec(d);
        do
        {
            ASSERT_TRUE(det_identity_check(c, ord).pass);
        } while (std::next_permutation(ord.begin(), ord.end()));
    }
}

TEST(GreenFunction, Invariants)
{
    std::mt19937 rng(3);
    for (int trial = 0; trial < 20; ++trial)
    {
        auto c = oracle::random_chain(rng, 1 + trial % 4);
        auto g = green_function(c);
        auto id = SquareMatrix<Rational>::identity(c.dim());
        EXPECT_EQ(g * identity_minus(c.matrix()), id);
        EXPECT_EQ(identity_minus(c.matrix()) * g, id);
        for (std::size_t x = 0; x < c.dim(); ++x)
        {
            EXPECT_GE(g(x, x), 1);
            for (std::size_t y = 0; y < c.dim(); ++y)
                EXPECT_GE(g(x, y), 0);
        }
        auto gf = green_function(validate_chain(c.matrix().cast<double>()));
        for (std::size_t x = 0; x < c.dim(); ++x)
            for (std::size_t y = 0; y < c.dim(); ++y)
                EXPECT_NEAR(gf(x, y), g(x, y).get_d(), 1e-12);
    }
}

TEST(HTransform, TwoVertexByHand)
{
    auto c = p2();
    EXPECT_EQ(hitting_probability(c, 0), (std::vector<Rational>{1, R("1/2")}));
    auto h = h_transform(c, 0);
    EXPECT_EQ(h.matrix(), (SquareMatrix<Rational>{{0, R("1/4")}, {1, 0}}));
    EXPECT_EQ(h.killing(), (std::vector<Rational>{R("3/4"), 0}));
    EXPECT_EQ(det_I_minus_P(h), R("3/4"));
}

TEST(HTransform, UnreachableRootIsRejected)
{
    auto c = validate_chain(SquareMatrix<Rational>{{0, 0}, {R("1/2"), 0}});
    EXPECT_THROW(h_transform(c, 1), domain_error);
    EXPECT_NO_THROW(h_transform(c, 0));
}

TEST(HTransform, PreservesDeterminantAndKillsOnlyAtRoot)
{
    std::mt19937 rng(99);
    int done = 0;
    for (int trial = 0; trial < 60 && done < 25; ++trial)
    {
        auto c = oracle::random_chain(rng, 1 + trial % 4, 0.2);
        std::size_t x0 = trial % c.dim();
        auto h = hitting_probability(c, x0);
        if (std::any_of(h.begin(), h.end(), [](Rational const& v) { return sgn(v) == 0; }))
            continue;
        auto t = h_transform(c, x0);
        EXPECT_EQ(det_I_minus_P(t), det_I_minus_P(c));
        for (std::size_t x = 0; x < c.dim(); ++x)
            if (x != x0)
                EXPECT_EQ(t.killing()[x], 0);
        auto gc = green_function(c), gt = green_function(t);
        for (std::size_t x = 0; x < c.dim(); ++x)
            EXPECT_EQ(gc(x, x), gt(x, x));
        ++done;
    }
    EXPECT_EQ(done, 25);
}

TEST(StarExpand, SingleLoopedVertex)
{
    auto c = validate_chain(SquareMatrix<Rational>{{R("1/2")}});
    auto s = star_expand(c);
    EXPECT_EQ(s.chain.matrix(), (SquareMatrix<Rational>{{0, R("1/2")}, {1, 0}}));
    EXPECT_EQ(s.chain.labels(), (std::vector<std::string>{"1", "1*"}));
    EXPECT_EQ(det_I_minus_P(s.chain), R("1/2"));
    EXPECT_EQ(s.origin, (std::vector<std::size_t>{0, 0}));

    CrossingMatrix star(2);
    star(0, 1) = star(1, 0) = 3;
    auto n = s.project(star);
    EXPECT_EQ(n(0, 0), 3u);
}

TEST(StarExpand, NoLoopsMeansNoCopies)
{
    auto s = star_expand(p2());
    EXPECT_EQ(s.chain.matrix(), p2().matrix());
    EXPECT_FALSE(s.copy[0]);
    auto full = star_expand(p2(), true);
    EXPECT_EQ(full.chain.dim(), 4u);
    EXPECT_EQ(det_I_minus_P(full.chain), R("3/4"));
}

TEST(StarExpand, PreservesDeterminantAndRemovesSelfLoops)
{
    std::mt19937 rng(5);
    for (int trial = 0; trial < 30; ++trial)
    {
        auto c = oracle::random_chain(rng, 1 + trial % 4);
        for (bool full : {false, true})
        {
            auto s = star_expand(c, full);
            EXPECT_EQ(det_I_minus_P(s.chain), det_I_minus_P(c));
            for (std::size_t x = 0; x < s.chain.dim(); ++x)
                EXPECT_TRUE(s.chain.matrix().is_zero(x, x));
        }
    }
}

TEST(Loops, MeasureExamples)
{
    auto c = p2();
    RootedLoop a{0, 1};
    RootedLoop b{0, 1, 0, 1};
    EXPECT_EQ(loop_measure<Rational>(a, c), R("1/4"));
    EXPECT_EQ(loop_measure<Rational>(b, c), R("1/32"));
    RootedLoop off{0, 0};
    EXPECT_EQ(loop_measure<Rational>(off, c), 0);
    EXPECT_NEAR(total_mass(c), std::log(4.0 / 3.0), 1e-15);
    double series = 0;
    for (int k = 1; k < 60; ++k)
        series += std::pow(0.25, k) / k;
    EXPECT_NEAR(total_mass(c), series, 1e-15);
}

TEST(Loops, MultiplicityAndCanonicalForm)
{
    RootedLoop a{0, 1, 0, 1};
    EXPECT_EQ(loop_multiplicity(a), 2u);
    RootedLoop b{2, 2, 2};
    EXPECT_EQ(loop_multiplicity(b), 3u);
    RootedLoop c{0, 1, 0};
    EXPECT_EQ(loop_multiplicity(c), 1u);
    RootedLoop d{0, 0, 1, 0, 0, 1};
    EXPECT_EQ(loop_multiplicity(d), 2u);

    UnrootedLoop u(RootedLoop{2, 0, 1});
    EXPECT_EQ(u.vertices(), (std::vector<std::size_t>{0, 1, 2}));
    UnrootedLoop rev(RootedLoop{2, 1, 0});
    EXPECT_EQ(rev.vertices(), (std::vector<std::size_t>{0, 2, 1}));
    EXPECT_NE(u, rev);
    EXPECT_EQ(UnrootedLoop(u.vertices()), u);
}

TEST(Loops, RotationInvarianceProperty)
{
    std::mt19937 rng(41);
    std::uniform_int_distribution<std::size_t> len(1, 9), vert(0, 2);
    for (int trial = 0; trial < 300; ++trial)
    {
        RootedLoop l(len(rng));
        for (auto& v : l)
            v = vert(rng);
        UnrootedLoop u(l);
        // reference: minimum over all rotations
        RootedLoop best = l;
        auto rot = l;
        for (std::size_t k = 0; k < l.size(); ++k)
        {
            std::rotate(rot.begin(), rot.begin() + 1, rot.end());
            best = std::min(best, rot);
            ASSERT_EQ(UnrootedLoop(rot), u);
        }
        ASSERT_EQ(u.vertices(), best);
        std::size_t distinct = 0;
        std::map<RootedLoop, int> seen;
        rot = l;
        for (std::size_t k = 0; k < l.size(); ++k)
        {
            std::rotate(rot.begin(), rot.begin() + 1, rot.end());
            distinct += seen[rot]++ == 0;
        }
        ASSERT_EQ(distinct * u.multiplicity(), l.size());
    }
}

TEST(Loops, FormatAndParse)
{
    std::vector<std::string> labels{"a", "b", "c"};
    RootedLoop l{1, 0, 2};
    EXPECT_EQ(format_loop(l, labels), "b,a,c");
    EXPECT_EQ(parse_loop("b, a,c", labels), l);
    EXPECT_EQ(format_loop(UnrootedLoop(l), labels), "a,c,b");
    EXPECT_THROW(parse_loop("b,z", labels), domain_error);
}

TEST(Loops, TotalMassMatchesLoopEnumeration)
{
    std::mt19937 rng(12);
    for (int trial = 0; trial < 6; ++trial)
    {
        std::size_t d = 1 + trial % 3;
        auto c = oracle::random_chain(rng, d, 0.0);
        auto pf = c.matrix().cast<double>();
        // rooted sum of weight / length over all loops of length <= L; the
        // unrooted sum of mu over canonical loops must agree
        double rooted = 0, unrooted = 0;
        std::size_t const max_len = 10 - 2 * d;
        for (std::size_t n = 1; n <= max_len; ++n)
        {
            RootedLoop l(n, 0);
            while (true)
            {
                double w = loop_weight<double>(l, pf);
                rooted += w / n;
                if (UnrootedLoop(l).vertices() == l)
                    unrooted += w / loop_multiplicity(l);
                std::size_t k = 0;
                while (k < n && ++l[k] == d)
                    l[k++] = 0;
                if (k == n)
                    break;
            }
        }
        EXPECT_NEAR(rooted, unrooted, 1e-12);
        double rho = c.spectral_radius();
        double tail = std::pow(rho, max_len + 1) * d / (1 - rho);
        EXPECT_NEAR(rooted, total_mass(c), tail + 1e-12);
        EXPECT_LE(rooted, total_mass(c) + 1e-12);
    }
}
