// SPDX-License-Identifier: Apache-2.0
#include <random>

#include <gtest/gtest.h>

#include "alphaperm/block.hpp"
#include "alphaperm/crossing.hpp"
#include "alphaperm/graph.hpp"
#include "oracles.hpp"

using namespace alphaperm;

namespace
{
Rational R(char const* s)
{
    return parse_rational(s);
}

InducedGraph path3()
{
    return InducedGraph(3, {{0, 1}, {1, 2}});
}

CrossingMatrix make(std::size_t d, std::initializer_list<std::tuple<int, int, unsigned>> entries)
{
    CrossingMatrix n(d);
    for (auto [i, j, v] : entries)
        n(i, j) = v;
    return n;
}
} // namespace

TEST(Rational, ParsesFractionsIntegersAndDecimals)
{
    EXPECT_EQ(R("1/2"), Rational(1, 2));
    EXPECT_EQ(R(" -6/4 "), Rational(-3, 2));
    EXPECT_EQ(R("3"), Rational(3));
    EXPECT_EQ(R("0.25"), Rational(1, 4));
    EXPECT_EQ(R("-1.5"), Rational(-3, 2));
    EXPECT_THROW(R("1/0"), domain_error);
    EXPECT_THROW(R("abc"), domain_error);
    EXPECT_THROW(R(""), domain_error);
    EXPECT_EQ(to_string(R("6/4")), "3/2");
}

TEST(GraphOfMatrix, PathOnTwoVerticesIsForest)
{
    SquareMatrix<Rational> a{{0, R("1/2")}, {R("1/2"), 0}};
    auto g = graph_of_matrix(a);
    EXPECT_EQ(g.edges(), (std::vector<InducedGraph::Edge>{{0, 1}}));
    EXPECT_EQ(g.classification(), GraphClass::forest);
    EXPECT_TRUE(g.is_star_forest());
}

TEST(GraphOfMatrix, OneSidedEntryAndSelfLoopGiveStarForest)
{
    SquareMatrix<Rational> a{{R("1/3"), R("1/2")}, {0, 0}};
    auto g = graph_of_matrix(a);
    EXPECT_EQ(g.edges(), (std::vector<InducedGraph::Edge>{{0, 0}, {0, 1}}));
    EXPECT_EQ(g.classification(), GraphClass::star_forest);
    EXPECT_TRUE(g.has_edge(1, 0));
    EXPECT_FALSE(g.is_forest());
}

TEST(GraphOfMatrix, TriangleIsGeneral)
{
    SquareMatrix<Rational> a{{1, 1, 1}, {1, 1, 1}, {1, 1, 1}};
    auto g = graph_of_matrix(a);
    EXPECT_EQ(g.edges().size(), 6u);
    EXPECT_EQ(g.classification(), GraphClass::general);
}

TEST(GraphOfMatrix, ComponentsUseMinimalVertexLabel)
{
    InducedGraph g(5, {{1, 3}, {3, 4}, {2, 2}});
    EXPECT_EQ(g.components(), (std::vector<std::size_t>{0, 1, 2, 1, 1}));
}

TEST(BlockExpand, UnrollsDefinition)
{
    SquareMatrix<Rational> a{{1, 2}, {3, 5}};
    auto b = block_expand(a, {2, 1});
    SquareMatrix<Rational> expect{{1, 1, 2}, {1, 1, 2}, {3, 3, 5}};
    EXPECT_EQ(b.matrix, expect);
    EXPECT_EQ(b.base, (std::vector<std::size_t>{0, 0, 1}));
}

TEST(BlockExpand, AllOnesIsIdentityAndSingleVertexIsConstant)
{
    SquareMatrix<Rational> a{{1, 2, 0}, {3, 5, 7}, {0, R("1/2"), 4}};
    EXPECT_EQ(block_expand(a, {1, 1, 1}).matrix, a);
    SquareMatrix<Rational> x{{R("2/3")}};
    auto b = block_expand(x, {3});
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            EXPECT_EQ(b.matrix(i, j), R("2/3"));
}

TEST(BlockExpand, EmptyBlockIsAnError)
{
    SquareMatrix<Rational> a{{1, 2}, {3, 5}};
    EXPECT_THROW(block_expand(a, {0, 0}), size_error);
    EXPECT_THROW(block_expand(a, {1}), domain_error);
}

TEST(BlockExpand, CopiesOfAPairAreConstant)
{
    std::mt19937 rng(11);
    for (int trial = 0; trial < 50; ++trial)
    {
        SquareMatrix<Rational> a(3);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j)
                a(i, j) = oracle::random_nonzero_rational(rng);
        auto q = oracle::random_q(rng, 3, 3, 9);
        if (order(q) == 0)
            continue;
        auto b = block_expand(a, q);
        for (std::size_t r = 0; r < b.base.size(); ++r)
            for (std::size_t c = 0; c < b.base.size(); ++c)
                ASSERT_EQ(b.matrix(r, c), a(b.base[r], b.base[c]));
        ASSERT_EQ(b.matrix, oracle::naive_block(a, q));
    }
}

TEST(TqEnumerate, PathWithFeasibleDemand)
{
    auto tq = tq_enumerate(path3(), {1, 2, 1});
    ASSERT_EQ(tq.size(), 1u);
    EXPECT_EQ(tq[0], make(3, {{0, 1, 1}, {1, 0, 1}, {1, 2, 1}, {2, 1, 1}}));
    EXPECT_EQ(tq, oracle::tq_brute(path3(), {1, 2, 1}));
}

TEST(TqEnumerate, PathWithInfeasibleDemandIsEmpty)
{
    EXPECT_TRUE(tq_enumerate(path3(), {1, 1, 1}).empty());
    EXPECT_TRUE(oracle::tq_brute(path3(), {1, 1, 1}).empty());
}

TEST(TqEnumerate, LoopedEdgeHasThreeSplits)
{
    InducedGraph g(2, {{0, 0}, {0, 1}, {1, 1}});
    auto tq = tq_enumerate(g, {2, 2});
    ASSERT_EQ(tq.size(), 3u);
    for (unsigned k = 0; k <= 2; ++k)
    {
        // lexicographic in n_11 ascending, i.e. k descending
        auto const& n = tq[k];
        EXPECT_EQ(n(0, 0), k);
        EXPECT_EQ(n(1, 1), k);
        EXPECT_EQ(n(0, 1), 2 - k);
        EXPECT_EQ(n(1, 0), 2 - k);
    }
    auto brute = oracle::tq_brute(g, {2, 2});
    auto sorted = tq;
    std::sort(sorted.begin(), sorted.end());
    EXPECT_EQ(sorted, brute);
}

TEST(TqEnumerate, SingleLoopedVertex)
{
    InducedGraph g(1, {{0, 0}});
    auto tq = tq_enumerate(g, {3});
    ASSERT_EQ(tq.size(), 1u);
    EXPECT_EQ(tq[0](0, 0), 3u);
}

TEST(TqEnumerate, EmptyQGivesZeroMatrix)
{
    auto tq = tq_enumerate(path3(), {0, 0, 0});
    ASSERT_EQ(tq.size(), 1u);
    EXPECT_TRUE(tq[0].is_zero());
}

TEST(TqEnumerate, RejectsGeneralGraphs)
{
    InducedGraph g(3, {{0, 1}, {1, 2}, {0, 2}});
    EXPECT_THROW(tq_enumerate(g, {1, 1, 1}), structure_error);
}

TEST(TqEnumerate, AgreesWithBruteForceOnSmallStarForests)
{
    std::mt19937 rng(2024);
    int checked = 0;
    for (std::size_t d = 1; d <= 4; ++d)
    {
        for (int trial = 0; trial < 12; ++trial)
        {
            auto shape = oracle::random_star_forest_shape(rng, d);
            std::vector<InducedGraph::Edge> edges(shape.edges.begin(), shape.edges.end());
            for (std::size_t i = 0; i < d; ++i)
                if (shape.loops[i])
                    edges.emplace_back(i, i);
            InducedGraph g(d, edges);
            ASSERT_TRUE(g.is_star_forest());
            for (int k = 0; k < 4; ++k)
            {
                auto q = oracle::random_q(rng, d, 3, 3 * d);
                auto fast = tq_enumerate(g, q);
                for (auto const& n : fast)
                {
                    ASSERT_TRUE(in_tq(g, q, n));
                    for (std::size_t i = 0; i < d; ++i)
                    {
                        ASSERT_EQ(n.row_sum(i), q[i]);
                        ASSERT_EQ(n.col_sum(i), q[i]);
                    }
                }
                if (g.is_forest())
                    ASSERT_LE(fast.size(), 1u);
                std::sort(fast.begin(), fast.end());
                ASSERT_EQ(fast, oracle::tq_brute(g, q));
                ++checked;
            }
        }
    }
    EXPECT_EQ(checked, 4 * 12 * 4);
}
