#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "tourlab/tourlab.hpp"

using namespace tourlab;

namespace {

std::vector<TournamentOracle> all_families()
{
    return {transitive_omega(), transitive_omega_star(), factorial_block_tournament(), exponential_threshold(),
            seeded_random(3), make_ordinal_injection_tournament(factorial_injection())};
}

} // namespace

TEST(Orient, TransitiveFamilies)
{
    EXPECT_EQ(orient(transitive_omega(), 2, 5), Direction::Forward);
    EXPECT_EQ(orient(transitive_omega_star(), 2, 5), Direction::Backward);
    EXPECT_EQ(orient(transitive_omega(), 5, 2), Direction::Backward);
}

TEST(Orient, FactorialBlockUsesBlockMembership)
{
    auto K = factorial_block_tournament();
    // 0-based 1 and 3 are vertices 2 and 4, in blocks {2} and {3..6}
    EXPECT_EQ(orient(K, 1, 3), Direction::Backward);
    EXPECT_EQ(orient(K, 2, 3), Direction::Forward);
    EXPECT_EQ(orient(K, 2, 5), Direction::Forward);
    EXPECT_EQ(orient(K, 5, 6), Direction::Backward);
    EXPECT_EQ(orient(K, 6, 23), Direction::Forward);
}

TEST(Orient, LoopQueryIsAnError)
{
    for (const auto& K : all_families()) {
        try {
            orient(K, 4, 4);
            FAIL() << "expected loop-query";
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::loop_query);
        }
    }
}

TEST(Orient, AntisymmetricAndPure)
{
    for (const auto& K : all_families())
        for (VertexId i = 0; i < 40; ++i)
            for (VertexId j = 0; j < 40; ++j) {
                if (i == j)
                    continue;
                auto d = orient(K, i, j);
                EXPECT_EQ(d, orient(K, i, j));
                EXPECT_EQ(d, inverse(orient(K, j, i))) << K.name() << " " << i << "," << j;
            }
}

TEST(Orient, ExponentialThresholdMatchesDefinition)
{
    auto K = exponential_threshold();
    for (VertexId i = 0; i < 12; ++i)
        for (VertexId j = i + 1; j < 3000; ++j)
            ASSERT_EQ(K.forward(i, j), j + 1 <= (1ULL << (i + 1))) << i << "," << j;
    EXPECT_TRUE(K.forward(100, 1000000));
}

TEST(OrdinalCompare, Lexicographic)
{
    EXPECT_EQ(ordinal_compare({0, 3}, {0, 7}), std::strong_ordering::less);
    EXPECT_EQ(ordinal_compare({2, 0}, {1, 999}), std::strong_ordering::greater);
    EXPECT_EQ(ordinal_compare({1, 5}, {1, 5}), std::strong_ordering::equal);
}

TEST(OrdinalInjection, IdentityGivesOmegaStar)
{
    auto K = make_ordinal_injection_tournament(identity_injection());
    for (VertexId i = 0; i < 60; ++i)
        for (VertexId j = i + 1; j < 60; ++j)
            ASSERT_EQ(orient(K, i, j), Direction::Backward);
}

TEST(OrdinalInjection, ReversedPrefixIsAllForward)
{
    const std::uint64_t n = 25;
    auto K = make_ordinal_injection_tournament(reversed_prefix_injection(n));
    for (VertexId i = 0; i < n; ++i)
        for (VertexId j = i + 1; j < n; ++j)
            ASSERT_EQ(orient(K, i, j), Direction::Forward);
    // beyond the prefix every value is larger
    EXPECT_EQ(orient(K, 3, n + 2), Direction::Backward);
}

TEST(OrdinalInjection, FactorialReversalEqualsFactorialFamily)
{
    auto A = factorial_block_tournament();
    auto B = make_ordinal_injection_tournament(factorial_injection());
    const VertexId n = 10000;
    std::uint64_t mismatches = 0;
    for (VertexId i = 0; i < n; ++i)
        for (VertexId j = i + 1; j < n; ++j)
            mismatches += A.forward(i, j) != B.forward(i, j);
    EXPECT_EQ(mismatches, 0u);
}

TEST(OrdinalInjection, CollisionIsMalformed)
{
    auto f = table_injection({{0, 2}, {0, 7}, {0, 2}}, TailScheme::identity);
    auto K = make_ordinal_injection_tournament(f);
    EXPECT_EQ(orient(K, 0, 1), Direction::Backward);
    try {
        orient(K, 0, 2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::malformed_injection);
    }
    EXPECT_THROW(check_injective_prefix(f, 3), Error);
    EXPECT_NO_THROW(check_injective_prefix(f, 2));
}

TEST(OrdinalInjection, ForwardWalksDescend)
{
    // every forward edge i -> j (i < j) has f(i) > f(j), so forward walks are
    // bounded by the number of distinct values
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        const std::uint64_t n = 200;
        std::vector<OrdinalValue> head;
        std::uniform_int_distribution<std::uint64_t> maj(0, 3);
        std::set<OrdinalValue> used;
        while (head.size() < n) {
            OrdinalValue v{maj(rng), rng() % 1000};
            if (used.insert(v).second)
                head.push_back(v);
        }
        auto f = table_injection(head, TailScheme::identity);
        auto K = make_ordinal_injection_tournament(f);
        std::vector<std::uint64_t> longest(n, 1);
        for (VertexId j = 0; j < n; ++j)
            for (VertexId i = 0; i < j; ++i)
                if (K.forward(i, j)) {
                    ASSERT_GT(f(i), f(j));
                    longest[j] = std::max(longest[j], longest[i] + 1);
                }
        EXPECT_LE(*std::max_element(longest.begin(), longest.end()), used.size());
    }
}

TEST(SeededRandom, DeterministicAndSeedSensitive)
{
    auto a = seeded_random(42), b = seeded_random(42), c = seeded_random(43);
    int differ = 0;
    for (VertexId i = 0; i < 100; ++i)
        for (VertexId j = i + 1; j < 100; ++j) {
            ASSERT_EQ(a.forward(i, j), b.forward(i, j));
            differ += a.forward(i, j) != c.forward(i, j);
        }
    EXPECT_GT(differ, 1000);
}

TEST(SeededRandom, ChiSquareFairCoin)
{
    auto K = seeded_random(2024);
    std::uint64_t fwd = 0, total = 0;
    for (VertexId i = 0; i < 448; ++i)
        for (VertexId j = i + 1; j < 448; ++j, ++total)
            fwd += K.forward(i, j);
    ASSERT_GE(total, 100000u);
    double e = total / 2.0;
    double chi = (fwd - e) * (fwd - e) / e + ((total - fwd) - e) * ((total - fwd) - e) / e;
    EXPECT_LT(chi, 10.83); // 1 degree of freedom, p = 0.001
}

TEST(SeededRandom, PairsIndependentAcrossRows)
{
    // orientations of (i, j) and (i, j + 1) agree about half of the time
    auto K = seeded_random(5);
    std::uint64_t agree = 0, total = 0;
    for (VertexId i = 0; i < 300; ++i)
        for (VertexId j = i + 1; j + 1 < 300; ++j, ++total)
            agree += K.forward(i, j) == K.forward(i, j + 1);
    double e = total / 2.0;
    EXPECT_LT(std::abs(agree - e) / std::sqrt(total / 4.0), 4.0);
}

TEST(Injections, FactorialValuesDescendInsideBlocks)
{
    auto f = factorial_injection();
    std::vector<std::uint64_t> got;
    for (VertexId i = 0; i < 6; ++i)
        got.push_back(f(i).minor);
    EXPECT_EQ(got, (std::vector<std::uint64_t>{1, 2, 6, 5, 4, 3}));
}

TEST(Injections, TableTails)
{
    auto f = table_injection({{0, 3}, {0, 1}}, TailScheme::identity);
    EXPECT_EQ(f(0), (OrdinalValue{0, 3}));
    EXPECT_EQ(f(5), (OrdinalValue{1, 5}));
    EXPECT_EQ(f.cofinal_major, 1u);
    auto g = table_injection({{2, 0}}, TailScheme::factorial, 1);
    EXPECT_EQ(g(2), (OrdinalValue{1, 6}));
    EXPECT_EQ(g.cofinal_major, 1u);
}
