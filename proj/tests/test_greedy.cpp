#include <gtest/gtest.h>

#include "greedylab/counterexample.hpp"
#include "greedylab/greedy.hpp"
#include "greedylab/sampling.hpp"

using namespace greedylab;

namespace {

std::vector<IndexSet> filtered_power_set(const CoeffVector& x, Index m, double t)
{
    const auto supp = x.support().values();
    const std::size_t n = supp.size();
    std::vector<IndexSet> out;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (std::popcount(mask) != m) continue;
        std::vector<Index> pick;
        for (std::size_t b = 0; b < n; ++b)
            if (mask >> b & 1u) pick.push_back(supp[b]);
        IndexSet A(pick);
        if (is_t_greedy(x, A, t)) out.push_back(A);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<IndexSet> sets_of(const GreedyEnumeration& e)
{
    std::vector<IndexSet> out;
    for (const auto& s : e.sets) out.push_back(s.indices);
    return out;
}

}  // namespace

TEST(IsTGreedy, Examples)
{
    auto x = CoeffVector::from_dense({3, 1, 2});
    EXPECT_TRUE(is_t_greedy(x, {1, 3}, 1.0));
    EXPECT_FALSE(is_t_greedy(x, {1, 2}, 1.0));
    EXPECT_TRUE(is_t_greedy(x, {1, 2}, 0.5));
    auto ones = CoeffVector::from_dense({1, 1, 1});
    for (const IndexSet& A : {IndexSet{1}, IndexSet{2, 3}, IndexSet{}}) EXPECT_TRUE(is_t_greedy(ones, A, 1.0));
    EXPECT_THROW(is_t_greedy(x, {1}, 0.0), std::invalid_argument);
    EXPECT_THROW(is_t_greedy(x, {1}, 1.5), std::invalid_argument);
}

TEST(OneGreedySet, Examples)
{
    EXPECT_EQ(one_greedy_set(CoeffVector::from_dense({3, 1, 2}), 2, 1.0).indices, (IndexSet{1, 3}));
    auto tie = one_greedy_set(CoeffVector::from_dense({1, 1}), 1, 1.0);
    EXPECT_EQ(tie.indices, IndexSet{1});
    EXPECT_EQ(tie.tie_trace.size(), 1u);
    EXPECT_EQ(one_greedy_set(CoeffVector::from_dense({1, 1}), 1, 1.0, TieBreaker::highest_index()).indices, IndexSet{2});
    EXPECT_THROW(one_greedy_set(CoeffVector::from_dense({1}), -1, 1.0), std::invalid_argument);
}

TEST(OneGreedySet, ExampleTruncationTopThree)
{
    auto y = ExampleSequence(3).dense();
    EXPECT_EQ(one_greedy_set(y, 3, 1.0).indices, (IndexSet{1, 12, 113}));
}

TEST(OneGreedySet, BadTiePolicyRejected)
{
    auto bad = TieBreaker::adversarial([](const std::vector<Index>&, std::size_t) { return std::vector<Index>{99}; });
    EXPECT_THROW(one_greedy_set(CoeffVector::from_dense({1, 1}), 1, 1.0, bad), InvalidSelection);
}

TEST(Enumerate, Examples)
{
    auto x = CoeffVector::from_dense({2, 1});
    EXPECT_EQ(sets_of(enumerate_t_greedy_sets(x, 1, 1.0, 100)), (std::vector<IndexSet>{{1}}));
    EXPECT_EQ(sets_of(enumerate_t_greedy_sets(x, 1, 0.5, 100)), (std::vector<IndexSet>{{1}, {2}}));
    auto ones = CoeffVector::from_dense({1, 1, 1});
    EXPECT_EQ(sets_of(enumerate_t_greedy_sets(ones, 2, 1.0, 100)), (std::vector<IndexSet>{{1, 2}, {1, 3}, {2, 3}}));
}

TEST(Enumerate, OverflowFlag)
{
    auto ones = CoeffVector::from_dense({1, 1, 1, 1});
    auto e = enumerate_t_greedy_sets(ones, 2, 1.0, 3);
    EXPECT_TRUE(e.overflow);
    EXPECT_EQ(e.sets.size(), 3u);
    EXPECT_EQ(e.sets.front().indices, (IndexSet{1, 2}));
}

TEST(Enumerate, EqualsFilteredPowerSet)
{
    Rng rng(5);
    std::uniform_real_distribution<double> tdist(0.05, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        auto x = random_vector(12, rng);
        double t = trial % 3 == 0 ? 1.0 : tdist(rng);
        for (Index m = 0; m <= static_cast<Index>(x.size()); ++m) {
            auto e = enumerate_t_greedy_sets(x, m, t, 1u << 20);
            ASSERT_FALSE(e.overflow);
            EXPECT_EQ(sets_of(e), filtered_power_set(x, m, t)) << "trial " << trial << " m " << m;
        }
    }
}

TEST(Greedy, NestingMonotonicityAndSplit)
{
    Rng rng(9);
    for (int trial = 0; trial < 500; ++trial) {
        auto x = random_vector(10, rng);
        for (Index m = 0; m < static_cast<Index>(x.size()); ++m) {
            auto a = one_greedy_set(x, m, 1.0);
            auto b = one_greedy_set(x, m + 1, 1.0);
            EXPECT_TRUE(std::includes(b.indices.begin(), b.indices.end(), a.indices.begin(), a.indices.end()));
            for (double s : {1.0, 0.7}) {
                auto sets = enumerate_t_greedy_sets(x, m, s, 4096);
                for (const auto& sel : sets.sets) EXPECT_TRUE(is_t_greedy(x, sel.indices, 0.5 * s));
            }
            EXPECT_EQ(greedy_sum(x, a) + greedy_remainder(x, a), x);
        }
    }
}

TEST(GreedySum, Examples)
{
    auto x = CoeffVector::from_dense({3, 1, 2});
    auto sel = one_greedy_set(x, 2, 1.0);
    EXPECT_EQ(greedy_sum(x, sel), CoeffVector::from_dense({3, 0, 2}));
    EXPECT_EQ(greedy_sum(x, one_greedy_set(x, 3, 1.0)), x);
    EXPECT_TRUE(greedy_sum(x, one_greedy_set(x, 0, 1.0)).empty());
    auto stale = sel;
    stale.indices = {1, 2};
    EXPECT_THROW(greedy_sum(x, stale), InvalidSelection);
}
