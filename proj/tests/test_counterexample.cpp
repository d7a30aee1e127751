#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "greedylab/counterexample.hpp"
#include "greedylab/greedy.hpp"
#include "greedylab/norms.hpp"

using namespace greedylab;

namespace {

double partial_harmonic_root(int m)
{
    double s = 0.0;
    for (int k = 1; k <= m; ++k) s += 1.0 / std::sqrt(double(k));
    return s;
}

// First counts[r] indices of every run.
IndexSet indices_of(const ExampleSequence& ex, const RunSelection& sel)
{
    std::vector<Index> out;
    for (std::size_t r = 0; r < sel.counts.size(); ++r)
        for (Index j = 0; j < sel.counts[r]; ++j) out.push_back(ex.runs()[r].start + j);
    return IndexSet(out);
}

}  // namespace

TEST(Example, Positions)
{
    ExampleSequence ex(3);
    EXPECT_EQ(ex.n()[0], 1);
    EXPECT_EQ(ex.n()[1], 12);
    EXPECT_EQ(ex.n()[2], 113);
    EXPECT_EQ(ex.block(1).size(), 10u);
    EXPECT_EQ(ex.block(2).size(), 100u);
    EXPECT_THROW(ExampleSequence(0), std::invalid_argument);
    EXPECT_THROW(ExampleSequence(9), std::invalid_argument);
}

TEST(Example, DepthOneCoefficients)
{
    ExampleSequence ex(1);
    EXPECT_EQ(ex.support_size(), 11);
    EXPECT_DOUBLE_EQ(ex.coefficient(1), 1.0);
    for (Index i = 2; i <= 11; ++i) EXPECT_DOUBLE_EQ(ex.coefficient(i), -0.1);
    EXPECT_EQ(ex.coefficient(12), 0.0);
}

TEST(Example, TelescopingPrefixSums)
{
    for (int K = 1; K <= ExampleSequence::kMaxDepth; ++K) {
        ExampleSequence ex(K);
        for (int k = 1; k <= K; ++k) {
            const double target = 1.0 / std::sqrt(double(k));
            EXPECT_NEAR(ex.prefix_sum(ex.n()[k - 1]), target, 1e-10);
            const auto& blk = ex.runs()[ExampleSequence::block_run(k)];
            EXPECT_LT(std::abs(ex.prefix_sum(blk.start)), target);
            EXPECT_LT(std::abs(ex.prefix_sum(blk.last())), target);
        }
        EXPECT_NEAR(projection_norm(ex, ex.full()), 1.0, 1e-10);
    }
    EXPECT_NEAR(ExampleSequence(2).prefix_sum(12), 0.7071067812, 1e-10);
}

TEST(Example, RunLengthMatchesDense)
{
    std::mt19937_64 rng(17);
    for (int K = 1; K <= 4; ++K) {
        ExampleSequence ex(K);
        auto y = ex.dense();
        EXPECT_NEAR(summing_norm(y), 1.0, 1e-10);
        for (int trial = 0; trial < 200; ++trial) {
            RunSelection sel;
            for (const auto& r : ex.runs()) sel.counts.push_back(std::uniform_int_distribution<Index>(0, r.length)(rng));
            auto A = indices_of(ex, sel);
            EXPECT_NEAR(projection_norm(ex, sel), summing_norm(projection(y, A)), 1e-12);
            for (double t : {1.0, 0.5, 0.05}) EXPECT_EQ(is_t_greedy(ex, sel, t), is_t_greedy(y, A, t));
        }
        for (Index i = 1; i <= ex.support_size(); i += 37) EXPECT_EQ(ex.coefficient(i), y[i]);
    }
}

TEST(GreedySumNorm, SpikePrefixes)
{
    EXPECT_NEAR(greedy_sum_norm(ExampleSequence(4), 3, 1.0), 2.2844570504, 1e-9);
    ExampleSequence ex(7);
    for (int m = 1; m <= 7; ++m) EXPECT_NEAR(greedy_sum_norm(ex, m, 1.0), partial_harmonic_root(m), 1e-9);
    EXPECT_NEAR(greedy_sum_norm(ex, 7, 1.0), 4.0178834093, 1e-9);
    EXPECT_NEAR(greedy_sum_norm(ex, ex.support_size(), 1.0), 1.0, 1e-10);
    EXPECT_EQ(greedy_sum_norm(ex, 0, 1.0), 0.0);
}

TEST(GreedySumNorm, DenseOracleAtDepthFour)
{
    ExampleSequence ex(4);
    auto y = ex.dense();
    for (Index m : {1, 3, 4, 5, 20, 500, 11110}) {
        auto sel = one_greedy_set(y, m, 1.0);
        EXPECT_NEAR(greedy_sum_norm(ex, m, 1.0), summing_norm(greedy_sum(y, sel)), 1e-12) << m;
    }
}

TEST(GreedySumNorm, RejectsNonGreedyChoice)
{
    ExampleSequence ex(2);
    auto bad = [](const ExampleSequence& e, Index, double) {
        RunSelection s;
        s.counts.assign(e.runs().size(), 0);
        s.counts[1] = 1;  // a block entry without spike 1
        return s;
    };
    EXPECT_THROW(greedy_sum_norm(ex, 1, 1.0, bad), InvalidSelection);
}

TEST(PhiLowerBound, Values)
{
    EXPECT_EQ(phi_lower_bound(1, 1.0), 0.0);
    EXPECT_NEAR(phi_lower_bound(101, 1.0), 17.589603824784, 1e-9);
    EXPECT_NEAR(phi_lower_bound(101, 1.0), partial_harmonic_root(100) - 1.0, 1e-12);
    EXPECT_EQ(phi_log_floor(100, 1.0), 1);
    EXPECT_EQ(phi_log_floor(99, 1.0), 0);
    EXPECT_EQ(phi_log_floor(1, 0.1), 1);
    EXPECT_EQ(phi_log_floor(10000, 1.0), 2);
}

// Integral comparison L(phi,t) >= 2(sqrt(phi-1) - sqrt(F+1)) over phi <= 10^6.
TEST(PhiLowerBound, IntegralComparison)
{
    const long long N = 1'000'000;
    std::vector<double> prefix(N + 1, 0.0);
    for (long long k = 1; k <= N; ++k) prefix[k] = prefix[k - 1] + 1.0 / std::sqrt(double(k));
    for (double t : {1.0, 0.5, 0.1}) {
        long long bad = 0;
        for (long long phi = 1; phi <= N; ++phi) {
            const int F = phi_log_floor(phi, t);
            const double L = prefix[phi - 1] - prefix[F];
            if (L < 2.0 * (std::sqrt(double(phi - 1)) - std::sqrt(double(F + 1))) - 1e-9) ++bad;
        }
        EXPECT_EQ(bad, 0) << t;
        for (long long phi : {2LL, 50LL, 4097LL, 999999LL})
            EXPECT_NEAR(phi_lower_bound(phi, t), prefix[phi - 1] - prefix[phi_log_floor(phi, t)], 1e-8);
    }
}

// Count vectors stand for index sets: block entries are equal, so only counts matter.
TEST(MinSearch, CountLevelEqualsIndexLevelAtDepthOne)
{
    ExampleSequence ex(1);
    auto y = ex.dense();
    for (double t : {1.0, 0.5, 0.1}) {
        auto counts = exhaustive_min_search(ex, t);
        for (Index m = 0; m <= ex.support_size(); ++m) {
            auto sets = enumerate_t_greedy_sets(y, m, t, 1u << 16);
            ASSERT_FALSE(sets.overflow);
            double best = std::numeric_limits<double>::infinity();
            for (const auto& s : sets.sets) best = std::min(best, summing_norm(projection(y, s.indices)));
            EXPECT_NEAR(counts[m].min_norm, best, 1e-12) << "t " << t << " m " << m;
        }
    }
}

TEST(MinSearch, WindowMatchesExhaustive)
{
    for (int K = 1; K <= 3; ++K) {
        ExampleSequence ex(K);
        for (double t : {1.0, 0.7, 0.5, 0.3}) {
            auto all = exhaustive_min_search(ex, t);
            EXPECT_EQ(std::count_if(all.begin(), all.end(), [](const MinSearch& s) { return s.bound_violations > 0; }), 0);
            for (Index m : divergence_grid(ex)) {
                auto w = window_min_search(ex, m, t);
                EXPECT_NEAR(w.min_norm, all[m].min_norm, 1e-12) << "K " << K << " t " << t << " m " << m;
                EXPECT_EQ(w.bound_violations, 0u);
            }
        }
    }
}

TEST(Divergence, Experiment)
{
    auto rep = divergence_experiment(3, 0.5, true, std::nullopt, true);
    EXPECT_EQ(rep.violations(), 0u);
    ASSERT_FALSE(rep.rows.empty());
    EXPECT_EQ(rep.rows.front().m, 0);
    EXPECT_EQ(rep.rows.front().min_norm, 0.0);
    for (const auto& r : rep.rows)
        if (r.margin()) EXPECT_GE(*r.margin(), -1e-9);

    // full spike-and-block prefixes grow with K
    double prev = 0.0;
    for (int K = 1; K <= 6; ++K) {
        double v = greedy_sum_norm(ExampleSequence(K), K, 1.0);
        EXPECT_GT(v, prev);
        EXPECT_NEAR(v, partial_harmonic_root(K), 1e-9);
        prev = v;
    }
}
