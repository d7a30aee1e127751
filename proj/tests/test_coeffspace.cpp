#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "greedylab/norms.hpp"
#include "greedylab/constants.hpp"
#include "greedylab/gap_sequence.hpp"
#include "greedylab/sampling.hpp"
#include "greedylab/space.hpp"

using namespace greedylab;

namespace {

// O(n^2): every prefix summed from scratch.
double summing_oracle(const CoeffVector& x)
{
    double best = 0.0;
    for (Index n = 1; n <= x.max_index(); ++n) {
        double s = 0.0;
        for (Index j = 1; j <= n; ++j) s += x[j];
        best = std::max(best, std::abs(s));
    }
    return best;
}

}  // namespace

TEST(SummingNorm, SmallCases)
{
    EXPECT_DOUBLE_EQ(summing_norm(CoeffVector::from_dense({1, -1})), 1.0);
    EXPECT_EQ(summing_norm(CoeffVector{}), 0.0);
    EXPECT_DOUBLE_EQ(summing_norm(CoeffVector::from_dense({1, -2, 1})), 1.0);
}

TEST(SummingNorm, MatchesQuadraticOracle)
{
    Rng rng(7);
    for (int trial = 0; trial < 500; ++trial) {
        auto x = random_vector(24, rng);
        EXPECT_NEAR(summing_norm(x), summing_oracle(x), 1e-12 * (1.0 + summing_oracle(x)));
    }
}

TEST(SummingNorm, PrefixesAreMonotone)
{
    Rng rng(11);
    for (int trial = 0; trial < 1000; ++trial) {
        auto x = random_vector(16, rng);
        for (Index m = 1; m <= 16; ++m) EXPECT_LE(summing_norm(projection(x, IndexSet::interval(1, m))), summing_norm(x) + 1e-12);
    }
}

TEST(LpNorm, Values)
{
    EXPECT_DOUBLE_EQ(lp_norm(CoeffVector::from_dense({3, 4}), 2.0), 5.0);
    EXPECT_DOUBLE_EQ(lp_norm(CoeffVector::from_dense({1, 1}), 0.5), 4.0);
    for (double p : {0.5, 1.0, 2.0, 7.0}) EXPECT_DOUBLE_EQ(lp_norm(CoeffVector::from_dense({1}), p), 1.0);
    EXPECT_THROW(lp_norm(CoeffVector::from_dense({1}), 0.0), std::invalid_argument);
    EXPECT_THROW(make_space("lp:-1"), std::invalid_argument);
}

TEST(Norms, HomogeneityAndQuasiTriangle)
{
    Rng rng(3);
    std::uniform_real_distribution<double> scale(-5.0, 5.0);
    for (const char* key : {"summing", "sup", "lp:1", "lp:2", "lp:3/2", "lp:1/2", "lp:2/3"}) {
        auto sp = make_space(key);
        for (int trial = 0; trial < 10000; ++trial) {
            auto x = random_vector(8, rng);
            auto y = random_vector(8, rng);
            double a = scale(rng);
            double nx = sp(x), ny = sp(y);
            EXPECT_NEAR(sp(a * x), std::abs(a) * nx, 1e-9 * (1.0 + std::abs(a) * nx)) << key;
            EXPECT_LE(sp(x + y), sp.alpha * (nx + ny) * (1.0 + 1e-9)) << key;
        }
    }
}

TEST(Space, QuasiNormConstants)
{
    EXPECT_DOUBLE_EQ(make_space("lp:1/2").alpha, 2.0);
    EXPECT_DOUBLE_EQ(make_space("lp:2/3").alpha, std::sqrt(2.0));
    EXPECT_DOUBLE_EQ(make_space("lp:2").alpha, 1.0);
    // ||e_1^*|| = 1, ||e_i^*|| = 2 afterwards
    auto s = make_space("summing");
    EXPECT_DOUBLE_EQ(s.alpha2, 2.0);
    EXPECT_DOUBLE_EQ(s.c_param, 6.0);
    EXPECT_THROW(make_space("nope"), std::invalid_argument);
}

TEST(Projection, Examples)
{
    auto x = CoeffVector::from_dense({1, 2, 3});
    EXPECT_TRUE(projection(x, {}).empty());
    EXPECT_EQ(projection(x, {1, 3}), CoeffVector::from_dense({1, 0, 3}));
    EXPECT_TRUE(projection(x, {5}).empty());
    EXPECT_EQ(projection(projection(x, {1, 2}), {1, 2}), projection(x, {1, 2}));
}

TEST(SummingExtremePoints, AreUnitVectors)
{
    for (Index d = 1; d <= 8; ++d)
        for (const auto& v : summing_extreme_points(d)) EXPECT_NEAR(summing_norm(v), 1.0, 1e-12);
}

TEST(OperatorNorm, SummingExamples)
{
    auto s = make_space("summing");
    auto e1 = estimate_operator_norm(s, {1}, 2);
    EXPECT_DOUBLE_EQ(e1.value, 1.0);
    EXPECT_TRUE(e1.exact);
    auto e2 = estimate_operator_norm(s, {2}, 3);
    EXPECT_DOUBLE_EQ(e2.value, 2.0);
    EXPECT_TRUE(e2.exact);
}

// Brute force over x in {-2..2}^3: the extreme-point answer is attained on the grid.
TEST(OperatorNorm, SummingMiddleCoordinateGridOracle)
{
    double best = 0.0;
    for (int a = -2; a <= 2; ++a)
        for (int b = -2; b <= 2; ++b)
            for (int c = -2; c <= 2; ++c) {
                auto x = CoeffVector::from_dense({double(a), double(b), double(c)});
                if (x.empty()) continue;
                best = std::max(best, summing_norm(projection(x, {2})) / summing_norm(x));
            }
    EXPECT_DOUBLE_EQ(best, 2.0);
}

TEST(OperatorNorm, LpOneIsOne)
{
    auto s = make_space("lp:1");
    EXPECT_DOUBLE_EQ(estimate_operator_norm(s, {2, 4}, 5).value, 1.0);
}

TEST(GapSequence, Construction)
{
    auto g = GapSequence::geometric(2, 3);
    EXPECT_EQ(g[1], 2);
    EXPECT_EQ(g[3], 18);
    EXPECT_EQ(g.bound_l(), 3);
    EXPECT_THROW(GapSequence::from_values({3, 2}), std::invalid_argument);
    EXPECT_THROW(GapSequence::from_values({1, 5}, 2), std::invalid_argument);
    auto n = GapSequence::naturals();
    EXPECT_TRUE(n.contains(7));
    EXPECT_EQ(n.first(), 1);
}

TEST(OperatorNorm, NoStrategyWithoutOracleOrSamples)
{
    SearchOptions opts;
    opts.random_samples = 0;
    EXPECT_THROW(estimate_operator_norm(make_space("lp:1/2"), {1}, 3, opts), std::invalid_argument);
}
