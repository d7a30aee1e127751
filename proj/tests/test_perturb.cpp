#include <cmath>

#include <gtest/gtest.h>

#include "greedylab/perturb.hpp"
#include "greedylab/sampling.hpp"

using namespace greedylab;

TEST(CrudeBound, Values)
{
    auto l2 = make_space("lp:2");
    EXPECT_DOUBLE_EQ(projection_crude_bound(l2, {3}), 4.0);
    auto half = make_space("lp:1/2");
    ASSERT_DOUBLE_EQ(half.alpha, 2.0);
    ASSERT_DOUBLE_EQ(half.c_param, 4.0);
    EXPECT_DOUBLE_EQ(projection_crude_bound(half, {1, 4, 6}), 48.0);
    EXPECT_EQ(projection_crude_bound(half, {}), 0.0);
}

TEST(CrudeBound, HoldsOnRandomQuasiNormVectors)
{
    auto half = make_space("lp:1/2");
    Rng rng(23);
    IndexSet A{1, 4, 6};
    for (int trial = 0; trial < 1000; ++trial) {
        auto x = random_vector(8, rng);
        EXPECT_LE(half(projection(x, A)), 48.0 * half(x) * (1.0 + 1e-12));
    }
    for (const char* key : {"lp:1/2", "lp:2/3", "lp:1", "summing", "sup"})
        EXPECT_EQ(crude_bound_suite(make_space(key), 1000, 5).failures, 0u) << key;
}

TEST(Perturb, HilbertExample)
{
    auto l2 = make_space("lp:2");
    CoeffVector x;
    for (Index i = 1; i <= 30; ++i) x.set(i, std::pow(0.5, double(i - 1)));
    auto res = perturb_checked(l2, x, {1}, 1.0, 0.1, truncation_picker(l2));
    EXPECT_TRUE(res.ok());
    EXPECT_LE(l2(x - res.y), 0.1);
    EXPECT_TRUE(is_t_greedy(res.y, {1}, 1.0));
    EXPECT_LT(res.y.max_index(), x.max_index());
    EXPECT_NO_THROW(perturb_to_finite_support(l2, x, {1}, 1.0, 0.1));
}

TEST(Perturb, EmptySetReturnsPickerOutput)
{
    auto l2 = make_space("lp:2");
    auto x = CoeffVector::from_dense({1, 0.5, 0.25});
    auto res = perturb_checked(l2, x, {}, 1.0, 0.3, truncation_picker(l2));
    EXPECT_EQ(res.y, res.z);
    EXPECT_TRUE(res.ok());
}

TEST(Perturb, SignOfZeroIsPositive)
{
    EXPECT_EQ(sign_of(0.0), 1.0);
    EXPECT_EQ(sign_of(-2.0), -1.0);
    auto l1 = make_space("lp:1");
    auto x = CoeffVector::from_dense({0.0, 0.0});
    auto res = perturb_checked(l1, x, {2}, 1.0, 1.0, [](const CoeffVector&, double) { return CoeffVector{}; });
    EXPECT_GT(res.y[2], 0.0);
}

TEST(Perturb, RejectsBadArguments)
{
    auto l2 = make_space("lp:2");
    auto x = CoeffVector::from_dense({1, 2});
    EXPECT_THROW(perturb_checked(l2, x, {1}, 1.0, 0.1, truncation_picker(l2)), std::invalid_argument);
    EXPECT_THROW(perturb_checked(l2, x, {2}, 1.0, 0.0, truncation_picker(l2)), std::invalid_argument);
    // a picker that ignores delta breaks the distance chain
    auto lazy = [](const CoeffVector&, double) { return CoeffVector{}; };
    EXPECT_THROW(perturb_to_finite_support(l2, x, {2}, 1.0, 0.1, lazy), InvariantViolation);
}

TEST(Perturb, Suites)
{
    for (const char* key : {"lp:1/2", "lp:2/3", "lp:1"}) {
        auto rep = perturbation_suite(make_space(key), 1000, 42);
        EXPECT_EQ(rep.failures, 0u) << key;
        EXPECT_EQ(rep.trials, 1000u);
        EXPECT_GE(rep.worst_margin, 0.0);
    }
}

TEST(Padding, DisjointBranch)
{
    auto half = make_space("lp:1/2");
    auto x = CoeffVector::from_dense({0.1, 0.2, 3, 2});
    auto [y, D] = padding_set_construction(half, x, {3, 4}, 1.0, 2);
    EXPECT_TRUE(D.empty());
    EXPECT_EQ(y, complement_projection(x, IndexSet::interval(1, 2)));
    EXPECT_TRUE(is_t_greedy(y, {3, 4}, 1.0));
}

TEST(Padding, OneOverlap)
{
    auto half = make_space("lp:1/2");
    Rng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        CoeffVector x;
        for (Index i = 1; i <= 6; ++i) x.set(i, std::uniform_real_distribution<double>(0.01, 0.5)(rng));
        x.set(2, 2.0);
        x.set(5, -1.5);
        auto res = padding_checked(half, x, {2, 5}, 1.0, 2);
        EXPECT_EQ(res.D.size(), 1u);
        EXPECT_EQ(res.D.min(), 7);
        EXPECT_EQ(res.moved, (IndexSet{5, 7}));
        EXPECT_TRUE(res.ok());
    }
}

TEST(Padding, ZeroVectorRejected)
{
    EXPECT_THROW(padding_checked(make_space("lp:1"), CoeffVector{}, {}, 1.0, 1), std::invalid_argument);
}

TEST(Padding, Suites)
{
    for (const char* key : {"lp:1/2", "lp:2/3", "lp:1", "summing"}) {
        auto rep = padding_suite(make_space(key), 1000, 42);
        EXPECT_EQ(rep.failures, 0u) << key;
    }
}

TEST(Padding, CardinalityPreserved)
{
    auto s = make_space("lp:2/3");
    Rng rng(2);
    for (int trial = 0; trial < 300; ++trial) {
        auto x = random_vector(8, rng);
        auto A = one_greedy_set(x, Index(trial % x.size()), 1.0).indices;
        auto res = padding_checked(s, x, A, 1.0, trial % 9);
        EXPECT_EQ(res.moved.size(), A.size());
    }
}

TEST(Equivalence, Audit)
{
    auto gap = GapSequence::naturals();
    EXPECT_EQ(equivalence_audit(make_space("lp:2/3"), gap, 1.0, 6, 0).samples, 0u);
    for (const char* key : {"lp:2/3", "lp:1/2", "lp:1"}) {
        auto sp = make_space(key);
        auto audit = equivalence_audit(sp, gap, 0.8, 5, 30, 9);
        EXPECT_TRUE(audit.holds()) << key;
        EXPECT_DOUBLE_EQ(audit.factor, sp.alpha * sp.alpha);
    }
}

TEST(TrialSeeds, Distinct)
{
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(trial_seed(42, i));
    EXPECT_EQ(seen.size(), 1000u);
    EXPECT_EQ(trial_seed(42, 3), trial_seed(42, 3));
}

namespace {

// Three disjoint finitely supported stages x_1 < x_2 < x_3, each scaled so that
// ||x_{i+1}|| sits at half of min_{l<=i} min|x_l| / (10^{i+1} m_i alpha^{m_i+1} c).
struct Stages {
    std::vector<CoeffVector> x;
    std::vector<IndexSet> A;
    std::vector<Index> m;  // m_0 = 0, m_i = max supp(x_i) + 1
};

Stages build_stages(const SpaceDescriptor& sp, double t, Rng& rng)
{
    const double alpha = sp.alpha, c = sp.c_param;
    const std::vector<Index> sizes{2, 4, 10};
    Stages st;
    st.m.push_back(0);
    double min_coeff = 1.0;
    std::uniform_real_distribution<double> mag(0.2, 1.0);
    Index next = 1;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        CoeffVector raw;
        for (Index k = 0; k < sizes[i]; ++k) raw.set(next + k, (k % 2 ? -1.0 : 1.0) * mag(rng));
        double target = i == 0 ? 1.0 / (20.0 * alpha * c)
                               : 0.5 * min_coeff /
                                     (std::pow(10.0, double(i + 1)) * double(st.m.back()) *
                                      std::pow(alpha, double(st.m.back() + 1)) * c);
        auto x = (target / sp(raw)) * raw;
        for (const auto& [k, v] : x) min_coeff = std::min(min_coeff, std::abs(v));
        // a t-greedy set one larger than everything before it
        Index card = i == 0 ? 1 : std::min<Index>(sizes[i], st.m.back());
        st.A.push_back(one_greedy_set(x, card, t).indices);
        st.x.push_back(x);
        next += sizes[i] + 1;
        st.m.push_back(x.max_index() + 1);
    }
    return st;
}

}  // namespace

TEST(InductiveStages, FiniteInequalitySteps)
{
    Rng rng(77);
    for (const char* key : {"lp:1/2", "lp:2/3"}) {
        auto sp = make_space(key);
        const double alpha = sp.alpha, c = sp.c_param;
        for (double t : {1.0, 0.5}) {
            for (int rep = 0; rep < 20; ++rep) {
                auto st = build_stages(sp, t, rng);
                CoeffVector y;
                for (const auto& x : st.x) y = y + x;

                // coefficients of a later stage sit below every coefficient of an earlier one
                for (std::size_t i = 1; i < st.x.size(); ++i) {
                    double top = 0.0;
                    for (const auto& [k, v] : st.x[i]) top = std::max(top, std::abs(v));
                    EXPECT_LE(top, c * sp(st.x[i]));
                    for (std::size_t l = 0; l < i; ++l)
                        for (const auto& [k, v] : st.x[l]) EXPECT_LT(c * sp(st.x[i]), std::abs(v));
                }

                for (std::size_t i = 1; i < st.x.size(); ++i) {
                    const auto& xi1 = st.x[i];
                    const Index mi = st.m[i];
                    IndexSet Bi = IndexSet::interval(1, 0);
                    CoeffVector yi;
                    for (std::size_t l = 0; l < i; ++l) {
                        Bi = set_union(Bi, st.x[l].support());
                        yi = yi + st.x[l];
                    }
                    ASSERT_GT(st.A[i].size(), Bi.size());
                    EXPECT_LT(static_cast<Index>(Bi.size()), mi);

                    // small subsets of the next stage have small projections
                    const auto supp = xi1.support().values();
                    for (std::uint32_t mask = 1; mask < (1u << supp.size()); ++mask) {
                        if (std::popcount(mask) > mi) continue;
                        std::vector<Index> pick;
                        for (std::size_t b = 0; b < supp.size(); ++b)
                            if (mask >> b & 1u) pick.push_back(supp[b]);
                        EXPECT_LE(sp(projection(xi1, IndexSet(pick))),
                                  std::pow(alpha, double(mi)) * double(mi) * c * sp(xi1) * (1 + 1e-12));
                    }

                    // C: the |B_i| smallest entries of A_{i+1}; D = B_i u (A_{i+1} \ C)
                    std::vector<Index> byMod(st.A[i].begin(), st.A[i].end());
                    std::stable_sort(byMod.begin(), byMod.end(),
                                     [&](Index a, Index b) { return std::abs(xi1[a]) < std::abs(xi1[b]); });
                    IndexSet C(std::vector<Index>(byMod.begin(), byMod.begin() + Bi.size()));
                    IndexSet D = set_union(Bi, set_difference(st.A[i], C));
                    EXPECT_EQ(D.size(), st.A[i].size());
                    EXPECT_TRUE(is_t_greedy(y, D, t));

                    const double PC = sp(projection(y, C));
                    EXPECT_DOUBLE_EQ(PC, sp(projection(xi1, C)));
                    EXPECT_LE(PC, std::pow(alpha, double(C.size()) - 1.0) * double(C.size()) * c * sp(xi1) * (1 + 1e-12));
                    EXPECT_LE(double(mi) * std::pow(alpha, double(mi)) * c * sp(xi1), 1.0);

                    double chain = 0.0;
                    for (std::size_t l = 0; l + 1 < i; ++l) chain += std::pow(alpha, double(l + 1)) * sp(st.x[l]);
                    chain += std::pow(alpha, double(i) - 1.0) * sp(st.x[i - 1]);
                    EXPECT_DOUBLE_EQ(sp(projection(y, Bi)), sp(yi));
                    EXPECT_LE(sp(yi), chain * (1 + 1e-12));
                    EXPECT_LE(chain, 1.0);

                    const double PD = sp(projection(y, D));
                    const double PA = sp(projection(y, st.A[i]));
                    const double PB = sp(projection(y, Bi));
                    const double BminusC = sp(projection(y, Bi) - projection(y, C));
                    EXPECT_GE(PD * (1 + 1e-12), PA / alpha - BminusC);
                    EXPECT_LE(BminusC, alpha * (PB + PC) * (1 + 1e-12));
                }
            }
        }
    }
}
