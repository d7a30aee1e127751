#pragma once
/**
 * @file perturb.hpp
 * @brief Quasi-Banach tools: the crude projection bound, the finite-support
 * perturbation that keeps a t-greedy set greedy, and the padding construction
 * that moves a greedy set past an initial segment.
 *
 * alpha is the quasi-triangle constant of the space and
 * c = sup_i (1 + ||e_i||)(1 + ||e_i^*||).
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "greedylab/coeff_vector.hpp"
#include "greedylab/constants.hpp"
#include "greedylab/errors.hpp"
#include "greedylab/gap_sequence.hpp"
#include "greedylab/greedy.hpp"
#include "greedylab/parallel.hpp"
#include "greedylab/sampling.hpp"
#include "greedylab/space.hpp"

namespace greedylab {

/// alpha^{|A|-1} |A| c; 0 for the empty set.
inline double projection_crude_bound(const SpaceDescriptor& space, const IndexSet& A)
{
    if (A.empty()) return 0.0;
    const auto n = static_cast<double>(A.size());
    return std::pow(space.alpha, n - 1.0) * n * space.c_param;
}

/// alpha^2 C: the bound on all vectors implied by a bound C on finitely supported ones.
inline double amplified_constant(const SpaceDescriptor& space, double C) { return space.alpha * space.alpha * C; }

inline double sign_of(double v) { return v < 0.0 ? -1.0 : 1.0; }

/// Supplies a finitely supported z with ||x - z|| <= delta.
using ZPicker = std::function<CoeffVector(const CoeffVector& x, double delta)>;

/// Shortest initial segment P_{[1,N]} x within delta of x (x itself if none is shorter).
inline ZPicker truncation_picker(const SpaceDescriptor& space)
{
    return [space](const CoeffVector& x, double delta) {
        CoeffVector z;
        for (const auto& [i, v] : x) {
            if (space(x - z) <= delta) return z;
            z.set(i, v);
        }
        return z;
    };
}

struct PerturbResult {
    CoeffVector y;
    CoeffVector z;
    double delta = 0.0;
    double beta = 0.0;
    std::vector<BoundCheck> checks;
    bool t_greedy = false;

    bool ok() const { return t_greedy && all_hold(checks); }
    double worst_margin() const
    {
        double w = std::numeric_limits<double>::infinity();
        for (const auto& c : checks) w = std::min(w, c.margin());
        return w;
    }
};

/**
 * delta = eps / (4 c^2 alpha^{|A|} |A|), y = z + 2 c delta sum_{i in A} sign(x_i) e_i
 * with sign(0) = 1. Records
 *   inA       min_{i in A} |y_i| >= beta + c delta
 *   notinA    max_{i not in A} |y_i| <= (beta + c delta) / t
 *   distance  ||x - y|| <= eps
 * and whether A is t-greedy for y. A = {} returns z unchanged.
 */
inline PerturbResult perturb_checked(const SpaceDescriptor& space, const CoeffVector& x, const IndexSet& A, double t,
                                     double eps, const ZPicker& z_picker)
{
    detail::check_weakness(t);
    if (!(eps > 0.0)) throw std::invalid_argument("perturb: eps must be > 0");
    if (!is_t_greedy(x, A, t)) throw std::invalid_argument("perturb: A is not t-greedy for x");
    PerturbResult res;
    const double c = space.c_param;
    if (A.empty()) {
        res.z = z_picker(x, eps);
        res.y = res.z;
        res.delta = eps;
        res.checks.push_back({"picker", space(x - res.z), eps});
        res.t_greedy = true;
        return res;
    }
    const auto n = static_cast<double>(A.size());
    res.delta = eps / (4.0 * c * c * std::pow(space.alpha, n) * n);
    res.z = z_picker(x, res.delta);
    res.checks.push_back({"picker", space(x - res.z), res.delta});

    res.y = res.z;
    for (Index i : A) res.y.set(i, res.y[i] + 2.0 * c * res.delta * sign_of(x[i]));

    res.beta = std::numeric_limits<double>::infinity();
    for (Index i : A) res.beta = std::min(res.beta, std::abs(x[i]));
    double min_in = std::numeric_limits<double>::infinity();
    for (Index i : A) min_in = std::min(min_in, std::abs(res.y[i]));
    double max_out = 0.0;
    for (const auto& [i, v] : res.y)
        if (!A.contains(i)) max_out = std::max(max_out, std::abs(v));
    res.checks.push_back({"inA", res.beta + c * res.delta, min_in});
    res.checks.push_back({"notinA", max_out, (res.beta + c * res.delta) / t});
    res.checks.push_back({"distance", space(x - res.y), eps});
    res.t_greedy = is_t_greedy(res.y, A, t);
    return res;
}

/// As perturb_checked, but throws InvariantViolation naming the first failed inequality.
inline CoeffVector perturb_to_finite_support(const SpaceDescriptor& space, const CoeffVector& x, const IndexSet& A,
                                            double t, double eps, const ZPicker& z_picker)
{
    auto res = perturb_checked(space, x, A, t, eps, z_picker);
    for (const auto& c : res.checks)
        if (!c.holds())
            throw InvariantViolation("perturbation check '" + c.name + "' failed: " + std::to_string(c.lhs) + " > " +
                                     std::to_string(c.rhs));
    if (!res.t_greedy) throw InvariantViolation("perturbation: A is not t-greedy for y");
    return res.y;
}

inline CoeffVector perturb_to_finite_support(const SpaceDescriptor& space, const CoeffVector& x, const IndexSet& A,
                                            double t, double eps)
{
    return perturb_to_finite_support(space, x, A, t, eps, truncation_picker(space));
}

struct PaddingResult {
    CoeffVector y;
    IndexSet D;
    /// (A \ B) u D.
    IndexSet moved;
    std::vector<BoundCheck> checks;
    bool t_greedy = false;
    /// First (i in moved, j outside) with |y_j| > |y_i| / t, when the set is not t-greedy.
    std::optional<std::pair<Index, Index>> failing_pair;

    bool ok() const { return t_greedy && moved.size() == moved_target && all_hold(checks); }
    std::size_t moved_target = 0;

    double worst_margin() const
    {
        double w = std::numeric_limits<double>::infinity();
        for (const auto& c : checks) w = std::min(w, c.margin());
        return w;
    }
};

/**
 * B = {1..m}, D the |A n B| indices right after max(A u B u supp x), and
 * y = x - P_B x + 2 c ||x|| 1_D. Records
 *   notinD          max_{j not in D} |y_j| <= c ||x|| <= min_{i in D} |y_i|
 *   notinBAminusBD  max_{j not in A u B u D} |y_j| <= min_{i in A \ B} |y_i| / t
 *   thirdone        max_{j in B} |y_j| = 0 <= min_{i in A \ B} |y_i| / t
 *   easypart        ||P_B x|| <= m alpha^m c ||x||
 * and checks that (A \ B) u D is t-greedy for y with |A| elements.
 */
inline PaddingResult padding_checked(const SpaceDescriptor& space, const CoeffVector& x, const IndexSet& A, double t,
                                     Index m)
{
    detail::check_weakness(t);
    if (x.empty()) throw std::invalid_argument("padding: x must be nonzero");
    if (m < 0) throw std::invalid_argument("padding: m must be >= 0");
    if (!is_t_greedy(x, A, t)) throw std::invalid_argument("padding: A is not t-greedy for x");

    PaddingResult res;
    const double c = space.c_param;
    const double nx = space(x);
    const IndexSet B = m > 0 ? IndexSet::interval(1, m) : IndexSet{};
    const auto overlap = static_cast<Index>(set_intersection(A, B).size());
    Index start = std::max({m, x.max_index(), A.empty() ? Index{0} : A.max()}) + 1;
    res.D = overlap > 0 ? IndexSet::interval(start, start + overlap - 1) : IndexSet{};
    res.y = complement_projection(x, B) + indicator(res.D, 2.0 * c * nx);
    const IndexSet AminusB = set_difference(A, B);
    res.moved = set_union(AminusB, res.D);
    res.moved_target = A.size();

    const double inf = std::numeric_limits<double>::infinity();
    double max_not_D_x = 0.0;
    for (const auto& [j, v] : x)
        if (!res.D.contains(j)) max_not_D_x = std::max(max_not_D_x, std::abs(v));
    double max_not_D_y = 0.0;
    for (const auto& [j, v] : res.y)
        if (!res.D.contains(j)) max_not_D_y = std::max(max_not_D_y, std::abs(v));
    double min_D = inf;
    for (Index i : res.D) min_D = std::min(min_D, std::abs(res.y[i]));
    double min_AB = inf;
    for (Index i : AminusB) min_AB = std::min(min_AB, std::abs(res.y[i]));
    double max_rest = 0.0;
    for (const auto& [j, v] : res.y)
        if (!A.contains(j) && !B.contains(j) && !res.D.contains(j)) max_rest = std::max(max_rest, std::abs(v));
    double max_B = 0.0;
    for (Index j : B) max_B = std::max(max_B, std::abs(res.y[j]));

    res.checks.push_back({"notinD_restriction", max_not_D_y, max_not_D_x});
    res.checks.push_back({"notinD_coefficient", max_not_D_x, c * nx});
    if (!res.D.empty()) res.checks.push_back({"notinD", c * nx, min_D});
    if (!AminusB.empty()) {
        res.checks.push_back({"notinBAminusBD", max_rest, min_AB / t});
        res.checks.push_back({"thirdone", max_B, min_AB / t});
    }
    res.checks.push_back({"easypart", space(projection(x, B)),
                          static_cast<double>(m) * std::pow(space.alpha, static_cast<double>(m)) * c * nx});

    res.t_greedy = is_t_greedy(res.y, res.moved, t);
    if (!res.t_greedy) {
        for (Index i : res.moved)
            for (const auto& [j, v] : res.y)
                if (!res.moved.contains(j) && std::abs(v) * t > std::abs(res.y[i]) && !res.failing_pair)
                    res.failing_pair = std::pair{i, j};
    }
    return res;
}

/// Returns (y, D); throws InvariantViolation with the failing index pair or inequality.
inline std::pair<CoeffVector, IndexSet> padding_set_construction(const SpaceDescriptor& space, const CoeffVector& x,
                                                                 const IndexSet& A, double t, Index m)
{
    auto res = padding_checked(space, x, A, t, m);
    if (res.failing_pair)
        throw InvariantViolation("padding: (A\\B) u D is not t-greedy for y at pair (" +
                                 std::to_string(res.failing_pair->first) + ", " +
                                 std::to_string(res.failing_pair->second) + ")");
    for (const auto& c : res.checks)
        if (!c.holds())
            throw InvariantViolation("padding check '" + c.name + "' failed: " + std::to_string(c.lhs) + " > " +
                                     std::to_string(c.rhs));
    if (res.moved.size() != A.size()) throw InvariantViolation("padding: |(A\\B) u D| != |A|");
    return {res.y, res.D};
}

/// Report for a randomized property suite.
struct SuiteReport {
    std::string lemma;
    std::string space;
    std::size_t trials = 0;
    std::size_t failures = 0;
    double worst_margin = std::numeric_limits<double>::infinity();
    std::uint64_t seed = 0;
};

inline std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial)
{
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (trial + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace detail {

struct TrialOutcome {
    bool ok = true;
    double margin = std::numeric_limits<double>::infinity();
};

template <class Trial>
SuiteReport run_suite(std::string lemma, const SpaceDescriptor& space, std::size_t trials, std::uint64_t seed,
                      Trial&& trial)
{
    std::vector<TrialOutcome> outcomes(trials);
    const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(trials, 64));
    parallel_chunks(trials, chunks, [&](std::size_t, std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            Rng rng(trial_seed(seed, i));
            try {
                outcomes[i] = trial(rng);
            } catch (const std::exception&) {
                outcomes[i] = {false, -std::numeric_limits<double>::infinity()};
            }
        }
    });
    SuiteReport rep;
    rep.lemma = std::move(lemma);
    rep.space = space.key;
    rep.trials = trials;
    rep.seed = seed;
    for (const auto& o : outcomes) {
        if (!o.ok) ++rep.failures;
        rep.worst_margin = std::min(rep.worst_margin, o.margin);
    }
    return rep;
}

inline double random_weakness(Rng& rng)
{
    std::uniform_real_distribution<double> u(0.1, 1.0);
    return std::bernoulli_distribution(0.3)(rng) ? 1.0 : u(rng);
}

inline IndexSet random_greedy_set(const CoeffVector& x, double t, Rng& rng)
{
    std::uniform_int_distribution<std::size_t> card(0, std::min<std::size_t>(x.size(), 8));
    return *random_t_greedy_set(x, card(rng), t, rng);
}

}  // namespace detail

/// Random (x, A, t, eps) with deep x; perturbation checks must all hold.
inline SuiteReport perturbation_suite(const SpaceDescriptor& space, std::size_t trials, std::uint64_t seed,
                                      Index dim = 8)
{
    const auto picker = truncation_picker(space);
    return detail::run_suite("perturbation", space, trials, seed, [&](Rng& rng) {
        auto x = deep_vector(dim, 4, 0.5, rng);
        double t = detail::random_weakness(rng);
        auto A = detail::random_greedy_set(x, t, rng);
        std::uniform_real_distribution<double> expo(-6.0, 0.0);
        double eps = space(x) * std::pow(10.0, expo(rng));
        auto res = perturb_checked(space, x, A, t, eps, picker);
        return detail::TrialOutcome{res.ok(), res.worst_margin()};
    });
}

/// Random (x, A, t, m); padding checks must all hold.
inline SuiteReport padding_suite(const SpaceDescriptor& space, std::size_t trials, std::uint64_t seed, Index dim = 8)
{
    return detail::run_suite("padding", space, trials, seed, [&](Rng& rng) {
        auto x = random_vector(dim, rng);
        double t = detail::random_weakness(rng);
        auto A = detail::random_greedy_set(x, t, rng);
        std::uniform_int_distribution<Index> mdist(0, dim);
        auto res = padding_checked(space, x, A, t, mdist(rng));
        return detail::TrialOutcome{res.ok(), res.worst_margin()};
    });
}

/// ||P_A x|| <= alpha^{|A|-1} |A| c ||x|| on random (x, A), |A| <= 8.
inline SuiteReport crude_bound_suite(const SpaceDescriptor& space, std::size_t trials, std::uint64_t seed,
                                     Index dim = 8)
{
    return detail::run_suite("crude-bound", space, trials, seed, [&](Rng& rng) {
        auto x = random_vector(dim, rng);
        std::vector<Index> idx;
        std::bernoulli_distribution coin(0.5);
        for (Index i = 1; i <= std::min<Index>(dim, 8); ++i)
            if (coin(rng)) idx.push_back(i);
        IndexSet A(idx);
        BoundCheck c{"crude", space(projection(x, A)), projection_crude_bound(space, A) * space(x)};
        return detail::TrialOutcome{c.holds(), c.margin()};
    });
}

struct EquivalenceAudit {
    std::string space;
    std::size_t samples = 0;
    double ratio_finite = 0.0;
    double ratio_all = 0.0;
    double factor = 1.0;  ///< alpha^2
    std::string depth_note;
    std::vector<BoundCheck> checks;

    bool holds() const { return all_hold(checks); }
};

/**
 * Projection ratios over greedy sets of deep vectors (support out to 4 dim
 * with a geometric tail, standing in for infinite support) against ratios over
 * finitely supported vectors: random samples on [1, dim] plus the perturbed
 * finite counterpart of each deep sample. Checks ratio_all <= alpha^2
 * ratio_finite + 1e-6. budget = 0 gives an empty report.
 */
inline EquivalenceAudit equivalence_audit(const SpaceDescriptor& space, const GapSequence& gap, double t, Index dim,
                                          std::size_t budget, std::uint64_t seed = 1)
{
    EquivalenceAudit audit;
    audit.space = space.key;
    audit.factor = space.alpha * space.alpha;
    audit.depth_note = "truncation depth 4x dim, geometric tail ratio 0.3";
    if (budget == 0) return audit;
    const auto sizes = gap.terms_up_to(dim);
    const auto picker = truncation_picker(space);
    Rng rng(seed);
    // Largest ratio over the greedy sets of x; returns the set attaining it.
    auto best_ratio = [&](const CoeffVector& x, double& into) {
        const double nx = space(x);
        double local = -1.0;
        IndexSet arg;
        for (Index n : sizes) {
            for (const auto& sel : enumerate_t_greedy_sets(x, n, t, 256).sets) {
                double r = space(projection(x, sel.indices)) / nx;
                if (r > local) {
                    local = r;
                    arg = sel.indices;
                }
            }
            if (static_cast<std::size_t>(n) >= x.size()) break;
        }
        into = std::max(into, local);
        return arg;
    };
    for (std::size_t s = 0; s < budget; ++s) {
        auto deep = deep_vector(dim, 4, 0.3, rng);
        auto worst = best_ratio(deep, audit.ratio_all);
        auto shallow = random_vector(dim, rng);
        best_ratio(shallow, audit.ratio_finite);
        auto y = perturb_to_finite_support(space, deep, worst, t, 1e-9 * space(deep), picker);
        best_ratio(y, audit.ratio_finite);
        ++audit.samples;
    }
    audit.checks.push_back({"amplification", audit.ratio_all, audit.factor * audit.ratio_finite + 1e-6});
    return audit;
}

}  // namespace greedylab
