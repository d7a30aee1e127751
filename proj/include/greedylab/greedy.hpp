#pragma once
/**
 * @file greedy.hpp
 * @brief t-greedy sets and greedy sums for the (weak) thresholding greedy algorithm.
 *
 * A finite set A is t-greedy for x when
 *     min_{i in A} |x_i| >= t * max_{j not in A} |x_j|.
 * With a tie tolerance tau the comparison is relaxed to ">= t * max - tau".
 */

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "greedylab/coeff_vector.hpp"
#include "greedylab/errors.hpp"

namespace greedylab {

namespace detail {

inline void check_weakness(double t)
{
    if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("weakness parameter t must lie in (0, 1]");
}

}  // namespace detail

inline bool is_t_greedy(const CoeffVector& x, const IndexSet& A, double t, double tie_tolerance = 0.0)
{
    detail::check_weakness(t);
    double min_in = std::numeric_limits<double>::infinity();
    for (Index i : A) min_in = std::min(min_in, std::abs(x[i]));
    double max_out = 0.0;
    for (const auto& [i, v] : x)
        if (!A.contains(i)) max_out = std::max(max_out, std::abs(v));
    return min_in >= t * max_out - tie_tolerance;
}

/// Chooses `take` indices out of a group whose moduli tie at the cut.
struct TieBreaker {
    using Chooser = std::function<std::vector<Index>(const std::vector<Index>& tied, std::size_t take)>;

    std::string name;
    Chooser choose;

    static TieBreaker lowest_index()
    {
        return {"lowest-index", [](const std::vector<Index>& tied, std::size_t take) {
                    return std::vector<Index>(tied.begin(), tied.begin() + static_cast<std::ptrdiff_t>(take));
                }};
    }
    static TieBreaker highest_index()
    {
        return {"highest-index", [](const std::vector<Index>& tied, std::size_t take) {
                    return std::vector<Index>(tied.end() - static_cast<std::ptrdiff_t>(take), tied.end());
                }};
    }
    /// Caller-controlled choice, e.g. an adversary searching for bad greedy sums.
    static TieBreaker adversarial(Chooser chooser) { return {"adversarial", std::move(chooser)}; }
};

struct GreedySelection {
    IndexSet indices;
    double t = 1.0;
    std::size_t cardinality = 0;
    /// Groups of tied moduli that straddled the cut and were split by the tie policy.
    std::vector<IndexSet> tie_trace;
    /// Requested size exceeded |supp(x)|; the selection is the whole support.
    bool short_selection = false;

    bool revalidate(const CoeffVector& x, double tie_tolerance = 0.0) const
    {
        return indices.size() == cardinality && is_t_greedy(x, indices, t, tie_tolerance);
    }
};

/**
 * A t-greedy set of size m. For every t this is the m largest moduli, which is
 * 1-greedy and hence t-greedy; ties at the cut are resolved by `ties`.
 */
inline GreedySelection one_greedy_set(const CoeffVector& x, Index m, double t,
                                      const TieBreaker& ties = TieBreaker::lowest_index(),
                                      double tie_tolerance = 0.0)
{
    detail::check_weakness(t);
    if (m < 0) throw std::invalid_argument("one_greedy_set: m must be >= 0");
    GreedySelection sel;
    sel.t = t;
    const auto n = static_cast<Index>(x.size());
    if (m >= n) {
        sel.indices = x.support();
        sel.cardinality = x.size();
        sel.short_selection = m > n;
        return sel;
    }
    if (m == 0) return sel;

    std::vector<double> mods;
    for (const auto& e : x) mods.push_back(std::abs(e.second));
    std::vector<double> sorted = mods;
    std::nth_element(sorted.begin(), sorted.begin() + (m - 1), sorted.end(), std::greater<>());
    const double cut = sorted[static_cast<std::size_t>(m - 1)];

    std::vector<Index> chosen;
    std::vector<Index> tied;
    std::size_t k = 0;
    for (const auto& [i, v] : x) {
        double a = mods[k++];
        if (a > cut)
            chosen.push_back(i);
        else if (a >= cut - tie_tolerance)
            tied.push_back(i);
    }
    const std::size_t take = static_cast<std::size_t>(m) - chosen.size();
    if (tied.size() > take) {
        auto picked = ties.choose(tied, take);
        IndexSet picked_set(picked);
        if (picked_set.size() != take || picked.size() != take)
            throw InvalidSelection("tie policy '" + ties.name + "' returned the wrong number of indices");
        for (Index i : picked_set)
            if (!std::binary_search(tied.begin(), tied.end(), i))
                throw InvalidSelection("tie policy '" + ties.name + "' picked an index outside the tied group");
        sel.tie_trace.push_back(IndexSet(tied));
        chosen.insert(chosen.end(), picked_set.begin(), picked_set.end());
    } else {
        chosen.insert(chosen.end(), tied.begin(), tied.end());
    }
    sel.indices = IndexSet(std::move(chosen));
    sel.cardinality = sel.indices.size();
    return sel;
}

struct GreedyEnumeration {
    std::vector<GreedySelection> sets;
    /// More than `cap` t-greedy sets exist; `sets` holds the first `cap` in lexicographic order.
    bool overflow = false;
};

/**
 * All t-greedy sets of size m, in lexicographic order, truncated at `cap`.
 *
 * Depth-first over the support in index order, trying "include" before
 * "exclude". A branch is cut when even the best completion fails: with r slots
 * left, taking the r largest remaining moduli maximizes the minimum of the set
 * and minimizes the maximum of the complement at the same time.
 */
inline GreedyEnumeration enumerate_t_greedy_sets(const CoeffVector& x, Index m, double t, std::size_t cap,
                                                 double tie_tolerance = 0.0)
{
    detail::check_weakness(t);
    if (m < 0) throw std::invalid_argument("enumerate_t_greedy_sets: m must be >= 0");
    GreedyEnumeration result;
    const std::size_t n = x.size();
    if (static_cast<std::size_t>(m) >= n) {
        GreedySelection sel;
        sel.t = t;
        sel.indices = x.support();
        sel.cardinality = n;
        sel.short_selection = static_cast<std::size_t>(m) > n;
        if (cap > 0)
            result.sets.push_back(std::move(sel));
        else
            result.overflow = true;
        return result;
    }

    std::vector<Index> index;
    std::vector<double> mods;
    for (const auto& [i, v] : x) {
        index.push_back(i);
        mods.push_back(std::abs(v));
    }
    // suffix[k]: moduli of positions k..n-1, descending.
    std::vector<std::vector<double>> suffix(n + 1);
    for (std::size_t k = n; k-- > 0;) {
        suffix[k] = suffix[k + 1];
        suffix[k].insert(std::upper_bound(suffix[k].begin(), suffix[k].end(), mods[k], std::greater<>()), mods[k]);
    }

    const double inf = std::numeric_limits<double>::infinity();
    const auto want = static_cast<std::size_t>(m);
    std::vector<Index> chosen;
    bool stop = false;

    std::function<void(std::size_t, double, double)> dfs = [&](std::size_t k, double min_in, double max_out) {
        if (stop) return;
        const std::size_t r = want - chosen.size();
        const std::size_t rem = n - k;
        if (r > rem) return;
        const auto& top = suffix[k];
        double best_min = std::min(min_in, r > 0 ? top[r - 1] : inf);
        double best_max = std::max(max_out, r < rem ? top[r] : 0.0);
        if (best_min < t * best_max - tie_tolerance) return;
        if (k == n) {
            if (result.sets.size() == cap) {
                result.overflow = true;
                stop = true;
                return;
            }
            GreedySelection sel;
            sel.t = t;
            sel.indices = IndexSet(chosen);
            sel.cardinality = chosen.size();
            result.sets.push_back(std::move(sel));
            return;
        }
        if (r > 0) {
            chosen.push_back(index[k]);
            dfs(k + 1, std::min(min_in, mods[k]), max_out);
            chosen.pop_back();
        }
        dfs(k + 1, min_in, std::max(max_out, mods[k]));
    };
    dfs(0, inf, 0.0);
    return result;
}

/// G(x) = P_A(x) for a selection that must still be t-greedy for x.
inline CoeffVector greedy_sum(const CoeffVector& x, const GreedySelection& sel, double tie_tolerance = 0.0)
{
    if (!sel.revalidate(x, tie_tolerance)) throw InvalidSelection("invalid selection");
    return projection(x, sel.indices);
}

/// x - G(x).
inline CoeffVector greedy_remainder(const CoeffVector& x, const GreedySelection& sel, double tie_tolerance = 0.0)
{
    if (!sel.revalidate(x, tie_tolerance)) throw InvalidSelection("invalid selection");
    return complement_projection(x, sel.indices);
}

/**
 * Uniformly random member of a structured family of t-greedy sets of size
 * `card`: pick a floor f among the moduli, force every |x_j| > f/t in, and fill
 * from f <= |x_j| <= f/t. Returns nullopt when card exceeds the support.
 */
template <class Rng>
std::optional<IndexSet> random_t_greedy_set(const CoeffVector& x, std::size_t card, double t, Rng& rng)
{
    detail::check_weakness(t);
    if (card > x.size()) return std::nullopt;
    if (card == 0) return IndexSet{};
    std::vector<double> floors;
    for (const auto& e : x) floors.push_back(std::abs(e.second));
    std::sort(floors.begin(), floors.end());
    floors.erase(std::unique(floors.begin(), floors.end()), floors.end());
    std::shuffle(floors.begin(), floors.end(), rng);
    for (double f : floors) {
        std::vector<Index> forced;
        std::vector<Index> optional;
        for (const auto& [i, v] : x) {
            double a = std::abs(v);
            if (t * a > f)
                forced.push_back(i);
            else if (a >= f)
                optional.push_back(i);
        }
        if (forced.size() > card || forced.size() + optional.size() < card) continue;
        std::shuffle(optional.begin(), optional.end(), rng);
        forced.insert(forced.end(), optional.begin(),
                      optional.begin() + static_cast<std::ptrdiff_t>(card - forced.size()));
        return IndexSet(std::move(forced));
    }
    return std::nullopt;  // unreachable: f = card-th largest modulus always fits
}

}  // namespace greedylab
