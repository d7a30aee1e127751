#pragma once
/**
 * @file counterexample.hpp
 * @brief The divergent element of the summing basis, stored as runs.
 *
 * Spikes sit at n_1 = 1, n_{k+1} = n_k + 10^k + 1 with value 1/sqrt(k); the
 * block A_k = {n_k + 1, ..., n_k + 10^k} between consecutive spikes carries the
 * constant -1/(10^k sqrt(k)), so every block cancels the spike before it.
 *
 * Coefficients are constant on a run, hence partial sums of any projection
 * move monotonically across a run and the summing norm is attained at a run
 * end. The norm of P_A y therefore depends only on how many indices A takes
 * from each run, and all searches below work on those per-run counts.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "greedylab/coeff_vector.hpp"
#include "greedylab/errors.hpp"
#include "greedylab/parallel.hpp"

namespace greedylab {

struct Run {
    Index start = 0;
    Index length = 0;
    double value = 0.0;

    Index last() const { return start + length - 1; }
};

/// Per-run counts of a selection, in run order.
struct RunSelection {
    std::vector<Index> counts;

    Index cardinality() const
    {
        Index s = 0;
        for (Index c : counts) s += c;
        return s;
    }
};

class ExampleSequence {
public:
    static constexpr int kMaxDepth = 8;

    explicit ExampleSequence(int K) : K_(K)
    {
        if (K < 1 || K > kMaxDepth) throw std::invalid_argument("example depth K must lie in [1, 8]");
        n_.push_back(1);
        Index pow10 = 1;
        for (int k = 1; k <= K; ++k) {
            pow10 *= 10;
            n_.push_back(n_.back() + pow10 + 1);
        }
        pow10 = 1;
        for (int k = 1; k <= K; ++k) {
            pow10 *= 10;
            const double spike = 1.0 / std::sqrt(static_cast<double>(k));
            runs_.push_back({n_[k - 1], 1, spike});
            runs_.push_back({n_[k - 1] + 1, pow10, -1.0 / (static_cast<double>(pow10) * std::sqrt(static_cast<double>(k)))});
        }
        order_.resize(runs_.size());
        for (std::size_t r = 0; r < runs_.size(); ++r) order_[r] = r;
        std::stable_sort(order_.begin(), order_.end(),
                         [&](std::size_t a, std::size_t b) { return modulus(a) > modulus(b); });
        for (std::size_t i = 1; i < order_.size(); ++i)
            if (modulus(order_[i]) == modulus(order_[i - 1]))
                throw std::logic_error("example runs must have distinct moduli");
    }

    int depth() const { return K_; }
    /// n_1, ..., n_{K+1}.
    const std::vector<Index>& n() const { return n_; }
    /// Spike k, block k at positions 2(k-1), 2k-1.
    const std::vector<Run>& runs() const { return runs_; }
    /// Run positions by decreasing modulus.
    const std::vector<std::size_t>& modulus_order() const { return order_; }

    static std::size_t spike_run(int k) { return static_cast<std::size_t>(2 * (k - 1)); }
    static std::size_t block_run(int k) { return static_cast<std::size_t>(2 * k - 1); }
    static bool is_spike(std::size_t run) { return run % 2 == 0; }

    double modulus(std::size_t run) const { return std::abs(runs_[run].value); }
    Index support_size() const { return n_.back() - 1; }
    Index max_index() const { return n_.back() - 1; }
    IndexSet block(int k) const { return IndexSet::interval(runs_[block_run(k)].start, runs_[block_run(k)].last()); }

    std::optional<std::size_t> run_of(Index i) const
    {
        if (i < 1 || i > max_index()) return std::nullopt;
        auto it = std::upper_bound(runs_.begin(), runs_.end(), i, [](Index v, const Run& r) { return v < r.start; });
        return static_cast<std::size_t>(std::distance(runs_.begin(), it) - 1);
    }

    double coefficient(Index i) const
    {
        auto r = run_of(i);
        return r ? runs_[*r].value : 0.0;
    }

    /// sum_{j <= i} y_j, in closed form per run.
    double prefix_sum(Index i) const
    {
        double s = 0.0;
        for (const auto& run : runs_) {
            if (i < run.start) break;
            s += static_cast<double>(std::min(i, run.last()) - run.start + 1) * run.value;
        }
        return s;
    }

    RunSelection full() const
    {
        RunSelection sel;
        for (const auto& r : runs_) sel.counts.push_back(r.length);
        return sel;
    }

    /// Materialized y_K; only for small depths.
    CoeffVector dense() const
    {
        if (support_size() > 2'000'000) throw std::invalid_argument("dense example too large");
        std::vector<std::pair<Index, double>> entries;
        for (const auto& r : runs_)
            for (Index i = r.start; i <= r.last(); ++i) entries.emplace_back(i, r.value);
        return CoeffVector::from_entries(std::move(entries));
    }

private:
    int K_;
    std::vector<Index> n_;
    std::vector<Run> runs_;
    std::vector<std::size_t> order_;
};

inline ExampleSequence build_example(int K) { return ExampleSequence(K); }

/// Summing norm of the projection that takes counts[r] indices from run r.
inline double projection_norm(const ExampleSequence& ex, const RunSelection& sel)
{
    double s = 0.0;
    double best = 0.0;
    const auto& runs = ex.runs();
    for (std::size_t r = 0; r < runs.size(); ++r) {
        s += static_cast<double>(sel.counts[r]) * runs[r].value;
        best = std::max(best, std::abs(s));
    }
    return best;
}

/// Counts are in range and the selection is t-greedy for y_K.
inline bool is_t_greedy(const ExampleSequence& ex, const RunSelection& sel, double t)
{
    const auto& runs = ex.runs();
    if (sel.counts.size() != runs.size()) return false;
    double min_in = std::numeric_limits<double>::infinity();
    double max_out = 0.0;
    for (std::size_t r = 0; r < runs.size(); ++r) {
        if (sel.counts[r] < 0 || sel.counts[r] > runs[r].length) return false;
        if (sel.counts[r] > 0) min_in = std::min(min_in, ex.modulus(r));
        if (sel.counts[r] < runs[r].length) max_out = std::max(max_out, ex.modulus(r));
    }
    return min_in >= t * max_out;
}

/// Per-run counts of an explicit index set; every index must lie in the support.
inline RunSelection selection_from_indices(const ExampleSequence& ex, const IndexSet& A)
{
    RunSelection sel;
    sel.counts.assign(ex.runs().size(), 0);
    for (Index i : A) {
        auto r = ex.run_of(i);
        if (!r) throw InvalidSelection("index " + std::to_string(i) + " lies outside the support");
        ++sel.counts[*r];
    }
    return sel;
}

/// Smallest k with spike n_k left out, or K + 1 when every spike is taken.
inline int phi_of(const ExampleSequence& ex, const RunSelection& sel)
{
    for (int k = 1; k <= ex.depth(); ++k)
        if (sel.counts[ExampleSequence::spike_run(k)] == 0) return k;
    return ex.depth() + 1;
}

/**
 * Largest F >= 0 with 10^F <= sqrt(phi)/t, i.e. 100^F t^2 <= phi. The
 * comparison carries a 1e-12 relative slack so exact powers of ten are not lost
 * to rounding in t^2.
 */
inline int phi_log_floor(long long phi, double t)
{
    int F = 0;
    long double p = 100.0L * static_cast<long double>(t) * static_cast<long double>(t);
    const long double limit = static_cast<long double>(phi) * (1.0L + 1e-12L);
    while (p <= limit) {
        ++F;
        p *= 100.0L;
    }
    return F;
}

/// L(phi, t) = sum_{k < phi} 1/sqrt(k) - sum_{k <= F} 1/sqrt(k), F = floor(log10(sqrt(phi)/t)).
inline double phi_lower_bound(long long phi, double t)
{
    if (phi < 1) throw std::invalid_argument("phi must be >= 1");
    if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("weakness parameter t must lie in (0, 1]");
    const int F = phi_log_floor(phi, t);
    double s = 0.0;
    for (long long k = 1; k < phi; ++k) s += 1.0 / std::sqrt(static_cast<double>(k));
    for (long long k = 1; k <= F; ++k) s -= 1.0 / std::sqrt(static_cast<double>(k));
    return s;
}

using GreedyChooser = std::function<RunSelection(const ExampleSequence&, Index m, double t)>;

/// The m largest moduli; within a partly taken run the choice of indices does not affect the norm.
inline RunSelection canonical_selection(const ExampleSequence& ex, Index m)
{
    RunSelection sel;
    sel.counts.assign(ex.runs().size(), 0);
    Index left = std::min(m, ex.support_size());
    for (std::size_t r : ex.modulus_order()) {
        Index take = std::min(left, ex.runs()[r].length);
        sel.counts[r] = take;
        left -= take;
    }
    return sel;
}

/// ||G_m^t(y_K)|| for the set produced by `choice`; the choice is revalidated.
inline double greedy_sum_norm(const ExampleSequence& ex, Index m, double t, const GreedyChooser& choice)
{
    if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("weakness parameter t must lie in (0, 1]");
    if (m < 0 || m > ex.support_size()) throw std::invalid_argument("greedy_sum_norm: m out of range");
    RunSelection sel = choice(ex, m, t);
    if (sel.counts.size() != ex.runs().size() || sel.cardinality() != m || !is_t_greedy(ex, sel, t))
        throw InvalidSelection("invalid selection");
    return projection_norm(ex, sel);
}

inline double greedy_sum_norm(const ExampleSequence& ex, Index m, double t)
{
    return greedy_sum_norm(ex, m, t, [](const ExampleSequence& e, Index mm, double) {
        return canonical_selection(e, mm);
    });
}

/// Best selection found for one m, plus the soundness tally over every candidate examined.
struct MinSearch {
    Index m = 0;
    double min_norm = std::numeric_limits<double>::infinity();
    RunSelection argmin;
    std::string family;
    std::size_t candidates = 0;
    std::size_t bound_violations = 0;
    /// Smallest norm - L(phi, t) over candidates that leave out a spike.
    double worst_margin = std::numeric_limits<double>::infinity();

    bool found() const { return !argmin.counts.empty(); }
};

namespace detail {

inline constexpr double kLowerBoundSlack = 1e-9;

struct CandidateSink {
    const ExampleSequence& ex;
    double t;
    const std::vector<double>& bounds;  // L(phi, t) for phi = 1..K
    MinSearch& out;

    void offer(const RunSelection& sel)
    {
        const double norm = projection_norm(ex, sel);
        ++out.candidates;
        const int phi = phi_of(ex, sel);
        if (phi <= ex.depth()) {
            const double margin = norm - bounds[static_cast<std::size_t>(phi - 1)];
            out.worst_margin = std::min(out.worst_margin, margin);
            if (margin < -kLowerBoundSlack) ++out.bound_violations;
        }
        if (norm < out.min_norm) {
            out.min_norm = norm;
            out.argmin = sel;
        }
    }
};

inline std::vector<double> phi_bounds(const ExampleSequence& ex, double t)
{
    std::vector<double> b;
    for (int phi = 1; phi <= ex.depth(); ++phi) b.push_back(phi_lower_bound(phi, t));
    return b;
}

// Assigns `remaining` among the window blocks blocks[j..] and offers the result.
inline bool distribute_exact(const ExampleSequence& ex, const std::vector<std::size_t>& blocks, std::size_t j,
                             Index remaining, RunSelection& sel, CandidateSink& sink)
{
    const auto& runs = ex.runs();
    if (j + 1 == blocks.size()) {
        if (remaining > runs[blocks[j]].length) return false;
        sel.counts[blocks[j]] = remaining;
        sink.offer(sel);
        sel.counts[blocks[j]] = 0;
        return true;
    }
    bool any = false;
    for (Index c = 0; c <= std::min(remaining, runs[blocks[j]].length); ++c) {
        sel.counts[blocks[j]] = c;
        any = distribute_exact(ex, blocks, j + 1, remaining - c, sel, sink) || any;
    }
    sel.counts[blocks[j]] = 0;
    return any;
}

// Nested integer ternary search on the (continuously convex) norm; a heuristic minimum.
inline double distribute_convex(const ExampleSequence& ex, const std::vector<std::size_t>& blocks, std::size_t j,
                                Index remaining, RunSelection& sel, CandidateSink& sink)
{
    const auto& runs = ex.runs();
    const double inf = std::numeric_limits<double>::infinity();
    Index tail = 0;
    for (std::size_t i = j + 1; i < blocks.size(); ++i) tail += runs[blocks[i]].length;
    if (j + 1 == blocks.size()) {
        if (remaining > runs[blocks[j]].length) return inf;
        sel.counts[blocks[j]] = remaining;
        sink.offer(sel);
        double v = projection_norm(ex, sel);
        sel.counts[blocks[j]] = 0;
        return v;
    }
    Index lo = std::max<Index>(0, remaining - tail);
    Index hi = std::min(remaining, runs[blocks[j]].length);
    if (lo > hi) return inf;
    auto eval = [&](Index c) {
        sel.counts[blocks[j]] = c;
        double v = distribute_convex(ex, blocks, j + 1, remaining - c, sel, sink);
        sel.counts[blocks[j]] = 0;
        return v;
    };
    while (hi - lo > 2) {
        Index a = lo + (hi - lo) / 3;
        Index b = hi - (hi - lo) / 3;
        if (eval(a) <= eval(b))
            hi = b;
        else
            lo = a;
    }
    double best = inf;
    for (Index c = lo; c <= hi; ++c) best = std::min(best, eval(c));
    return best;
}

inline constexpr double kWindowExactLimit = 2e6;

}  // namespace detail

/**
 * Minimum of ||P_A y_K|| over t-greedy sets with |A| = m, by windows in the
 * modulus order. For each run q taken as the largest modulus left incomplete,
 * every run above q is full, every run with modulus < t|q| is empty, and the
 * runs in between take arbitrary counts. Spikes in a window are enumerated;
 * blocks are solved exactly (a single block is forced by m) unless the box is
 * too large, in which case a nested ternary search labels the row
 * "window-convex".
 */
inline MinSearch window_min_search(const ExampleSequence& ex, Index m, double t)
{
    if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("weakness parameter t must lie in (0, 1]");
    if (m < 0 || m > ex.support_size()) throw std::invalid_argument("window_min_search: m out of range");
    MinSearch out;
    out.m = m;
    out.family = "window-exact";
    const auto bounds = detail::phi_bounds(ex, t);
    detail::CandidateSink sink{ex, t, bounds, out};
    const auto& runs = ex.runs();
    const auto& order = ex.modulus_order();
    const std::size_t L = order.size();

    Index above = 0;
    for (std::size_t q = 0; q < L; above += runs[order[q]].length, ++q) {
        if (above > m) break;
        std::size_t p = q;
        while (p + 1 < L && ex.modulus(order[p + 1]) >= t * ex.modulus(order[q])) ++p;
        std::vector<std::size_t> spikes;
        std::vector<std::size_t> blocks;
        Index capacity = 0;
        for (std::size_t i = q; i <= p; ++i) {
            (ExampleSequence::is_spike(order[i]) ? spikes : blocks).push_back(order[i]);
            capacity += runs[order[i]].length;
        }
        const Index need = m - above;
        if (need > capacity) continue;

        RunSelection sel;
        sel.counts.assign(runs.size(), 0);
        for (std::size_t i = 0; i < q; ++i) sel.counts[order[i]] = runs[order[i]].length;
        double box = 1.0;
        for (std::size_t b = 0; b + 1 < blocks.size(); ++b) box *= static_cast<double>(runs[blocks[b]].length + 1);

        for (std::uint32_t mask = 0; mask < (1u << spikes.size()); ++mask) {
            Index taken = 0;
            for (std::size_t s = 0; s < spikes.size(); ++s) {
                sel.counts[spikes[s]] = mask >> s & 1u;
                taken += sel.counts[spikes[s]];
            }
            const Index rest = need - taken;
            if (rest < 0) continue;
            if (blocks.empty()) {
                if (rest == 0) sink.offer(sel);
            } else if (box <= detail::kWindowExactLimit) {
                detail::distribute_exact(ex, blocks, 0, rest, sel, sink);
            } else {
                out.family = "window-convex";
                detail::distribute_convex(ex, blocks, 0, rest, sel, sink);
            }
        }
    }
    return out;
}

/**
 * Exhaustive pass over every count vector (all t-greedy sets up to the order
 * inside runs), collecting the minimum for each cardinality 0..|supp|.
 * Refuses depths whose count box exceeds `limit` vectors.
 */
inline std::vector<MinSearch> exhaustive_min_search(const ExampleSequence& ex, double t, double limit = 2e7)
{
    if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("weakness parameter t must lie in (0, 1]");
    const auto& runs = ex.runs();
    double box = 1.0;
    for (const auto& r : runs) box *= static_cast<double>(r.length + 1);
    if (box > limit) throw std::invalid_argument("exhaustive search too large at this depth");

    const auto bounds = detail::phi_bounds(ex, t);
    std::vector<MinSearch> out(static_cast<std::size_t>(ex.support_size() + 1));
    for (std::size_t m = 0; m < out.size(); ++m) {
        out[m].m = static_cast<Index>(m);
        out[m].family = "exhaustive";
    }
    RunSelection sel;
    sel.counts.assign(runs.size(), 0);
    while (true) {
        if (is_t_greedy(ex, sel, t)) {
            detail::CandidateSink sink{ex, t, bounds, out[static_cast<std::size_t>(sel.cardinality())]};
            sink.offer(sel);
        }
        std::size_t r = 0;
        while (r < runs.size() && sel.counts[r] == runs[r].length) sel.counts[r++] = 0;
        if (r == runs.size()) break;
        ++sel.counts[r];
    }
    return out;
}

struct DivergenceRow {
    Index m = 0;
    double t = 1.0;
    int K = 0;
    double min_norm = 0.0;
    int phi = 0;
    /// L(phi, t); absent when the selection keeps every spike of the truncation.
    std::optional<double> lower_bound;
    std::string family;
    std::size_t candidates = 0;
    std::size_t bound_violations = 0;

    std::optional<double> margin() const
    {
        if (!lower_bound) return std::nullopt;
        return min_norm - *lower_bound;
    }
};

struct DivergenceReport {
    int K = 0;
    double t = 1.0;
    bool adversary = false;
    std::vector<DivergenceRow> rows;

    std::size_t violations() const
    {
        std::size_t v = 0;
        for (const auto& r : rows) v += r.bound_violations;
        return v;
    }
};

/// Sweep grid: small m, every full prefix of the modulus order, and the midpoint of each run.
inline std::vector<Index> divergence_grid(const ExampleSequence& ex)
{
    std::vector<Index> grid;
    const Index total = ex.support_size();
    for (Index m = 0; m <= std::min<Index>(total, 3 * ex.depth()); ++m) grid.push_back(m);
    Index cum = 0;
    for (std::size_t r : ex.modulus_order()) {
        grid.push_back(cum + ex.runs()[r].length / 2);
        cum += ex.runs()[r].length;
        grid.push_back(cum);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

/**
 * Rows (m, min-norm, phi, L(phi, t)). With `adversary` the minimum runs over
 * all t-greedy sets (exhaustively when `exhaustive` and the depth allows it,
 * else by windows); without it the canonical top-m set is used. Every
 * candidate that leaves out a spike is checked against L(phi, t) - 1e-9.
 */
inline DivergenceReport divergence_experiment(int K, double t, bool adversary, std::optional<std::vector<Index>> grid = {},
                                              bool exhaustive = false)
{
    const ExampleSequence ex(K);
    DivergenceReport report;
    report.K = K;
    report.t = t;
    report.adversary = adversary;
    const std::vector<Index> ms = grid ? *grid : divergence_grid(ex);
    for (Index m : ms)
        if (m < 0 || m > ex.support_size()) throw std::invalid_argument("divergence grid value out of range");

    std::vector<MinSearch> searches(ms.size());
    if (adversary && exhaustive) {
        auto all = exhaustive_min_search(ex, t);
        for (std::size_t i = 0; i < ms.size(); ++i) searches[i] = all[static_cast<std::size_t>(ms[i])];
    } else {
        const auto bounds = detail::phi_bounds(ex, t);
        parallel_chunks(ms.size(), ms.size(), [&](std::size_t, std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) {
                if (adversary) {
                    searches[i] = window_min_search(ex, ms[i], t);
                } else {
                    MinSearch s;
                    s.m = ms[i];
                    s.family = "canonical";
                    detail::CandidateSink sink{ex, t, bounds, s};
                    auto sel = canonical_selection(ex, ms[i]);
                    if (!is_t_greedy(ex, sel, t)) throw InvariantViolation("canonical selection is not t-greedy");
                    sink.offer(sel);
                    searches[i] = std::move(s);
                }
            }
        });
    }
    for (const auto& s : searches) {
        if (!s.found()) throw InvariantViolation("no t-greedy set of size " + std::to_string(s.m));
        DivergenceRow row;
        row.m = s.m;
        row.t = t;
        row.K = K;
        row.min_norm = s.min_norm;
        row.phi = phi_of(ex, s.argmin);
        if (row.phi <= K) row.lower_bound = phi_lower_bound(row.phi, t);
        row.family = s.family;
        row.candidates = s.candidates;
        row.bound_violations = s.bound_violations;
        report.rows.push_back(std::move(row));
    }
    return report;
}

}  // namespace greedylab
