#pragma once
/**
 * @file constants.hpp
 * @brief Finite-dimensional estimates of greedy-type constants and numerical
 * checks of the constant-level bounds relating them.
 *
 * Every estimate is a lower bound carried by an explicit witness (x, A). An
 * estimate is flagged exact only when it meets a known upper bound: the
 * analytic constant 1 of a 1-unconditional basis, or an operator norm taken
 * over all extreme points of a polyhedral unit ball.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "greedylab/coeff_vector.hpp"
#include "greedylab/errors.hpp"
#include "greedylab/gap_sequence.hpp"
#include "greedylab/greedy.hpp"
#include "greedylab/parallel.hpp"
#include "greedylab/sampling.hpp"
#include "greedylab/space.hpp"

namespace greedylab {

/// Relative tolerance for comparing norms: |a - b| <= kRelTol * max(1, |a|, |b|).
inline constexpr double kRelTol = 1e-12;

inline bool approx_leq(double a, double b, double rel_tol = kRelTol)
{
    return a <= b + rel_tol * std::max({1.0, std::abs(a), std::abs(b)});
}

/// One evaluated inequality lhs <= rhs.
struct BoundCheck {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;

    double margin() const { return rhs - lhs; }
    bool holds(double rel_tol = kRelTol) const { return approx_leq(lhs, rhs, rel_tol); }
};

inline bool all_hold(const std::vector<BoundCheck>& checks, double rel_tol = kRelTol)
{
    return std::all_of(checks.begin(), checks.end(), [&](const BoundCheck& c) { return c.holds(rel_tol); });
}

enum class ConstantKind { QuasiGreedy, SuppressionQuasiGreedy, SuppressionUnconditional, Basis, ProjectionNorm };

inline std::string to_string(ConstantKind kind)
{
    switch (kind) {
    case ConstantKind::QuasiGreedy: return "C_q_t";
    case ConstantKind::SuppressionQuasiGreedy: return "C_sq_t";
    case ConstantKind::SuppressionUnconditional: return "K_s";
    case ConstantKind::Basis: return "K";
    case ConstantKind::ProjectionNorm: return "P_A_norm";
    }
    return "?";
}

/// ||P_A x|| / ||x||, or ||x - P_A x|| / ||x|| for the suppression variant.
inline double projection_ratio(const SpaceDescriptor& space, const CoeffVector& x, const IndexSet& A,
                               bool suppression)
{
    double nx = space(x);
    if (nx == 0.0) return 0.0;
    return (suppression ? space(complement_projection(x, A)) : space(projection(x, A))) / nx;
}

struct ConstantEstimate {
    ConstantKind kind = ConstantKind::QuasiGreedy;
    /// Lower bound realized by the witness.
    double value = 0.0;
    CoeffVector witness_x;
    IndexSet witness_A;
    /// Weakness parameter for the greedy kinds.
    double t = 1.0;
    Index dim = 0;
    bool exact = false;
    std::optional<double> upper_bound;
    std::string upper_bound_note;
    /// Search strategies used, e.g. "structured+extreme-points+random".
    std::string mode;
    std::size_t candidates = 0;
    /// Some greedy-set enumeration hit its cap.
    bool enumeration_truncated = false;

    bool suppression() const { return kind == ConstantKind::SuppressionQuasiGreedy; }

    double recompute(const SpaceDescriptor& space) const
    {
        return projection_ratio(space, witness_x, witness_A, suppression());
    }

    /// Witness reproduces `value` and, for greedy kinds, its set is t-greedy.
    bool revalidate(const SpaceDescriptor& space, double tol = 1e-9) const
    {
        if (witness_x.empty()) return value == 0.0;
        if (std::abs(recompute(space) - value) > tol * std::max(1.0, std::abs(value))) return false;
        if (kind == ConstantKind::QuasiGreedy || kind == ConstantKind::SuppressionQuasiGreedy)
            return is_t_greedy(witness_x, witness_A, t);
        return true;
    }
};

struct SearchOptions {
    std::size_t random_samples = 256;
    std::uint64_t seed = 1;
    /// Cap on t-greedy sets enumerated per (x, cardinality).
    std::size_t enumeration_cap = 4096;
    bool structured = true;
    double tie_tolerance = 0.0;
};

namespace detail {

struct Best {
    double value = -1.0;
    std::size_t candidate = std::numeric_limits<std::size_t>::max();
    IndexSet A;
    bool truncated = false;

    // Larger value wins; equal values keep the earlier candidate.
    void offer(double v, std::size_t cand, const IndexSet& set)
    {
        if (v > value || (v == value && cand < candidate)) {
            value = v;
            candidate = cand;
            A = set;
        }
    }
    void merge(const Best& other)
    {
        truncated = truncated || other.truncated;
        if (other.candidate != std::numeric_limits<std::size_t>::max()) offer(other.value, other.candidate, other.A);
    }
};

inline std::string join_modes(bool structured, bool extreme, bool random)
{
    std::string out;
    auto add = [&](const char* s) {
        if (!out.empty()) out += '+';
        out += s;
    };
    if (structured) add("structured");
    if (extreme) add("extreme-points");
    if (random) add("random");
    return out;
}

}  // namespace detail

/**
 * Lower bound on ||P_A|| over span{e_1..e_dim}. With an extreme-point oracle
 * for a convex polyhedral ball the maximum is attained at a vertex, so the
 * value is exact; otherwise coordinate witnesses plus random samples.
 */
inline ConstantEstimate estimate_operator_norm(const SpaceDescriptor& space, const IndexSet& A, Index dim,
                                               const SearchOptions& opts = {})
{
    if (!A.empty() && dim < A.max()) throw std::invalid_argument("estimate_operator_norm: dim must be >= max(A)");
    const bool oracle = space.has_extreme_points(dim);
    if (!oracle && opts.random_samples == 0) throw std::invalid_argument("no search strategy");

    std::vector<CoeffVector> candidates;
    for (Index i = 1; i <= dim; ++i) candidates.push_back(unit_vector(i));
    if (oracle) {
        auto pts = space.extreme_points(dim);
        candidates.insert(candidates.end(), pts.begin(), pts.end());
    }
    auto rnd = random_vectors(dim, opts.random_samples, opts.seed);
    candidates.insert(candidates.end(), rnd.begin(), rnd.end());

    detail::Best best;
    for (std::size_t c = 0; c < candidates.size(); ++c)
        best.offer(projection_ratio(space, candidates[c], A, false), c, A);

    ConstantEstimate est;
    est.kind = ConstantKind::ProjectionNorm;
    est.dim = dim;
    est.value = std::max(best.value, 0.0);
    if (best.candidate < candidates.size()) est.witness_x = candidates[best.candidate];
    est.witness_A = A;
    est.candidates = candidates.size();
    est.mode = detail::join_modes(false, oracle, opts.random_samples > 0);
    est.mode = est.mode.empty() ? "coordinates" : "coordinates+" + est.mode;
    if (oracle && space.polyhedral && space.alpha == 1.0) {
        est.exact = true;
        est.upper_bound = est.value;
        est.upper_bound_note = "maximum over all extreme points of a polyhedral ball";
    } else if (space.unconditional) {
        est.upper_bound = 1.0;
        est.upper_bound_note = "1-unconditional canonical basis";
        est.exact = approx_leq(1.0, est.value) || set_intersection(A, IndexSet::interval(1, dim)).empty();
    }
    return est;
}

/**
 * Lower bound on C_{q,t} (or C_{sq,t} when `suppression`) restricted to
 * cardinalities in gap and [1, dim]: the largest ||P_A x||/||x|| (resp.
 * ||x - P_A x||/||x||) over candidates x and every enumerated t-greedy A.
 * Candidate order is structured, extreme points, random; the reduction keeps
 * the earliest candidate among equal maxima, so results do not depend on the
 * thread count.
 */
inline ConstantEstimate estimate_quasi_greedy_constant(const SpaceDescriptor& space, const GapSequence& gap, double t,
                                                       Index dim, const SearchOptions& opts = {},
                                                       bool suppression = false)
{
    detail::check_weakness(t);
    const auto sizes = gap.terms_up_to(dim);
    if (dim < 1 || sizes.empty()) throw std::invalid_argument("no admissible cardinality");

    std::vector<CoeffVector> candidates;
    if (opts.structured) candidates = structured_witnesses(dim);
    const bool oracle = space.has_extreme_points(dim);
    if (oracle) {
        auto pts = space.extreme_points(dim);
        candidates.insert(candidates.end(), pts.begin(), pts.end());
    }
    auto rnd = random_vectors(dim, opts.random_samples, opts.seed);
    candidates.insert(candidates.end(), rnd.begin(), rnd.end());
    if (candidates.empty()) throw std::invalid_argument("no search strategy");

    const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(candidates.size(), 64));
    std::vector<detail::Best> partial(chunks);
    parallel_chunks(candidates.size(), chunks, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        auto& best = partial[chunk];
        for (std::size_t c = begin; c < end; ++c) {
            const auto& x = candidates[c];
            const double nx = space(x);
            if (nx == 0.0) continue;
            for (Index n : sizes) {
                auto sets = enumerate_t_greedy_sets(x, n, t, opts.enumeration_cap, opts.tie_tolerance);
                best.truncated = best.truncated || sets.overflow;
                for (const auto& sel : sets.sets) {
                    double num = suppression ? space(complement_projection(x, sel.indices))
                                             : space(projection(x, sel.indices));
                    best.offer(num / nx, c, sel.indices);
                }
                if (static_cast<std::size_t>(n) >= x.size()) break;
            }
        }
    });
    detail::Best best;
    for (const auto& p : partial) best.merge(p);

    ConstantEstimate est;
    est.kind = suppression ? ConstantKind::SuppressionQuasiGreedy : ConstantKind::QuasiGreedy;
    est.t = t;
    est.dim = dim;
    est.value = std::max(best.value, 0.0);
    if (best.candidate < candidates.size()) {
        est.witness_x = candidates[best.candidate];
        est.witness_A = best.A;
    }
    est.candidates = candidates.size();
    est.enumeration_truncated = best.truncated;
    est.mode = detail::join_modes(opts.structured, oracle, opts.random_samples > 0);
    if (space.unconditional) {
        est.upper_bound = 1.0;
        est.upper_bound_note = "1-unconditional canonical basis";
        est.exact = approx_leq(1.0, est.value);
    }
    return est;
}

/// Lower bound on the basis constant K = sup_m ||S_m|| over prefixes of [1, dim].
inline ConstantEstimate estimate_basis_constant(const SpaceDescriptor& space, Index dim, const SearchOptions& opts = {})
{
    ConstantEstimate best;
    best.kind = ConstantKind::Basis;
    best.exact = true;
    for (Index m = 1; m <= dim; ++m) {
        auto est = estimate_operator_norm(space, IndexSet::interval(1, m), dim, opts);
        best.exact = best.exact && est.exact;
        if (est.value > best.value) {
            best.value = est.value;
            best.witness_x = est.witness_x;
            best.witness_A = est.witness_A;
            best.mode = est.mode;
        }
        best.candidates += est.candidates;
    }
    best.dim = dim;
    if (best.exact) best.upper_bound = best.value;
    return best;
}

/// Lower bound on K_s = sup_A ||P_A|| over all nonempty A in [1, dim] (dim <= 16).
inline ConstantEstimate estimate_unconditional_constant(const SpaceDescriptor& space, Index dim,
                                                        const SearchOptions& opts = {})
{
    if (dim < 1 || dim > 16) throw std::invalid_argument("estimate_unconditional_constant: dim must be in [1, 16]");
    ConstantEstimate best;
    best.kind = ConstantKind::SuppressionUnconditional;
    best.exact = true;
    for (std::uint32_t mask = 1; mask < (1u << dim); ++mask) {
        std::vector<Index> idx;
        for (Index i = 0; i < dim; ++i)
            if (mask >> i & 1u) idx.push_back(i + 1);
        auto est = estimate_operator_norm(space, IndexSet(idx), dim, opts);
        best.exact = best.exact && est.exact;
        if (est.value > best.value) {
            best.value = est.value;
            best.witness_x = est.witness_x;
            best.witness_A = est.witness_A;
            best.mode = est.mode;
        }
        best.candidates += est.candidates;
    }
    best.dim = dim;
    if (best.exact) best.upper_bound = best.value;
    return best;
}

/**
 * Bound on C_{q,t} from C_{q,s}: C_{q,s} t / (s - C_{q,s}(s - t)), valid
 * when s(1 - 1/C_{q,s}) < t < s. Returns nullopt outside that window.
 */
inline std::optional<double> transfer_bound_t_from_s(double C_qs, double s, double t)
{
    if (!(t > 0.0 && t < s && s <= 1.0)) throw std::invalid_argument("transfer bound needs 0 < t < s <= 1");
    if (!(C_qs >= 1.0)) throw std::invalid_argument("transfer bound needs C_qs >= 1");
    if (!(s * (1.0 - 1.0 / C_qs) < t)) return std::nullopt;
    return C_qs * t / (s - C_qs * (s - t));
}

struct SuppressionOneReport {
    /// The space measured as 1-n-suppression-quasi-greedy at this dim.
    bool precheck_passed = false;
    ConstantEstimate precheck;
    double M = 0.0;  ///< n_1 alpha_1 alpha_2
    double max_ratio = 0.0;
    CoeffVector worst_x;
    IndexSet worst_A;
    std::size_t trials = 0;
    std::size_t violations = 0;

    double bound() const { return M + 1.0; }
    double margin() const { return bound() - max_ratio; }
};

/**
 * Empirical check that a 1-n-suppression-quasi-greedy basis is
 * (M+1)-suppression-quasi-greedy, M = n_1 alpha_1 alpha_2: `trials` random
 * greedy sets of every size must satisfy ||x - P_A x|| <= (M+1)||x||. The
 * pre-check estimates C_sq,1 with `opts`; its failure is reported, not thrown.
 */
inline SuppressionOneReport check_suppression_one_implies_qg(const SpaceDescriptor& space, const GapSequence& gap,
                                                             Index dim, const SearchOptions& opts, std::size_t trials)
{
    SuppressionOneReport report;
    report.precheck = estimate_quasi_greedy_constant(space, gap, 1.0, std::min<Index>(dim, 8), opts, true);
    report.precheck_passed = approx_leq(report.precheck.value, 1.0);
    report.M = static_cast<double>(gap.first()) * space.alpha1 * space.alpha2;

    Rng rng(opts.seed ^ 0x5eed5eedULL);
    for (std::size_t trial = 0; trial < trials; ++trial) {
        auto x = random_vector(dim, rng);
        std::uniform_int_distribution<std::size_t> card_dist(1, x.size());
        auto A = random_t_greedy_set(x, card_dist(rng), 1.0, rng);
        double r = projection_ratio(space, x, *A, true);
        ++report.trials;
        if (!approx_leq(r, report.bound())) ++report.violations;
        if (r > report.max_ratio) {
            report.max_ratio = r;
            report.worst_x = x;
            report.worst_A = *A;
        }
    }
    return report;
}

/// Partition of a t-greedy set A with n_k <= |A| < l n_k into consecutive blocks.
struct GapPartition {
    Index n_k = 0;
    /// A_1 < A_2 < ... < A_j, |A_1| <= n_k, |A_i| = n_k for i >= 2.
    std::vector<IndexSet> blocks;
    /// B_i = {min A_i, ..., max A_i}; B_1 spans A_1 together with its completion.
    std::vector<IndexSet> intervals;
    /// First n_k - |A_1| elements of A \ A_1 (empty when |A_1| = n_k).
    IndexSet completion;

    bool first_block_short() const { return !completion.empty(); }
    /// The n_k-element set used for the first block: A_1, or A_1 with its completion.
    IndexSet first_full_block() const { return set_union(blocks.front(), completion); }
};

/**
 * Splits A into ceil(|A|/n_k) index-ordered blocks, the short one first, where
 * n_k is the largest term <= |A|. Throws if |A| < n_1 or |A| >= l n_k.
 */
inline GapPartition bounded_gap_partition(const IndexSet& A, const GapSequence& gap, Index l)
{
    const auto card = static_cast<Index>(A.size());
    auto k = gap.floor_index(card);
    if (!k) throw std::invalid_argument("bounded_gap_partition: |A| < n_1");
    GapPartition part;
    part.n_k = gap[*k];
    if (card >= l * part.n_k) throw std::invalid_argument("cardinality window violated: |A| >= l n_k");
    const Index j = (card + part.n_k - 1) / part.n_k;
    const Index first = card - (j - 1) * part.n_k;
    const auto& a = A.values();
    auto slice = [&](Index from, Index count) {
        return IndexSet(std::vector<Index>(a.begin() + from, a.begin() + from + count));
    };
    part.blocks.push_back(slice(0, first));
    for (Index i = 1; i < j; ++i) part.blocks.push_back(slice(first + (i - 1) * part.n_k, part.n_k));
    if (first < part.n_k) part.completion = slice(first, part.n_k - first);
    for (std::size_t i = 0; i < part.blocks.size(); ++i) {
        const IndexSet& b = i == 0 ? part.first_full_block() : part.blocks[i];
        part.intervals.push_back(IndexSet::interval(b.min(), b.max()));
    }
    return part;
}

/// ||P_{A_i} P_{B_i} x|| / ||P_{B_i} x|| for every n_k-element block: each is a C_{q,t} witness.
inline std::vector<double> partition_witness_ratios(const SpaceDescriptor& space, const CoeffVector& x,
                                                    const GapPartition& part)
{
    std::vector<double> out;
    for (std::size_t i = 0; i < part.blocks.size(); ++i) {
        IndexSet block = i == 0 ? part.first_full_block() : part.blocks[i];
        auto local = projection(x, part.intervals[i]);
        double den = space(local);
        if (den > 0.0) out.push_back(space(projection(local, block)) / den);
    }
    return out;
}

struct BoundedGapReport {
    enum class Branch { SmallCardinality, Partition };
    Branch branch = Branch::Partition;
    GapPartition partition;
    std::vector<BoundCheck> checks;
    double projection_norm = 0.0;  ///< ||P_A x||
    double theorem_bound = 0.0;    ///< 2 C K (l - 1 + K) ||x||, or n_1 alpha_1 alpha_2 ||x||
    double global_bound = 0.0;     ///< max{n_1 alpha_1 alpha_2, 2 C K (l - 1 + K)} ||x||

    bool holds(double rel_tol = kRelTol) const { return all_hold(checks, rel_tol); }
};

inline double global_quasi_greedy_bound(const SpaceDescriptor& space, const GapSequence& gap, double C, double K,
                                        Index l)
{
    return std::max(static_cast<double>(gap.first()) * space.alpha1 * space.alpha2,
                    2.0 * C * K * (static_cast<double>(l) - 1.0 + K));
}

/**
 * Evaluates ||P_A x|| <= 2 C K (l - 1 + K) ||x|| for a t-greedy A with
 * n_k <= |A| < l n_k by running the block decomposition and recording every
 * intermediate inequality:
 *   fori>12   ||P_{A_i} x|| <= C ||P_{B_i} x|| <= 2 C K ||x||
 *   A12       ||P_{A_1} x|| <= K ||P_{A_1 u A~_1} x||
 *   B12       ||P_{A_1 u A~_1} x|| <= C ||P_{B_1} x||
 * Sets with |A| < n_1 fall to ||P_A x|| <= n_1 alpha_1 alpha_2 ||x||.
 */
inline BoundedGapReport bounded_gap_projection_bound(const SpaceDescriptor& space, double C_qt, double K, Index l,
                                                     const CoeffVector& x, const IndexSet& A, double t,
                                                     const GapSequence& gap)
{
    if (space.alpha != 1.0) throw std::invalid_argument("bounded_gap_projection_bound: Banach spaces only");
    if (l < 2) throw std::invalid_argument("bounded_gap_projection_bound: l must be > 1");
    if (!is_t_greedy(x, A, t)) throw std::invalid_argument("bounded_gap_projection_bound: A is not t-greedy for x");

    BoundedGapReport rep;
    const double nx = space(x);
    auto norm_of = [&](const IndexSet& S) { return space(projection(x, S)); };
    rep.projection_norm = norm_of(A);
    rep.global_bound = global_quasi_greedy_bound(space, gap, C_qt, K, l) * nx;

    if (static_cast<Index>(A.size()) < gap.first()) {
        rep.branch = BoundedGapReport::Branch::SmallCardinality;
        double coeff_sum = 0.0;
        double max_coeff = 0.0;
        for (Index i : A) {
            coeff_sum += std::abs(x[i]);
            max_coeff = std::max(max_coeff, std::abs(x[i]));
        }
        rep.theorem_bound = static_cast<double>(gap.first()) * space.alpha1 * space.alpha2 * nx;
        rep.checks.push_back({"coefficient_bound", max_coeff, space.alpha2 * nx});
        rep.checks.push_back({"projection_by_coefficients", rep.projection_norm, space.alpha1 * coeff_sum});
        rep.checks.push_back({"smallcardinal0", rep.projection_norm, rep.theorem_bound});
        rep.checks.push_back({"global", rep.projection_norm, rep.global_bound});
        return rep;
    }

    rep.partition = bounded_gap_partition(A, gap, l);
    const auto& part = rep.partition;
    const std::size_t j = part.blocks.size();
    double block_sum = 0.0;
    for (std::size_t i = 0; i < j; ++i) {
        const std::string tag = std::to_string(i + 1);
        const IndexSet& full = i == 0 ? part.first_full_block() : part.blocks[i];
        const IndexSet& interval = part.intervals[i];
        auto local = projection(x, interval);
        double min_in = std::numeric_limits<double>::infinity();
        for (Index a : full) min_in = std::min(min_in, std::abs(x[a]));
        double max_out = 0.0;
        for (const auto& [idx, v] : local)
            if (!full.contains(idx)) max_out = std::max(max_out, std::abs(v));
        rep.checks.push_back({"tgreedy_in_interval_" + tag, t * max_out, min_in});

        const double full_norm = norm_of(full);
        const double interval_norm = space(local);
        const double block_norm = norm_of(part.blocks[i]);
        block_sum += block_norm;
        rep.checks.push_back({"interval_" + tag, interval_norm, 2.0 * K * nx});
        if (i == 0 && part.first_block_short()) {
            rep.checks.push_back({"A12", block_norm, K * full_norm});
            rep.checks.push_back({"B12", full_norm, C_qt * interval_norm});
            rep.checks.push_back({"block_1", block_norm, 2.0 * C_qt * K * K * nx});
        } else {
            rep.checks.push_back({"greedy_in_interval_" + tag, block_norm, C_qt * interval_norm});
            rep.checks.push_back({"fori>12_" + tag, block_norm, 2.0 * C_qt * K * nx});
        }
    }
    const double first_factor = part.first_block_short() ? K * K : K;
    rep.checks.push_back({"triangle", rep.projection_norm, block_sum});
    rep.checks.push_back({"assembled", block_sum,
                          (2.0 * C_qt * K * static_cast<double>(j - 1) + 2.0 * C_qt * first_factor) * nx});
    rep.theorem_bound = 2.0 * C_qt * K * (static_cast<double>(l) - 1.0 + K) * nx;
    rep.checks.push_back({"largercardinals2", rep.projection_norm, rep.theorem_bound});
    rep.checks.push_back({"global", rep.projection_norm, rep.global_bound});
    return rep;
}

}  // namespace greedylab
