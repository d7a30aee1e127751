#pragma once
/**
 * @file experiments.hpp
 * @brief Config-driven experiments and the computations behind them.
 *
 * A config file is INI-style text: a top-level `experiment = <name>` line and
 * one [section] per experiment with plain `key = value` pairs. Lines starting
 * with '#' or ';' are comments. Every value an experiment reads, including
 * the ones left at their defaults, is echoed into its outputs.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "greedylab/constants.hpp"
#include "greedylab/counterexample.hpp"
#include "greedylab/gap_sequence.hpp"
#include "greedylab/perturb.hpp"
#include "greedylab/report.hpp"
#include "greedylab/space.hpp"

namespace greedylab {

/// Bad config, unknown experiment or unwritable output: CLI exit code 1.
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

inline const std::vector<std::string>& experiment_names()
{
    static const std::vector<std::string> names{"divergence",     "constants",       "transfer",
                                                "bounded-gaps",   "suppression-one", "perturb-audit"};
    return names;
}

// ---------------------------------------------------------------- parsing

inline std::vector<std::string> split_list(const std::string& text, const char* seps = ",;")
{
    std::vector<std::string> parts;
    boost::split(parts, text, boost::is_any_of(seps));
    std::vector<std::string> out;
    for (auto& p : parts) {
        boost::trim(p);
        if (!p.empty()) out.push_back(p);
    }
    return out;
}

/// "2..12", "2,4,8" or "6".
inline std::vector<Index> parse_index_list(const std::string& text)
{
    std::vector<Index> out;
    for (const auto& part : split_list(text, ",")) {
        auto dots = part.find("..");
        if (dots != std::string::npos) {
            Index a = std::stoll(part.substr(0, dots));
            Index b = std::stoll(part.substr(dots + 2));
            if (a > b) throw std::invalid_argument("empty range '" + part + "'");
            for (Index v = a; v <= b; ++v) out.push_back(v);
        } else {
            std::size_t pos = 0;
            out.push_back(std::stoll(part, &pos));
            if (pos != part.size()) throw std::invalid_argument("cannot parse integer '" + part + "'");
        }
    }
    return out;
}

inline std::vector<double> parse_number_list(const std::string& text)
{
    std::vector<double> out;
    for (const auto& part : split_list(text, ",")) out.push_back(detail::parse_number(part));
    return out;
}

/**
 * Gap sequence keys: "naturals", "geometric:<first>:<ratio>",
 * "shifted:<n1>" for n_k = n1 + k - 1, "values:<a> <b> ..." with an optional
 * ":l=<l>" suffix.
 */
inline GapSequence parse_gap(const std::string& key)
{
    auto parts = split_list(key, ":");
    if (parts.empty()) throw std::invalid_argument("empty gap sequence key");
    if (parts[0] == "naturals" && parts.size() == 1) return GapSequence::naturals();
    if (parts[0] == "geometric" && parts.size() == 3)
        return GapSequence::geometric(std::stoll(parts[1]), std::stoll(parts[2]));
    if (parts[0] == "shifted" && parts.size() == 2) {
        const Index n1 = std::stoll(parts[1]);
        if (n1 < 1) throw std::invalid_argument("shifted gap sequence needs n1 >= 1");
        return GapSequence::from_rule([n1](Index k) { return n1 + k - 1; }, 2);
    }
    if (parts[0] == "values" && (parts.size() == 2 || parts.size() == 3)) {
        std::vector<Index> values;
        for (const auto& v : split_list(parts[1], " ")) values.push_back(std::stoll(v));
        std::optional<Index> l;
        if (parts.size() == 3) {
            if (parts[2].rfind("l=", 0) != 0) throw std::invalid_argument("expected l=<l> in '" + key + "'");
            l = std::stoll(parts[2].substr(2));
        }
        return GapSequence::from_values(std::move(values), l);
    }
    throw std::invalid_argument("unknown gap sequence '" + key + "'");
}

// ---------------------------------------------------------------- config

class ExperimentConfig {
public:
    static ExperimentConfig from_string(const std::string& text)
    {
        std::istringstream in(strip_hash_comments(text));
        ExperimentConfig cfg;
        try {
            boost::property_tree::ini_parser::read_ini(in, cfg.tree_);
        } catch (const boost::property_tree::ini_parser_error& e) {
            throw UsageError(std::string("malformed config: ") + e.what());
        }
        cfg.experiment_ = cfg.tree_.get<std::string>("experiment", "");
        if (cfg.experiment_.empty()) throw UsageError("config has no 'experiment = <name>' line");
        const auto& names = experiment_names();
        if (std::find(names.begin(), names.end(), cfg.experiment_) == names.end())
            throw UsageError("unknown experiment '" + cfg.experiment_ + "'");
        for (const auto& [key, node] : cfg.tree_) {
            if (node.empty()) {
                if (key != "experiment" && key != "seed") throw UsageError("unknown top-level key '" + key + "'");
            } else if (key != cfg.experiment_) {
                throw UsageError("section [" + key + "] does not match experiment '" + cfg.experiment_ + "'");
            }
        }
        return cfg;
    }

    static ExperimentConfig from_file(const std::filesystem::path& path)
    {
        std::ifstream in(path);
        if (!in) throw UsageError("cannot read config '" + path.string() + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        return from_string(buf.str());
    }

    /// Config that selects `name` with every parameter at its default.
    static ExperimentConfig defaults(const std::string& name) { return from_string("experiment = " + name + "\n"); }

    const std::string& experiment() const { return experiment_; }
    std::optional<std::uint64_t> seed() const
    {
        auto s = tree_.get_optional<std::string>("seed");
        if (!s) return std::nullopt;
        try {
            return std::stoull(*s);
        } catch (const std::exception&) {
            throw UsageError("seed must be an unsigned integer");
        }
    }

    /// Raw string value of key in the experiment section, recorded as used.
    std::string get(const std::string& key, const std::string& fallback) const
    {
        std::string value = fallback;
        if (auto sec = tree_.get_child_optional(boost::property_tree::ptree::path_type(experiment_, '\0')))
            if (auto v = sec->get_optional<std::string>(boost::property_tree::ptree::path_type(key, '\0'))) value = *v;
        boost::trim(value);
        effective_[key] = value;
        return value;
    }

    template <class T>
    T get_as(const std::string& key, T fallback) const
    {
        std::ostringstream os;
        if constexpr (std::is_same_v<T, bool>)
            os << (fallback ? "true" : "false");
        else if constexpr (std::is_floating_point_v<T>)
            os << format_number(fallback);
        else
            os << fallback;
        const std::string text = get(key, os.str());
        try {
            if constexpr (std::is_same_v<T, bool>) {
                if (text == "true" || text == "1" || text == "yes") return true;
                if (text == "false" || text == "0" || text == "no") return false;
                throw std::invalid_argument("not a boolean");
            } else if constexpr (std::is_floating_point_v<T>) {
                return static_cast<T>(detail::parse_number(text));
            } else {
                std::size_t pos = 0;
                long long v = std::stoll(text, &pos);
                if (pos != text.size()) throw std::invalid_argument("trailing characters");
                return static_cast<T>(v);
            }
        } catch (const std::exception&) {
            throw UsageError("cannot parse value '" + text + "' for key '" + key + "'");
        }
    }

    /// Override an effective value (quick-mode caps), keeping the echo honest.
    void record(const std::string& key, const std::string& value) const { effective_[key] = value; }

    /// Keys present in the section but never read.
    std::vector<std::string> unused_keys() const
    {
        std::vector<std::string> out;
        if (auto sec = tree_.get_child_optional(boost::property_tree::ptree::path_type(experiment_, '\0')))
            for (const auto& [key, node] : *sec)
                if (!effective_.count(key)) out.push_back(key);
        return out;
    }

    const std::map<std::string, std::string>& effective() const { return effective_; }

private:
    static std::string strip_hash_comments(const std::string& text)
    {
        std::istringstream in(text);
        std::string line;
        std::string out;
        while (std::getline(in, line)) {
            std::string t = boost::trim_copy(line);
            if (!t.empty() && t[0] == '#') continue;
            out += line + '\n';
        }
        return out;
    }

    boost::property_tree::ptree tree_;
    std::string experiment_;
    mutable std::map<std::string, std::string> effective_;
};

struct RunOptions {
    std::filesystem::path out_dir = ".";
    std::uint64_t seed = 1;
    bool quick = false;
};

struct ExperimentResult {
    std::string name;
    std::size_t violations = 0;
    std::vector<std::string> files;
    std::vector<std::string> summary;
};

// ---------------------------------------------------------------- cores

struct ConstantsSweep {
    struct Row {
        double t = 1.0;
        Index dim = 0;
        std::optional<Index> l;
        ConstantEstimate estimate;
        std::vector<BoundCheck> checks;
    };
    std::vector<Row> rows;

    std::size_t violations() const
    {
        std::size_t v = 0;
        for (const auto& r : rows) v += all_hold(r.checks) ? 0 : 1;
        return v;
    }
};

/// Witness recomputation and, when known, the analytic upper bound, as checks.
inline std::vector<BoundCheck> estimate_checks(const SpaceDescriptor& space, const ConstantEstimate& est)
{
    std::vector<BoundCheck> checks;
    checks.push_back({"witness_recompute", std::abs(est.recompute(space) - est.value),
                      1e-9 * std::max(1.0, std::abs(est.value))});
    if (!est.witness_A.empty() || !est.witness_x.empty())
        checks.push_back({"witness_t_greedy", is_t_greedy(est.witness_x, est.witness_A, est.t) ? 0.0 : 1.0, 0.0});
    if (est.upper_bound) checks.push_back({"upper_bound", est.value, *est.upper_bound});
    return checks;
}

inline ConstantsSweep constants_sweep(const std::string& space_key, const GapSequence& gap,
                                      const std::vector<double>& ts, const std::vector<Index>& dims,
                                      const SearchOptions& opts, bool suppression)
{
    ConstantsSweep sweep;
    const Index max_dim = dims.empty() ? 1 : *std::max_element(dims.begin(), dims.end());
    const auto space = make_space(space_key, std::max<Index>(max_dim, 20));
    for (double t : ts)
        for (Index dim : dims) {
            ConstantsSweep::Row row;
            row.t = t;
            row.dim = dim;
            row.l = gap.bound_l();
            row.estimate = estimate_quasi_greedy_constant(space, gap, t, dim, opts, suppression);
            row.checks = estimate_checks(space, row.estimate);
            sweep.rows.push_back(std::move(row));
        }
    return sweep;
}

struct TransferRow {
    std::string space;
    Index dim = 0;
    double s = 1.0;
    double t = 1.0;
    double C_s = 1.0;
    double C_t = 1.0;
    double window_low = 0.0;
    std::optional<double> bound;

    std::optional<double> margin() const
    {
        if (!bound) return std::nullopt;
        return *bound - C_t;
    }
    bool violated() const { return bound && !approx_leq(C_t, *bound); }
};

/// Grid k * step for k = 1..round(1/step), snapped to the grid to avoid drift.
inline std::vector<double> weakness_grid(double step)
{
    if (!(step > 0.0 && step <= 1.0)) throw std::invalid_argument("grid step must lie in (0, 1]");
    const auto n = static_cast<int>(std::llround(1.0 / step));
    std::vector<double> out;
    for (int k = 1; k <= n; ++k) out.push_back(k == n ? 1.0 : static_cast<double>(k) / n);
    return out;
}

/**
 * Measured C_{q,t} for every t on the grid and every pair s > t, compared
 * against the bound C_{q,s} t / (s - C_{q,s}(s - t)) wherever it applies.
 */
inline std::vector<TransferRow> transfer_sweep(const std::string& space_key, const GapSequence& gap,
                                               const std::vector<Index>& dims, double step, const SearchOptions& opts)
{
    const auto grid = weakness_grid(step);
    std::vector<TransferRow> rows;
    for (Index dim : dims) {
        const auto space = make_space(space_key, std::max<Index>(dim, 20));
        std::vector<ConstantEstimate> est(grid.size());
        std::vector<double> C(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            est[i] = estimate_quasi_greedy_constant(space, gap, grid[i], dim, opts);
            C[i] = std::max(1.0, est[i].value);
        }
        // A t-greedy set A of x is s-greedy for P_A x + (t/s)(x - P_A x), so every
        // witness found at a smaller weakness also bounds C_{q,s} from below.
        for (std::size_t si = 0; si < grid.size(); ++si)
            for (std::size_t ti = 0; ti < si; ++ti) {
                const auto& w = est[ti];
                if (w.witness_x.empty()) continue;
                const auto P = projection(w.witness_x, w.witness_A);
                const auto y = w.witness_x * (grid[ti] / grid[si]) + P * (1.0 - grid[ti] / grid[si]);
                if (is_t_greedy(y, w.witness_A, grid[si]))
                    C[si] = std::max(C[si], projection_ratio(space, y, w.witness_A, false));
            }
        for (std::size_t si = 0; si < grid.size(); ++si)
            for (std::size_t ti = 0; ti < si; ++ti) {
                TransferRow row;
                row.space = space_key;
                row.dim = dim;
                row.s = grid[si];
                row.t = grid[ti];
                row.C_s = C[si];
                row.C_t = C[ti];
                row.window_low = row.s * (1.0 - 1.0 / row.C_s);
                row.bound = transfer_bound_t_from_s(row.C_s, row.s, row.t);
                rows.push_back(row);
            }
    }
    return rows;
}

struct BoundedGapTrial {
    std::size_t trial = 0;
    std::string gap;
    Index dim = 0;
    double t = 1.0;
    Index card = 0;
    Index l = 2;
    double C_used = 1.0;
    BoundedGapReport report;
    /// Same x with a 1-greedy set of independent size, checked against the global bound.
    Index full_card = 0;
    double full_C_used = 1.0;
    BoundedGapReport full_report;

    bool violated() const { return !report.holds() || !full_report.holds(); }
};

/**
 * A lower bound on C_{q,t} read off the instance itself: the ratios
 * ||P_{A_i} P_{B_i} x|| / ||P_{B_i} x|| of the n_k-element blocks of the
 * partition (each block is t-greedy for P_{B_i} x), and ||P_A x|| / ||x|| when
 * |A| is a term of the sequence. Never below 1.
 */
inline double instance_constant(const SpaceDescriptor& space, const CoeffVector& x, const IndexSet& A, double t,
                                const GapSequence& gap, Index l)
{
    double C = 1.0;
    if (static_cast<Index>(A.size()) < gap.first()) return C;
    auto part = bounded_gap_partition(A, gap, l);
    for (double r : partition_witness_ratios(space, x, part)) C = std::max(C, r);
    if (gap.contains(static_cast<Index>(A.size())) && is_t_greedy(x, A, t))
        C = std::max(C, projection_ratio(space, x, A, false));
    return C;
}

inline std::vector<BoundedGapTrial> bounded_gap_trials(const std::string& space_key,
                                                       const std::vector<std::string>& gap_keys, double K,
                                                       std::size_t trials, Index max_dim, double t_min,
                                                       std::uint64_t seed)
{
    const auto space = make_space(space_key, std::max<Index>(max_dim, 20));
    std::vector<GapSequence> gaps;
    for (const auto& g : gap_keys) {
        gaps.push_back(parse_gap(g));
        if (!gaps.back().bound_l()) throw std::invalid_argument("gap sequence '" + g + "' has no declared l");
    }
    if (gaps.empty()) throw std::invalid_argument("no gap sequences");
    std::vector<BoundedGapTrial> out(trials);
    parallel_chunks(trials, std::min<std::size_t>(std::max<std::size_t>(trials, 1), 64),
                    [&](std::size_t, std::size_t b, std::size_t e) {
                        for (std::size_t i = b; i < e; ++i) {
                            Rng rng(trial_seed(seed, i));
                            auto& tr = out[i];
                            tr.trial = i;
                            const std::size_t g = std::uniform_int_distribution<std::size_t>(0, gaps.size() - 1)(rng);
                            const auto& gap = gaps[g];
                            tr.gap = gap_keys[g];
                            tr.l = *gap.bound_l();
                            tr.dim = std::uniform_int_distribution<Index>(2, max_dim)(rng);
                            auto x = random_vector(tr.dim, rng);
                            tr.t = std::uniform_real_distribution<double>(t_min, 1.0)(rng);
                            std::uniform_int_distribution<std::size_t> card(1, x.size());
                            auto A = *random_t_greedy_set(x, card(rng), tr.t, rng);
                            tr.card = static_cast<Index>(A.size());
                            tr.C_used = instance_constant(space, x, A, tr.t, gap, tr.l);
                            tr.report = bounded_gap_projection_bound(space, tr.C_used, K, tr.l, x, A, tr.t, gap);

                            auto full = one_greedy_set(x, static_cast<Index>(card(rng)), 1.0);
                            tr.full_card = static_cast<Index>(full.indices.size());
                            tr.full_C_used = instance_constant(space, x, full.indices, 1.0, gap, tr.l);
                            tr.full_report =
                                bounded_gap_projection_bound(space, tr.full_C_used, K, tr.l, x, full.indices, 1.0, gap);
                        }
                    });
    return out;
}

struct SuppressionOneRow {
    std::string space;
    Index n1 = 0;
    SuppressionOneReport report;

    /// Violations count only where the space passed the pre-check.
    bool violated() const { return report.precheck_passed && report.violations > 0; }
};

inline std::vector<SuppressionOneRow> suppression_one_sweep(const std::vector<std::string>& spaces,
                                                            const std::vector<Index>& n1s, Index dim,
                                                            std::size_t trials, const SearchOptions& opts)
{
    std::vector<SuppressionOneRow> rows;
    for (const auto& key : spaces) {
        const auto space = make_space(key, std::max<Index>(dim, 20));
        for (Index n1 : n1s) {
            SuppressionOneRow row;
            row.space = key;
            row.n1 = n1;
            row.report = check_suppression_one_implies_qg(space, parse_gap("shifted:" + std::to_string(n1)), dim,
                                                          opts, trials);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

struct PerturbAudit {
    std::vector<SuiteReport> suites;
    std::vector<EquivalenceAudit> audits;

    std::size_t violations() const
    {
        std::size_t v = 0;
        for (const auto& s : suites) v += s.failures;
        for (const auto& a : audits) v += a.holds() ? 0 : 1;
        return v;
    }
};

inline PerturbAudit perturb_audit(const std::vector<std::string>& spaces, std::size_t trials, Index dim,
                                  std::size_t audit_budget, const GapSequence& gap, double t, std::uint64_t seed)
{
    PerturbAudit out;
    for (const auto& key : spaces) {
        const auto space = make_space(key, std::max<Index>(dim, 20));
        out.suites.push_back(perturbation_suite(space, trials, seed, dim));
        out.suites.push_back(padding_suite(space, trials, seed, dim));
        out.suites.push_back(crude_bound_suite(space, trials, seed, dim));
        out.audits.push_back(equivalence_audit(space, gap, t, std::min<Index>(dim, 6), audit_budget, seed));
    }
    return out;
}

// ---------------------------------------------------------------- output

namespace detail {

inline Json config_json(const ExperimentConfig& cfg, const RunOptions& opts)
{
    Json j{{"experiment", cfg.experiment()}, {"seed", opts.seed}, {"quick", opts.quick}};
    Json params = Json::object();
    for (const auto& [k, v] : cfg.effective()) params[k] = v;
    j["parameters"] = params;
    return j;
}

inline void echo_config(CsvTable& table, const ExperimentConfig& cfg, const RunOptions& opts)
{
    table.comment("experiment = " + cfg.experiment());
    table.comment("seed = " + std::to_string(opts.seed));
    table.comment(std::string("quick = ") + (opts.quick ? "true" : "false"));
    for (const auto& [k, v] : cfg.effective()) table.comment(k + " = " + v);
}

inline void write_file(const std::filesystem::path& path, const std::string& content, ExperimentResult& result)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw UsageError("cannot write '" + path.string() + "'");
    result.files.push_back(path.filename().string());
}

inline void write_outputs(const std::filesystem::path& dir, const std::string& stem, const CsvTable& table,
                          const Json& json, ExperimentResult& result)
{
    std::ostringstream csv;
    table.write(csv);
    write_file(dir / (stem + ".csv"), csv.str(), result);
    write_file(dir / (stem + ".json"), json.dump(2) + "\n", result);
}

inline void check_unused(const ExperimentConfig& cfg)
{
    auto unused = cfg.unused_keys();
    if (!unused.empty()) throw UsageError("unknown key '" + unused.front() + "' in [" + cfg.experiment() + "]");
}

template <class T>
T cap_quick(const ExperimentConfig& cfg, const RunOptions& opts, const std::string& key, T value, T cap)
{
    if (opts.quick && value > cap) {
        cfg.record(key, std::to_string(cap) + " (quick cap)");
        return cap;
    }
    return value;
}

inline std::vector<Index> cap_dims(const ExperimentConfig& cfg, const RunOptions& opts, const std::string& key,
                                   std::vector<Index> dims, Index cap)
{
    if (!opts.quick) return dims;
    std::vector<Index> kept;
    for (Index d : dims)
        if (d <= cap) kept.push_back(d);
    if (kept.size() != dims.size()) {
        std::string echo;
        for (Index d : kept) echo += (echo.empty() ? "" : ",") + std::to_string(d);
        cfg.record(key, echo + " (quick cap)");
    }
    return kept;
}

}  // namespace detail

inline ExperimentResult run_divergence(const ExperimentConfig& cfg, const RunOptions& opts)
{
    int K = cfg.get_as<int>("K", 6);
    const double t = cfg.get_as<double>("t", 1.0);
    const bool adversary = cfg.get_as<bool>("adversary", true);
    const bool exhaustive = cfg.get_as<bool>("exhaustive", false);
    detail::check_unused(cfg);
    K = detail::cap_quick(cfg, opts, "K", K, 4);

    const auto rep = divergence_experiment(K, t, adversary, std::nullopt, exhaustive);
    ExperimentResult result{"divergence"};
    auto table = divergence_table(rep);
    detail::echo_config(table, cfg, opts);
    Json json{{"config", detail::config_json(cfg, opts)}, {"rows", to_json(rep)}, {"violations", rep.violations()}};
    detail::write_outputs(opts.out_dir, "divergence", table, json, result);
    result.violations = rep.violations();
    const auto& last = rep.rows.back();
    result.summary.push_back("rows=" + std::to_string(rep.rows.size()) + " violations=" +
                             std::to_string(rep.violations()) + " min_norm(m=" + std::to_string(last.m) +
                             ")=" + format_number(last.min_norm));
    return result;
}

inline ExperimentResult run_constants(const ExperimentConfig& cfg, const RunOptions& opts)
{
    const auto space_key = cfg.get("space", "summing");
    const auto gap_key = cfg.get("gap", "naturals");
    const auto ts = parse_number_list(cfg.get("t", "1"));
    auto dims = parse_index_list(cfg.get("dims", "2..12"));
    SearchOptions so;
    so.random_samples = cfg.get_as<std::size_t>("samples", 256);
    so.enumeration_cap = cfg.get_as<std::size_t>("enumeration_cap", 4096);
    so.seed = opts.seed;
    const bool suppression = cfg.get_as<bool>("suppression", false);
    detail::check_unused(cfg);
    dims = detail::cap_dims(cfg, opts, "dims", dims, 6);

    const auto sweep = constants_sweep(space_key, parse_gap(gap_key), ts, dims, so, suppression);
    ExperimentResult result{"constants"};
    CsvTable table({"t", "dim", "l", "kind", "value", "exact", "upper_bound", "margin", "mode", "candidates",
                    "enumeration_truncated", "witness_x", "witness_A"});
    detail::echo_config(table, cfg, opts);
    Json estimates = Json::array();
    for (const auto& r : sweep.rows) {
        const auto& e = r.estimate;
        table.add({format_number(r.t), std::to_string(r.dim), r.l ? std::to_string(*r.l) : "", to_string(e.kind),
                   format_number(e.value), e.exact ? "true" : "false", format_optional(e.upper_bound),
                   e.upper_bound ? format_number(*e.upper_bound - e.value) : "", e.mode, std::to_string(e.candidates),
                   e.enumeration_truncated ? "true" : "false", to_json(e.witness_x).dump(),
                   to_json(e.witness_A).dump()});
        estimates.push_back(to_json(e, r.checks));
    }
    Json json{{"config", detail::config_json(cfg, opts)}, {"estimates", estimates}};
    detail::write_outputs(opts.out_dir, "constants", table, json, result);
    result.violations = sweep.violations();
    result.summary.push_back("estimates=" + std::to_string(sweep.rows.size()) +
                             " violations=" + std::to_string(result.violations));
    return result;
}

inline ExperimentResult run_transfer(const ExperimentConfig& cfg, const RunOptions& opts)
{
    const auto spaces = split_list(cfg.get("spaces", "lp:1;sup;lp:2;summing"), ";");
    const auto gap_key = cfg.get("gap", "naturals");
    auto dims = parse_index_list(cfg.get("dims", "2..6"));
    const double step = cfg.get_as<double>("step", 0.05);
    SearchOptions so;
    so.random_samples = cfg.get_as<std::size_t>("samples", 64);
    so.enumeration_cap = cfg.get_as<std::size_t>("enumeration_cap", 4096);
    so.seed = opts.seed;
    detail::check_unused(cfg);
    dims = detail::cap_dims(cfg, opts, "dims", dims, 6);

    ExperimentResult result{"transfer"};
    CsvTable table({"space", "dim", "s", "t", "C_qs", "C_qt", "window_low", "applicable", "bound", "margin"});
    detail::echo_config(table, cfg, opts);
    Json rows = Json::array();
    std::size_t applicable = 0;
    for (const auto& key : spaces) {
        for (const auto& r : transfer_sweep(key, parse_gap(gap_key), dims, step, so)) {
            table.add({r.space, std::to_string(r.dim), format_number(r.s), format_number(r.t), format_number(r.C_s),
                       format_number(r.C_t), format_number(r.window_low), r.bound ? "true" : "false",
                       format_optional(r.bound), format_optional(r.margin())});
            if (r.bound) {
                ++applicable;
                rows.push_back(Json{{"space", r.space}, {"dim", r.dim}, {"s", r.s}, {"t", r.t},
                                    {"name", "transfer"}, {"lhs", r.C_t}, {"rhs", *r.bound}, {"margin", *r.margin()}});
            }
            if (r.violated()) ++result.violations;
        }
    }
    Json json{{"config", detail::config_json(cfg, opts)}, {"bound_checks", rows}, {"violations", result.violations}};
    detail::write_outputs(opts.out_dir, "transfer", table, json, result);
    result.summary.push_back("pairs=" + std::to_string(table.size()) + " applicable=" + std::to_string(applicable) +
                             " violations=" + std::to_string(result.violations));
    return result;
}

inline std::string failed_check_names(const BoundedGapReport& rep)
{
    std::string out;
    for (const auto& c : rep.checks)
        if (!c.holds()) out += (out.empty() ? "" : ";") + c.name;
    return out;
}

inline ExperimentResult run_bounded_gaps(const ExperimentConfig& cfg, const RunOptions& opts)
{
    const auto space_key = cfg.get("space", "summing");
    const auto gaps = split_list(cfg.get("gaps", "naturals;geometric:1:2;geometric:2:3;values:2 3 5 8 13 21 34 55:l=2"), ";");
    const double K = cfg.get_as<double>("K", 1.0);
    auto trials = cfg.get_as<std::size_t>("trials", 10000);
    auto max_dim = cfg.get_as<Index>("max_dim", 64);
    const double t_min = cfg.get_as<double>("t_min", 0.1);
    detail::check_unused(cfg);
    max_dim = detail::cap_quick<Index>(cfg, opts, "max_dim", max_dim, 6);

    const auto results = bounded_gap_trials(space_key, gaps, K, trials, max_dim, t_min, opts.seed);
    ExperimentResult result{"bounded-gaps"};
    CsvTable table({"trial", "gap", "dim", "t", "card", "l", "n_k", "blocks", "C_used", "K", "lhs", "rhs", "margin",
                    "full_card", "full_C_used", "full_lhs", "global_rhs", "global_margin", "failed_checks"});
    detail::echo_config(table, cfg, opts);
    double worst = std::numeric_limits<double>::infinity();
    double worst_global = std::numeric_limits<double>::infinity();
    for (const auto& tr : results) {
        const auto& r = tr.report;
        const auto& f = tr.full_report;
        table.add({std::to_string(tr.trial), tr.gap, std::to_string(tr.dim), format_number(tr.t),
                   std::to_string(tr.card), std::to_string(tr.l), std::to_string(r.partition.n_k),
                   std::to_string(r.partition.blocks.size()), format_number(tr.C_used), format_number(K),
                   format_number(r.projection_norm), format_number(r.theorem_bound),
                   format_number(r.theorem_bound - r.projection_norm), std::to_string(tr.full_card),
                   format_number(tr.full_C_used), format_number(f.projection_norm), format_number(f.global_bound),
                   format_number(f.global_bound - f.projection_norm),
                   failed_check_names(r) + (failed_check_names(f).empty() ? "" : "|" + failed_check_names(f))});
        worst = std::min(worst, r.theorem_bound - r.projection_norm);
        worst_global = std::min(worst_global, f.global_bound - f.projection_norm);
        if (tr.violated()) ++result.violations;
    }
    Json json{{"config", detail::config_json(cfg, opts)},
              {"trials", results.size()},
              {"violations", result.violations},
              {"worst_margin", json_number(worst)},
              {"worst_global_margin", json_number(worst_global)}};
    detail::write_outputs(opts.out_dir, "bounded_gaps", table, json, result);
    result.summary.push_back("trials=" + std::to_string(results.size()) +
                             " violations=" + std::to_string(result.violations));
    return result;
}

inline ExperimentResult run_suppression_one(const ExperimentConfig& cfg, const RunOptions& opts)
{
    const auto spaces = split_list(cfg.get("spaces", "lp:1;sup;lp:2;lp:3/2;summing"), ";");
    const auto n1s = parse_index_list(cfg.get("n1", "2,3,5"));
    auto trials = cfg.get_as<std::size_t>("trials", 10000);
    auto dim = cfg.get_as<Index>("dim", 8);
    SearchOptions so;
    so.random_samples = cfg.get_as<std::size_t>("precheck_samples", 256);
    so.seed = opts.seed;
    detail::check_unused(cfg);
    dim = detail::cap_quick<Index>(cfg, opts, "dim", dim, 6);

    const auto rows = suppression_one_sweep(spaces, n1s, dim, trials, so);
    ExperimentResult result{"suppression-one"};
    CsvTable table({"space", "n1", "precheck_value", "precheck_passed", "M", "bound", "max_ratio", "margin", "trials",
                    "violations"});
    detail::echo_config(table, cfg, opts);
    Json checks = Json::array();
    for (const auto& r : rows) {
        const auto& rep = r.report;
        table.add({r.space, std::to_string(r.n1), format_number(rep.precheck.value),
                   rep.precheck_passed ? "true" : "false", format_number(rep.M), format_number(rep.bound()),
                   format_number(rep.max_ratio), format_number(rep.margin()), std::to_string(rep.trials),
                   std::to_string(rep.violations)});
        checks.push_back(Json{{"space", r.space},
                              {"n1", r.n1},
                              {"precheck", to_json(rep.precheck)},
                              {"precheck_passed", rep.precheck_passed},
                              {"name", "suppression_bound"},
                              {"lhs", json_number(rep.max_ratio)},
                              {"rhs", json_number(rep.bound())},
                              {"margin", json_number(rep.margin())},
                              {"worst_x", to_json(rep.worst_x)},
                              {"worst_A", to_json(rep.worst_A)},
                              {"trials", rep.trials},
                              {"violations", rep.violations}});
        if (r.violated()) ++result.violations;
    }
    Json json{{"config", detail::config_json(cfg, opts)}, {"bound_checks", checks}, {"violations", result.violations}};
    detail::write_outputs(opts.out_dir, "suppression_one", table, json, result);
    result.summary.push_back("cases=" + std::to_string(rows.size()) + " violations=" + std::to_string(result.violations));
    return result;
}

inline ExperimentResult run_perturb_audit(const ExperimentConfig& cfg, const RunOptions& opts)
{
    const auto spaces = split_list(cfg.get("spaces", "lp:1/2;lp:2/3;lp:1"), ";");
    const auto trials = cfg.get_as<std::size_t>("trials", 1000);
    const auto dim = cfg.get_as<Index>("dim", 8);
    auto budget = cfg.get_as<std::size_t>("audit_budget", 50);
    const auto gap_key = cfg.get("gap", "naturals");
    const double t = cfg.get_as<double>("t", 1.0);
    detail::check_unused(cfg);
    budget = detail::cap_quick<std::size_t>(cfg, opts, "audit_budget", budget, 20);

    const auto audit = perturb_audit(spaces, trials, dim, budget, parse_gap(gap_key), t, opts.seed);
    ExperimentResult result{"perturb-audit"};
    CsvTable table({"space", "lemma", "trials", "failures", "worst_margin", "seed"});
    detail::echo_config(table, cfg, opts);
    Json suites = Json::array();
    for (const auto& s : audit.suites) {
        table.add({s.space, s.lemma, std::to_string(s.trials), std::to_string(s.failures),
                   format_number(s.worst_margin), std::to_string(s.seed)});
        suites.push_back(to_json(s));
    }
    Json audits = Json::array();
    for (const auto& a : audit.audits) {
        table.add({a.space, "equivalence-audit", std::to_string(a.samples), std::to_string(a.holds() ? 0 : 1),
                   a.checks.empty() ? "" : format_number(a.checks.front().margin()), std::to_string(opts.seed)});
        audits.push_back(Json{{"space", a.space},
                              {"samples", a.samples},
                              {"ratio_finite", json_number(a.ratio_finite)},
                              {"ratio_all", json_number(a.ratio_all)},
                              {"factor", json_number(a.factor)},
                              {"depth_note", a.depth_note},
                              {"bound_checks", to_json(a.checks)}});
    }
    Json json{{"config", detail::config_json(cfg, opts)}, {"reports", suites}, {"audits", audits}};
    detail::write_outputs(opts.out_dir, "perturb_audit", table, json, result);
    result.violations = audit.violations();
    result.summary.push_back("suites=" + std::to_string(audit.suites.size()) +
                             " violations=" + std::to_string(result.violations));
    return result;
}

/// Runs the configured experiment; UsageError for config or output problems.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg, RunOptions opts)
{
    std::error_code ec;
    std::filesystem::create_directories(opts.out_dir, ec);
    if (ec) throw UsageError("cannot create output directory '" + opts.out_dir.string() + "': " + ec.message());
    try {
        const auto& name = cfg.experiment();
        if (name == "divergence") return run_divergence(cfg, opts);
        if (name == "constants") return run_constants(cfg, opts);
        if (name == "transfer") return run_transfer(cfg, opts);
        if (name == "bounded-gaps") return run_bounded_gaps(cfg, opts);
        if (name == "suppression-one") return run_suppression_one(cfg, opts);
        if (name == "perturb-audit") return run_perturb_audit(cfg, opts);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    throw UsageError("unknown experiment '" + cfg.experiment() + "'");
}

}  // namespace greedylab
