#pragma once
/**
 * @file report.hpp
 * @brief JSON and CSV serialization of vectors, selections, estimates and checks.
 *
 * Doubles are written with 17 significant digits so a re-run with the same
 * inputs reproduces the files byte for byte.
 */

#include <cmath>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <json.hpp>

#include "greedylab/coeff_vector.hpp"
#include "greedylab/constants.hpp"
#include "greedylab/counterexample.hpp"
#include "greedylab/greedy.hpp"
#include "greedylab/perturb.hpp"

namespace greedylab {

using Json = nlohmann::ordered_json;

inline std::string format_number(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return fmt::format("{:.17g}", v);
}

inline std::string format_optional(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

/// Finite doubles as numbers, non-finite ones as strings ("inf", "-inf", "nan").
inline Json json_number(double v)
{
    if (std::isfinite(v)) return v;
    return format_number(v);
}

inline Json to_json(const CoeffVector& x)
{
    Json arr = Json::array();
    for (const auto& [i, v] : x) arr.push_back(Json::array({i, json_number(v)}));
    return arr;
}

inline CoeffVector coeff_vector_from_json(const Json& j)
{
    std::vector<std::pair<Index, double>> entries;
    for (const auto& e : j) entries.emplace_back(e.at(0).get<Index>(), e.at(1).get<double>());
    return CoeffVector::from_entries(std::move(entries));
}

inline Json to_json(const IndexSet& A)
{
    Json arr = Json::array();
    for (Index i : A) arr.push_back(i);
    return arr;
}

inline Json to_json(const GreedySelection& sel)
{
    return Json{{"indices", to_json(sel.indices)}, {"t", json_number(sel.t)}, {"cardinality", sel.cardinality}};
}

inline Json to_json(const BoundCheck& c)
{
    return Json{{"name", c.name}, {"lhs", json_number(c.lhs)}, {"rhs", json_number(c.rhs)},
                {"margin", json_number(c.margin())}};
}

inline Json to_json(const std::vector<BoundCheck>& checks)
{
    Json arr = Json::array();
    for (const auto& c : checks) arr.push_back(to_json(c));
    return arr;
}

inline Json to_json(const ConstantEstimate& est, const std::vector<BoundCheck>& checks = {})
{
    Json j{{"kind", to_string(est.kind)},
           {"value", json_number(est.value)},
           {"exact", est.exact},
           {"witness", Json{{"x", to_json(est.witness_x)}, {"A", to_json(est.witness_A)}}},
           {"bound_checks", to_json(checks)},
           {"t", json_number(est.t)},
           {"dim", est.dim},
           {"upper_bound", est.upper_bound ? json_number(*est.upper_bound) : Json(nullptr)},
           {"upper_bound_note", est.upper_bound_note},
           {"mode", est.mode},
           {"candidates", est.candidates},
           {"enumeration_truncated", est.enumeration_truncated}};
    return j;
}

inline Json to_json(const SuiteReport& r)
{
    return Json{{"lemma", r.lemma},
                {"space", r.space},
                {"trials", r.trials},
                {"failures", r.failures},
                {"worst_margin", json_number(r.worst_margin)},
                {"seed", r.seed}};
}

/// CSV with a header row; '.' decimals, '\n' line ends, leading '#' comment lines.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void comment(const std::string& line) { comments_.push_back(line); }

    void add(std::vector<std::string> row)
    {
        if (row.size() != header_.size()) throw std::logic_error("csv row width does not match header");
        rows_.push_back(std::move(row));
    }

    std::size_t size() const { return rows_.size(); }

    void write(std::ostream& os) const
    {
        for (const auto& c : comments_) os << "# " << c << '\n';
        write_row(os, header_);
        for (const auto& r : rows_) write_row(os, r);
    }

private:
    static std::string escape(const std::string& cell)
    {
        if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
        std::string out = "\"";
        for (char ch : cell) {
            if (ch == '"') out += '"';
            out += ch;
        }
        return out + '"';
    }

    static void write_row(std::ostream& os, const std::vector<std::string>& row)
    {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << escape(row[i]);
        os << '\n';
    }

    std::vector<std::string> header_;
    std::vector<std::string> comments_;
    std::vector<std::vector<std::string>> rows_;
};

inline CsvTable divergence_table(const DivergenceReport& rep)
{
    CsvTable table({"m", "t", "K", "min_norm", "phi", "lower_bound", "margin", "greedy_set_family"});
    for (const auto& r : rep.rows)
        table.add({std::to_string(r.m), format_number(r.t), std::to_string(r.K), format_number(r.min_norm),
                   std::to_string(r.phi), format_optional(r.lower_bound), format_optional(r.margin()), r.family});
    return table;
}

inline Json to_json(const DivergenceReport& rep)
{
    Json rows = Json::array();
    for (const auto& r : rep.rows)
        rows.push_back(Json{{"m", r.m},
                            {"t", json_number(r.t)},
                            {"K", r.K},
                            {"min_norm", json_number(r.min_norm)},
                            {"phi", r.phi},
                            {"lower_bound", r.lower_bound ? json_number(*r.lower_bound) : Json(nullptr)},
                            {"margin", r.margin() ? json_number(*r.margin()) : Json(nullptr)},
                            {"greedy_set_family", r.family},
                            {"candidates", r.candidates},
                            {"bound_violations", r.bound_violations}});
    return rows;
}

}  // namespace greedylab
