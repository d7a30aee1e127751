#pragma once
/**
 * @file space.hpp
 * @brief Space descriptors: a (quasi-)norm together with the basis data the
 * greedy-type bounds are stated in terms of.
 *
 *   alpha   quasi-triangle constant, ||x + y|| <= alpha (||x|| + ||y||)
 *   alpha1  sup_i ||e_i||
 *   alpha2  sup_i ||e_i^*||
 *   c_param sup_i (1 + ||e_i||)(1 + ||e_i^*||)
 *   K       Schauder (basis) constant, when known
 *
 * Catalogue keys: "summing", "lp:<p>", "sup", "weighted-lp:<p>:<weight-file>".
 */

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "greedylab/coeff_vector.hpp"
#include "greedylab/norms.hpp"

namespace greedylab {

using NormFunction = std::function<double(const CoeffVector&)>;
using ExtremePointGenerator = std::function<std::vector<CoeffVector>(Index dim)>;

struct SpaceDescriptor {
    std::string key;
    NormFunction norm;
    double alpha = 1.0;
    double alpha1 = 1.0;
    double alpha2 = 1.0;
    std::optional<double> schauder_constant;
    double c_param = 4.0;

    /// Extreme points of the unit ball of span{e_1..e_dim}; unset when no oracle exists.
    ExtremePointGenerator extreme_points;
    /// Largest dim the generator accepts.
    Index extreme_points_max_dim = 0;
    /// True when the generated points are all the extreme points of a polytope,
    /// so maxima of convex functions over the ball are attained among them.
    bool polyhedral = false;
    /// Canonical basis is 1-unconditional (all projections have norm <= 1).
    bool unconditional = false;

    double operator()(const CoeffVector& x) const { return norm(x); }

    bool has_extreme_points(Index dim) const
    {
        return static_cast<bool>(extreme_points) && dim <= extreme_points_max_dim;
    }
};

namespace detail {

inline double parse_number(std::string_view text)
{
    auto slash = text.find('/');
    if (slash != std::string_view::npos)
        return parse_number(text.substr(0, slash)) / parse_number(text.substr(slash + 1));
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw std::invalid_argument("cannot parse number '" + std::string(text) + "'");
    return value;
}

// All 2^dim sign patterns as dense vectors of +-1.
inline std::vector<std::vector<double>> sign_patterns(Index dim)
{
    std::vector<std::vector<double>> out;
    const std::uint64_t count = std::uint64_t{1} << dim;
    out.reserve(count);
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        std::vector<double> s(static_cast<std::size_t>(dim));
        for (Index i = 0; i < dim; ++i) s[static_cast<std::size_t>(i)] = (mask >> i) & 1 ? -1.0 : 1.0;
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace detail

/// Extreme points of {x : |x_1 + ... + x_n| <= 1, n <= dim}: images of the
/// prefix-sum cube vertices, x_i = s_i - s_{i-1} with s in {-1, 1}^dim.
inline std::vector<CoeffVector> summing_extreme_points(Index dim)
{
    if (dim < 0 || dim > 20) throw std::invalid_argument("summing_extreme_points: dim must be in [0, 20]");
    std::vector<CoeffVector> out;
    for (const auto& s : detail::sign_patterns(dim)) {
        std::vector<double> x(s.size());
        double prev = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            x[i] = s[i] - prev;
            prev = s[i];
        }
        out.push_back(CoeffVector::from_dense(x));
    }
    return out;
}

inline std::vector<CoeffVector> l1_extreme_points(Index dim)
{
    std::vector<CoeffVector> out;
    for (Index i = 1; i <= dim; ++i) {
        out.push_back(CoeffVector::from_entries({{i, 1.0}}));
        out.push_back(CoeffVector::from_entries({{i, -1.0}}));
    }
    return out;
}

inline std::vector<CoeffVector> sup_extreme_points(Index dim)
{
    if (dim < 0 || dim > 20) throw std::invalid_argument("sup_extreme_points: dim must be in [0, 20]");
    std::vector<CoeffVector> out;
    for (const auto& s : detail::sign_patterns(dim)) out.push_back(CoeffVector::from_dense(s));
    return out;
}

/// Normalized vectors with entries in {-1, 0, 1}. For a strictly convex l_p
/// ball every unit vector is extreme, so this is a finite family of extreme points.
inline std::vector<CoeffVector> ternary_unit_vectors(Index dim, const NormFunction& norm)
{
    std::vector<CoeffVector> out;
    std::uint64_t count = 1;
    for (Index i = 0; i < dim; ++i) count *= 3;
    for (std::uint64_t code = 1; code < count; ++code) {
        std::vector<double> x(static_cast<std::size_t>(dim));
        std::uint64_t c = code;
        for (Index i = 0; i < dim; ++i, c /= 3) x[static_cast<std::size_t>(i)] = static_cast<double>(c % 3) - 1.0;
        auto v = CoeffVector::from_dense(x);
        out.push_back((1.0 / norm(v)) * v);
    }
    return out;
}

/// The summing-norm space. ||e_i|| = 1 and ||e_i^*|| = 2 for i >= 2 (1 when dim = 1).
inline SpaceDescriptor summing_space(Index dim = 20)
{
    SpaceDescriptor s;
    s.key = "summing";
    s.norm = [](const CoeffVector& x) { return summing_norm(x); };
    s.alpha = 1.0;
    s.alpha1 = 1.0;
    s.alpha2 = dim >= 2 ? 2.0 : 1.0;
    s.schauder_constant = 1.0;
    s.c_param = (1.0 + s.alpha1) * (1.0 + s.alpha2);
    s.extreme_points = summing_extreme_points;
    s.extreme_points_max_dim = 20;
    s.polyhedral = true;
    return s;
}

inline SpaceDescriptor lp_space(double p)
{
    if (!(p > 0.0)) throw std::invalid_argument("lp_space: p must be positive");
    SpaceDescriptor s;
    s.key = "lp:" + std::to_string(p);
    s.norm = [p](const CoeffVector& x) { return lp_norm(x, p); };
    s.alpha = p < 1.0 ? std::pow(2.0, 1.0 / p - 1.0) : 1.0;
    s.schauder_constant = 1.0;
    s.c_param = 4.0;
    s.unconditional = true;
    if (p == 1.0) {
        s.extreme_points = l1_extreme_points;
        s.extreme_points_max_dim = 1 << 20;
        s.polyhedral = true;
    } else if (p > 1.0) {
        auto norm = s.norm;
        s.extreme_points = [norm](Index dim) { return ternary_unit_vectors(dim, norm); };
        s.extreme_points_max_dim = 8;
    }
    return s;
}

inline SpaceDescriptor sup_space()
{
    SpaceDescriptor s;
    s.key = "sup";
    s.norm = [](const CoeffVector& x) { return sup_norm(x); };
    s.schauder_constant = 1.0;
    s.c_param = 4.0;
    s.unconditional = true;
    s.extreme_points = sup_extreme_points;
    s.extreme_points_max_dim = 20;
    s.polyhedral = true;
    return s;
}

/// ||e_i|| = w_i^(1/p), ||e_i^*|| = w_i^(-1/p).
inline SpaceDescriptor weighted_lp_space(double p, std::vector<double> weights)
{
    if (!(p > 0.0)) throw std::invalid_argument("weighted_lp_space: p must be positive");
    if (weights.empty()) throw std::invalid_argument("weighted_lp_space: no weights");
    for (double w : weights)
        if (!(w > 0.0)) throw std::invalid_argument("weighted_lp_space: weights must be positive");
    SpaceDescriptor s;
    s.key = "weighted-lp:" + std::to_string(p);
    auto shared = std::make_shared<const std::vector<double>>(std::move(weights));
    s.norm = [p, shared](const CoeffVector& x) { return weighted_lp_norm(x, p, *shared); };
    s.alpha = p < 1.0 ? std::pow(2.0, 1.0 / p - 1.0) : 1.0;
    s.alpha1 = 0.0;
    s.alpha2 = 0.0;
    s.c_param = 0.0;
    for (double w : *shared) {
        double e = std::pow(w, 1.0 / p);
        s.alpha1 = std::max(s.alpha1, e);
        s.alpha2 = std::max(s.alpha2, 1.0 / e);
        s.c_param = std::max(s.c_param, (1.0 + e) * (1.0 + 1.0 / e));
    }
    s.schauder_constant = 1.0;
    s.unconditional = true;
    return s;
}

inline std::vector<double> read_weight_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open weight file '" + path + "'");
    std::vector<double> w;
    double v = 0.0;
    while (in >> v) w.push_back(v);
    if (!in.eof()) throw std::invalid_argument("malformed weight file '" + path + "'");
    return w;
}

/// Resolve a catalogue key. `dim` fixes the dimension-dependent constants.
inline SpaceDescriptor make_space(std::string_view key, Index dim = 20)
{
    if (key == "summing") return summing_space(dim);
    if (key == "sup") return sup_space();
    if (key.starts_with("lp:")) {
        auto s = lp_space(detail::parse_number(key.substr(3)));
        s.key = std::string(key);
        return s;
    }
    if (key.starts_with("weighted-lp:")) {
        auto rest = key.substr(12);
        auto colon = rest.find(':');
        if (colon == std::string_view::npos)
            throw std::invalid_argument("weighted-lp key needs '<p>:<weight-file>'");
        auto s = weighted_lp_space(detail::parse_number(rest.substr(0, colon)),
                                   read_weight_file(std::string(rest.substr(colon + 1))));
        s.key = std::string(key);
        return s;
    }
    throw std::invalid_argument("unknown space key '" + std::string(key) + "'");
}

}  // namespace greedylab
