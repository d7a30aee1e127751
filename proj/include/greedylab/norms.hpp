#pragma once
// Catalogue of (quasi-)norms on finitely supported coefficient sequences.

#include <cmath>
#include <span>
#include <stdexcept>

#include "greedylab/coeff_vector.hpp"

namespace greedylab {

/// ||x|| = sup_n |x_1 + ... + x_n|. Single pass over the support.
inline double summing_norm(const CoeffVector& x)
{
    double partial = 0.0;
    double best = 0.0;
    for (const auto& [i, v] : x) {
        partial += v;
        best = std::max(best, std::abs(partial));
    }
    return best;
}

/// (sum |x_i|^p)^(1/p); a quasi-norm with constant 2^(1/p - 1) when p < 1.
inline double lp_norm(const CoeffVector& x, double p)
{
    if (!(p > 0.0)) throw std::invalid_argument("lp_norm: p must be positive");
    if (x.empty()) return 0.0;
    // Scale by the largest modulus to keep |x_i|^p in range.
    double scale = 0.0;
    for (const auto& e : x) scale = std::max(scale, std::abs(e.second));
    if (p == 1.0) {
        double s = 0.0;
        for (const auto& e : x) s += std::abs(e.second);
        return s;
    }
    double s = 0.0;
    for (const auto& e : x) s += std::pow(std::abs(e.second) / scale, p);
    return scale * std::pow(s, 1.0 / p);
}

inline double sup_norm(const CoeffVector& x)
{
    double best = 0.0;
    for (const auto& e : x) best = std::max(best, std::abs(e.second));
    return best;
}

/// (sum w_i |x_i|^p)^(1/p). Indices past the end of `weights` reuse the last weight.
inline double weighted_lp_norm(const CoeffVector& x, double p, std::span<const double> weights)
{
    if (!(p > 0.0)) throw std::invalid_argument("weighted_lp_norm: p must be positive");
    if (weights.empty()) throw std::invalid_argument("weighted_lp_norm: no weights");
    double s = 0.0;
    for (const auto& [i, v] : x) {
        auto k = static_cast<std::size_t>(i - 1);
        double w = k < weights.size() ? weights[k] : weights.back();
        s += w * std::pow(std::abs(v), p);
    }
    return std::pow(s, 1.0 / p);
}

}  // namespace greedylab
