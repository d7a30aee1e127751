#pragma once
/**
 * @file sampling.hpp
 * @brief Candidate vectors for constant searches.
 *
 * Structured witnesses come first: sign-cancellation patterns (alternating
 * signs, spikes followed by compensating plateaus) are where greedy sums of
 * conditional bases blow up, and plain random sampling rarely lands on them.
 */

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "greedylab/coeff_vector.hpp"

namespace greedylab {

using Rng = std::mt19937_64;

/// Largest dim for which all {-1,0,1}^dim patterns join the structured family.
inline constexpr Index kTernaryWitnessMaxDim = 6;

inline std::vector<CoeffVector> structured_witnesses(Index dim)
{
    std::vector<CoeffVector> out;
    for (Index i = 1; i <= dim; ++i) out.push_back(unit_vector(i));
    for (Index len = 2; len <= dim; ++len) {
        std::vector<double> alt(static_cast<std::size_t>(len));
        for (Index i = 0; i < len; ++i) alt[static_cast<std::size_t>(i)] = i % 2 == 0 ? 1.0 : -1.0;
        out.push_back(CoeffVector::from_dense(alt));
        out.push_back(CoeffVector::from_dense(std::vector<double>(static_cast<std::size_t>(len), 1.0)));
    }
    // One spike followed by a plateau that cancels it.
    for (Index len = 1; len < dim; ++len) {
        std::vector<double> v(static_cast<std::size_t>(len + 1), -1.0 / static_cast<double>(len));
        v[0] = 1.0;
        out.push_back(CoeffVector::from_dense(v));
    }
    // Miniature of the divergent summing-basis element: spikes 1/sqrt(k),
    // each followed by a block of length 2^k summing to -1/sqrt(k).
    {
        std::vector<double> v;
        for (Index k = 1; static_cast<Index>(v.size()) < dim; ++k) {
            double spike = 1.0 / std::sqrt(static_cast<double>(k));
            v.push_back(spike);
            Index room = dim - static_cast<Index>(v.size());
            Index len = std::min<Index>(Index{1} << k, room);
            for (Index j = 0; j < len; ++j) v.push_back(-spike / static_cast<double>(len));
        }
        out.push_back(CoeffVector::from_dense(v));
    }
    if (dim <= kTernaryWitnessMaxDim) {
        std::uint64_t count = 1;
        for (Index i = 0; i < dim; ++i) count *= 3;
        for (std::uint64_t code = 1; code < count; ++code) {
            std::vector<double> v(static_cast<std::size_t>(dim));
            std::uint64_t c = code;
            for (Index i = 0; i < dim; ++i, c /= 3) v[static_cast<std::size_t>(i)] = static_cast<double>(c % 3) - 1.0;
            out.push_back(CoeffVector::from_dense(v));
        }
    }
    return out;
}

/// One random vector supported in [1, dim], drawn from a mixture of shapes.
inline CoeffVector random_vector(Index dim, Rng& rng)
{
    std::uniform_int_distribution<int> shape_dist(0, 4);
    std::uniform_int_distribution<Index> len_dist(1, std::max<Index>(dim, 1));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> v(static_cast<std::size_t>(dim), 0.0);
    const Index len = len_dist(rng);
    switch (shape_dist(rng)) {
    case 0:  // gaussian on a prefix
        for (Index i = 0; i < len; ++i) v[static_cast<std::size_t>(i)] = gauss(rng);
        break;
    case 1: {  // small integers: many ties
        std::uniform_int_distribution<int> small(-2, 2);
        for (Index i = 0; i < dim; ++i) v[static_cast<std::size_t>(i)] = small(rng);
        break;
    }
    case 2:  // alternating with jitter
        for (Index i = 0; i < len; ++i)
            v[static_cast<std::size_t>(i)] = (i % 2 == 0 ? 1.0 : -1.0) * (1.0 + 0.1 * unit(rng));
        break;
    case 3: {  // random spikes followed by cancelling plateaus
        Index i = 0;
        while (i < dim) {
            double spike = 0.2 + unit(rng);
            v[static_cast<std::size_t>(i++)] = spike;
            Index plateau = std::min<Index>(dim - i, len_dist(rng) % 4 + 1);
            for (Index j = 0; j < plateau; ++j) v[static_cast<std::size_t>(i++)] = -spike / static_cast<double>(plateau);
        }
        break;
    }
    default:  // heavy tails, sparse
        for (Index i = 0; i < dim; ++i)
            if (unit(rng) < 0.6) v[static_cast<std::size_t>(i)] = gauss(rng) / (0.05 + unit(rng));
        break;
    }
    auto x = CoeffVector::from_dense(v);
    if (x.empty()) x.set(1, 1.0);
    return x;
}

inline std::vector<CoeffVector> random_vectors(Index dim, std::size_t count, std::uint64_t seed)
{
    Rng rng(seed);
    std::vector<CoeffVector> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) out.push_back(random_vector(dim, rng));
    return out;
}

/**
 * Stand-in for an infinitely supported vector: a random head on [1, dim]
 * followed by a geometrically decaying tail out to depth_factor * dim.
 */
inline CoeffVector deep_vector(Index dim, Index depth_factor, double decay, Rng& rng)
{
    auto x = random_vector(dim, rng);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double head = 0.0;
    for (const auto& e : x) head = std::max(head, std::abs(e.second));
    double level = head * decay;
    for (Index i = dim + 1; i <= depth_factor * dim; ++i, level *= decay)
        x.set(i, (unit(rng) < 0.5 ? -1.0 : 1.0) * level * (0.5 + 0.5 * unit(rng)));
    return x;
}

}  // namespace greedylab
