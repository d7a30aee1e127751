#pragma once
// Strictly increasing sequences n = (n_k) of admissible greedy-set cardinalities.

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "greedylab/coeff_vector.hpp"

namespace greedylab {

class GapSequence {
public:
    using Rule = std::function<Index(Index k)>;

    /// Explicit finite prefix n_1 < n_2 < ... .
    static GapSequence from_values(std::vector<Index> values, std::optional<Index> bound_l = {})
    {
        GapSequence g;
        g.values_ = std::move(values);
        g.bound_l_ = bound_l;
        g.validate(g.values_);
        return g;
    }

    /// Closed form k -> n_k (k >= 1). Checked lazily as terms are generated.
    static GapSequence from_rule(Rule rule, std::optional<Index> bound_l = {})
    {
        GapSequence g;
        g.rule_ = std::move(rule);
        g.bound_l_ = bound_l;
        g.validate(g.terms_up_to(64));
        return g;
    }

    static GapSequence naturals()
    {
        return from_rule([](Index k) { return k; }, 2);
    }

    /// n_k = first * ratio^(k-1).
    static GapSequence geometric(Index first, Index ratio)
    {
        if (first < 1 || ratio < 2) throw std::invalid_argument("geometric gap sequence needs first >= 1, ratio >= 2");
        return from_rule(
            [first, ratio](Index k) {
                Index v = first;
                for (Index j = 1; j < k; ++j) v *= ratio;
                return v;
            },
            ratio);
    }

    std::optional<Index> bound_l() const { return bound_l_; }
    bool is_rule() const { return static_cast<bool>(rule_); }

    /// n_k, 1-based. Explicit prefixes throw past their end.
    Index operator[](Index k) const
    {
        if (k < 1) throw std::out_of_range("GapSequence: k must be >= 1");
        if (rule_) return rule_(k);
        if (static_cast<std::size_t>(k) > values_.size()) throw std::out_of_range("GapSequence: past stored prefix");
        return values_[static_cast<std::size_t>(k - 1)];
    }

    Index first() const { return (*this)[1]; }

    /// All n_k <= limit, in increasing order.
    std::vector<Index> terms_up_to(Index limit) const
    {
        std::vector<Index> out;
        if (rule_) {
            for (Index k = 1;; ++k) {
                Index v = rule_(k);
                if (!out.empty() && v <= out.back())
                    throw std::invalid_argument("GapSequence: rule is not strictly increasing");
                if (v > limit) break;
                out.push_back(v);
            }
        } else {
            for (Index v : values_)
                if (v <= limit) out.push_back(v);
        }
        return out;
    }

    bool contains(Index n) const
    {
        for (Index v : terms_up_to(n))
            if (v == n) return true;
        return false;
    }

    /// Largest k with n_k <= card, if any.
    std::optional<Index> floor_index(Index card) const
    {
        auto terms = terms_up_to(card);
        if (terms.empty()) return std::nullopt;
        return static_cast<Index>(terms.size());
    }

    /// Checks n_{i+1} <= l n_i over terms up to `limit`.
    bool has_l_bounded_gaps(Index l, Index limit) const
    {
        auto terms = terms_up_to(limit);
        for (std::size_t i = 0; i + 1 < terms.size(); ++i)
            if (terms[i + 1] > l * terms[i]) return false;
        return true;
    }

private:
    void validate(const std::vector<Index>& terms) const
    {
        if (bound_l_ && *bound_l_ < 2) throw std::invalid_argument("GapSequence: l must be > 1");
        for (std::size_t i = 0; i < terms.size(); ++i) {
            if (terms[i] < 1) throw std::invalid_argument("GapSequence: terms must be positive");
            if (i > 0 && terms[i] <= terms[i - 1])
                throw std::invalid_argument("GapSequence: terms must be strictly increasing");
            if (i > 0 && bound_l_ && terms[i] > *bound_l_ * terms[i - 1])
                throw std::invalid_argument("GapSequence: gap n_{i+1}/n_i exceeds l = " + std::to_string(*bound_l_));
        }
    }

    std::vector<Index> values_;
    Rule rule_;
    std::optional<Index> bound_l_;
};

}  // namespace greedylab
