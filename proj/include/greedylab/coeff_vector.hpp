#pragma once
/**
 * @file coeff_vector.hpp
 * @brief Finite-support coefficient sequences x = sum_i x_i e_i and index sets.
 *
 * Indices are positive integers. A CoeffVector stores only nonzero
 * coefficients, sorted by index, so its key set is exactly supp(x).
 */

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace greedylab {

using Index = std::int64_t;

/// Sorted set of positive indices, stored flat.
class IndexSet {
public:
    IndexSet() = default;
    IndexSet(std::initializer_list<Index> values) : IndexSet(std::vector<Index>(values)) {}
    explicit IndexSet(std::vector<Index> values) : values_(std::move(values))
    {
        std::sort(values_.begin(), values_.end());
        values_.erase(std::unique(values_.begin(), values_.end()), values_.end());
        if (!values_.empty() && values_.front() < 1)
            throw std::invalid_argument("IndexSet: indices must be positive");
    }

    /// {first, ..., last}; empty when last < first.
    static IndexSet interval(Index first, Index last)
    {
        IndexSet s;
        if (first < 1) first = 1;
        for (Index i = first; i <= last; ++i) s.values_.push_back(i);
        return s;
    }

    bool contains(Index i) const { return std::binary_search(values_.begin(), values_.end(), i); }
    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }
    Index min() const { return values_.front(); }
    Index max() const { return values_.back(); }
    auto begin() const { return values_.begin(); }
    auto end() const { return values_.end(); }
    const std::vector<Index>& values() const { return values_; }

    friend bool operator==(const IndexSet&, const IndexSet&) = default;
    friend auto operator<=>(const IndexSet& a, const IndexSet& b) { return a.values_ <=> b.values_; }

private:
    std::vector<Index> values_;
};

inline IndexSet set_union(const IndexSet& a, const IndexSet& b)
{
    std::vector<Index> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return IndexSet(std::move(out));
}

inline IndexSet set_difference(const IndexSet& a, const IndexSet& b)
{
    std::vector<Index> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return IndexSet(std::move(out));
}

inline IndexSet set_intersection(const IndexSet& a, const IndexSet& b)
{
    std::vector<Index> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return IndexSet(std::move(out));
}

/// Real coefficient sequence with finite support, in canonical form (no stored zeros).
class CoeffVector {
public:
    using Entry = std::pair<Index, double>;

    CoeffVector() = default;

    /// Entries may be unsorted; zeros are dropped, duplicate indices rejected.
    static CoeffVector from_entries(std::vector<Entry> entries)
    {
        std::sort(entries.begin(), entries.end(),
                  [](const Entry& a, const Entry& b) { return a.first < b.first; });
        CoeffVector x;
        for (std::size_t k = 0; k < entries.size(); ++k) {
            if (entries[k].first < 1)
                throw std::invalid_argument("CoeffVector: indices must be positive");
            if (k > 0 && entries[k].first == entries[k - 1].first)
                throw std::invalid_argument("CoeffVector: duplicate index");
            if (entries[k].second != 0.0) x.entries_.push_back(entries[k]);
        }
        return x;
    }

    /// values[0] is the coefficient of e_1.
    static CoeffVector from_dense(std::span<const double> values)
    {
        CoeffVector x;
        for (std::size_t k = 0; k < values.size(); ++k)
            if (values[k] != 0.0) x.entries_.emplace_back(static_cast<Index>(k + 1), values[k]);
        return x;
    }

    static CoeffVector from_dense(std::initializer_list<double> values)
    {
        return from_dense(std::span<const double>(values.begin(), values.size()));
    }

    /// Coefficient e_i^*(x).
    double operator[](Index i) const
    {
        auto it = find(i);
        return it != entries_.end() && it->first == i ? it->second : 0.0;
    }

    void set(Index i, double value)
    {
        if (i < 1) throw std::invalid_argument("CoeffVector: indices must be positive");
        auto it = find(i);
        bool present = it != entries_.end() && it->first == i;
        if (value == 0.0) {
            if (present) entries_.erase(it);
        } else if (present) {
            it->second = value;
        } else {
            entries_.insert(it, {i, value});
        }
    }

    IndexSet support() const
    {
        std::vector<Index> idx;
        idx.reserve(entries_.size());
        for (const auto& [i, v] : entries_) idx.push_back(i);
        return IndexSet(std::move(idx));
    }

    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    Index max_index() const { return entries_.empty() ? 0 : entries_.back().first; }
    const std::vector<Entry>& entries() const { return entries_; }
    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }

    /// Dense copy of coefficients 1..dim.
    std::vector<double> to_dense(Index dim) const
    {
        std::vector<double> out(static_cast<std::size_t>(std::max<Index>(dim, 0)), 0.0);
        for (const auto& [i, v] : entries_)
            if (i <= dim) out[static_cast<std::size_t>(i - 1)] = v;
        return out;
    }

    CoeffVector& operator*=(double s)
    {
        if (s == 0.0) {
            entries_.clear();
            return *this;
        }
        for (auto& e : entries_) e.second *= s;
        return *this;
    }

    friend CoeffVector operator*(double s, CoeffVector x) { return x *= s; }
    friend CoeffVector operator*(CoeffVector x, double s) { return x *= s; }
    friend CoeffVector operator-(CoeffVector x) { return x *= -1.0; }

    friend CoeffVector operator+(const CoeffVector& a, const CoeffVector& b) { return merge(a, b, 1.0); }
    friend CoeffVector operator-(const CoeffVector& a, const CoeffVector& b) { return merge(a, b, -1.0); }

    friend bool operator==(const CoeffVector&, const CoeffVector&) = default;

private:
    std::vector<Entry>::iterator find(Index i)
    {
        return std::lower_bound(entries_.begin(), entries_.end(), i,
                                [](const Entry& e, Index k) { return e.first < k; });
    }
    std::vector<Entry>::const_iterator find(Index i) const
    {
        return std::lower_bound(entries_.begin(), entries_.end(), i,
                                [](const Entry& e, Index k) { return e.first < k; });
    }

    static CoeffVector merge(const CoeffVector& a, const CoeffVector& b, double sign)
    {
        CoeffVector out;
        out.entries_.reserve(a.size() + b.size());
        auto ia = a.entries_.begin();
        auto ib = b.entries_.begin();
        auto push = [&](Index i, double v) {
            if (v != 0.0) out.entries_.emplace_back(i, v);
        };
        while (ia != a.entries_.end() || ib != b.entries_.end()) {
            if (ib == b.entries_.end() || (ia != a.entries_.end() && ia->first < ib->first)) {
                push(ia->first, ia->second);
                ++ia;
            } else if (ia == a.entries_.end() || ib->first < ia->first) {
                push(ib->first, sign * ib->second);
                ++ib;
            } else {
                push(ia->first, ia->second + sign * ib->second);
                ++ia;
                ++ib;
            }
        }
        return out;
    }

    std::vector<Entry> entries_;
};

/// P_A(x): restriction of x to A. The empty set gives 0.
inline CoeffVector projection(const CoeffVector& x, const IndexSet& A)
{
    std::vector<CoeffVector::Entry> kept;
    for (const auto& e : x)
        if (A.contains(e.first)) kept.push_back(e);
    return CoeffVector::from_entries(std::move(kept));
}

/// x - P_A(x).
inline CoeffVector complement_projection(const CoeffVector& x, const IndexSet& A)
{
    std::vector<CoeffVector::Entry> kept;
    for (const auto& e : x)
        if (!A.contains(e.first)) kept.push_back(e);
    return CoeffVector::from_entries(std::move(kept));
}

/// Indicator vector 1_A.
inline CoeffVector indicator(const IndexSet& A, double value = 1.0)
{
    std::vector<CoeffVector::Entry> e;
    for (Index i : A) e.emplace_back(i, value);
    return CoeffVector::from_entries(std::move(e));
}

/// Basis vector e_i.
inline CoeffVector unit_vector(Index i) { return CoeffVector::from_entries({{i, 1.0}}); }

}  // namespace greedylab
