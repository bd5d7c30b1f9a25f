#pragma once

#include <span>
#include <vector>

#include "mebo/core.hpp"

namespace mebo {

/// Squared distance of one row to the query, tagged with its row index.
struct DistanceEntry {
    double key = 0.0;
    Index index = 0;
};

/// Total order "a is farther than b": larger key first, lower index first on ties.
struct Farther {
    bool operator()(const DistanceEntry& a, const DistanceEntry& b) const noexcept {
        return a.key > b.key || (a.key == b.key && a.index < b.index);
    }
};

/// Reverse of Farther, so the nearest m rows are exactly the complement of
/// the farthest n - m rows.
struct Nearer {
    bool operator()(const DistanceEntry& a, const DistanceEntry& b) const noexcept { return Farther{}(b, a); }
};

inline constexpr Farther farther{};
inline constexpr Nearer nearer{};

/// Rearranges `entries` so that the first `count` elements are the `count`
/// smallest under `less` and entries[count-1] is the count-th smallest.
/// Quickselect with median-of-three pivots; once partitioning stops shrinking
/// the range geometrically it switches to median-of-medians pivots, which
/// bounds the worst case at O(n).
template <class Less>
void select_first(std::span<DistanceEntry> entries, std::size_t count, Less less);

void select_farthest(std::span<DistanceEntry> entries, std::size_t count);
void select_nearest(std::span<DistanceEntry> entries, std::size_t count);

/// Fills `out` with (squared distance, row) for every row of `ds`.
void squared_distances(const Dataset& ds, PointRef center, std::vector<DistanceEntry>& out);

struct TopK {
    IndexList indices;
    double pivot = 0.0;  // k-th largest distance (not squared)
};

/// The k rows farthest from `center`. Throws out_of_range unless 1 <= k <= n.
TopK top_k_farthest(const Dataset& ds, PointRef center, std::size_t k);

/// The m rows nearest to `center`, plus the distance of the m-th nearest.
TopK nearest_m(const Dataset& ds, PointRef center, std::size_t m);

}  // namespace mebo

#include "mebo/detail/select_impl.hpp"
