#pragma once

#include <algorithm>
#include <bit>
#include <utility>

namespace mebo {

namespace detail {

template <class Less>
void insertion_sort(std::span<DistanceEntry> v, Less less) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        DistanceEntry x = v[i];
        std::size_t j = i;
        for (; j > 0 && less(x, v[j - 1]); --j) v[j] = v[j - 1];
        v[j] = x;
    }
}

// Median of each group of five moved to the front, then the median of those
// medians found recursively. Returns its position in `v`.
template <class Less>
std::size_t median_of_medians(std::span<DistanceEntry> v, Less less);

// Lomuto-style partition around v[pivot]; returns the pivot's final position.
// The order is strict and total (indices are distinct), so no equal keys occur.
template <class Less>
std::size_t partition_at(std::span<DistanceEntry> v, std::size_t pivot, Less less) {
    const std::size_t last = v.size() - 1;
    std::swap(v[pivot], v[last]);
    const DistanceEntry p = v[last];
    std::size_t store = 0;
    for (std::size_t i = 0; i < last; ++i) {
        if (less(v[i], p)) std::swap(v[i], v[store++]);
    }
    std::swap(v[store], v[last]);
    return store;
}

template <class Less>
std::size_t median_of_three(std::span<const DistanceEntry> v, Less less) {
    const std::size_t a = 0, b = v.size() / 2, c = v.size() - 1;
    if (less(v[a], v[b])) {
        if (less(v[b], v[c])) return b;
        return less(v[a], v[c]) ? c : a;
    }
    if (less(v[a], v[c])) return a;
    return less(v[b], v[c]) ? c : b;
}

template <class Less>
void select_nth(std::span<DistanceEntry> v, std::size_t nth, Less less) {
    std::size_t budget = 2 * static_cast<std::size_t>(std::bit_width(v.size()));
    while (v.size() > 16) {
        const std::size_t pivot = budget > 0 ? median_of_three(v, less) : median_of_medians(v, less);
        if (budget > 0) --budget;
        const std::size_t pos = partition_at(v, pivot, less);
        if (pos == nth) return;
        if (nth < pos) {
            v = v.first(pos);
        } else {
            v = v.subspan(pos + 1);
            nth -= pos + 1;
        }
    }
    insertion_sort(v, less);
}

template <class Less>
std::size_t median_of_medians(std::span<DistanceEntry> v, Less less) {
    if (v.size() <= 5) {
        insertion_sort(v, less);
        return v.size() / 2;
    }
    std::size_t groups = 0;
    for (std::size_t start = 0; start < v.size(); start += 5) {
        auto group = v.subspan(start, std::min<std::size_t>(5, v.size() - start));
        insertion_sort(group, less);
        std::swap(v[groups++], group[group.size() / 2]);
    }
    const std::size_t mid = groups / 2;
    select_nth(v.first(groups), mid, less);
    return mid;
}

}  // namespace detail

template <class Less>
void select_first(std::span<DistanceEntry> entries, std::size_t count, Less less) {
    if (count == 0 || entries.empty()) return;
    if (count >= entries.size()) {
        auto last = std::max_element(entries.begin(), entries.end(), less);
        std::swap(*last, entries.back());
        return;
    }
    detail::select_nth(entries, count - 1, less);
}

}  // namespace mebo
