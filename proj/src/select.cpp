#include "mebo/select.hpp"

#include <cmath>

namespace mebo {

void select_farthest(std::span<DistanceEntry> entries, std::size_t count) { select_first(entries, count, farther); }

void select_nearest(std::span<DistanceEntry> entries, std::size_t count) { select_first(entries, count, nearer); }

void squared_distances(const Dataset& ds, PointRef center, std::vector<DistanceEntry>& out) {
    if (center.size() != ds.dim()) {
        throw Error(ErrorCode::invalid_argument, "center dimension does not match the dataset");
    }
    out.resize(ds.size());
    for (Index i = 0; i < ds.size(); ++i) {
        out[i] = {squared_distance(ds.row(i), center), i};
    }
}

namespace {

template <class Less>
TopK take_first(const Dataset& ds, PointRef center, std::size_t count, Less less, const char* what) {
    if (count < 1 || count > ds.size()) {
        throw Error(ErrorCode::out_of_range, what);
    }
    std::vector<DistanceEntry> entries;
    squared_distances(ds, center, entries);
    select_first(std::span<DistanceEntry>(entries), count, less);
    TopK out;
    out.indices.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.indices.push_back(entries[i].index);
    out.pivot = std::sqrt(entries[count - 1].key);
    return out;
}

}  // namespace

TopK top_k_farthest(const Dataset& ds, PointRef center, std::size_t k) {
    return take_first(ds, center, k, farther, "k must lie in [1, n]");
}

TopK nearest_m(const Dataset& ds, PointRef center, std::size_t m) {
    return take_first(ds, center, m, nearer, "m must lie in [1, n]");
}

}  // namespace mebo
