#pragma once

// Test-only oracles and instance builders. Nothing here calls into the code
// paths it is used to check.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "mebo/core.hpp"
#include "mebo/meb.hpp"

namespace mebo::testing {

inline std::vector<Vector> random_points(std::mt19937_64& rng, std::size_t n, std::size_t d, double lo = -1.0,
                                         double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<Vector> pts(n, Vector(d));
    for (auto& p : pts) {
        for (double& x : p) x = u(rng);
    }
    return pts;
}

inline PointList refs(const std::vector<Vector>& pts) {
    PointList out;
    for (const auto& p : pts) out.emplace_back(p);
    return out;
}

inline double norm(const Vector& v) { return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0)); }

inline Vector minus(PointRef a, PointRef b) {
    Vector out(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] - b[j];
    return out;
}

/// Radius of the smallest ball covering some `keep` of the points, by trying every subset.
inline double brute_force_r_opt(const std::vector<Vector>& pts, std::size_t keep) {
    const std::size_t n = pts.size();
    std::vector<char> pick(n, 0);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(keep), 1);
    double best = INFINITY;
    // prev_permutation over a sorted-descending mask enumerates each subset once
    do {
        PointList sub;
        for (std::size_t i = 0; i < n; ++i) {
            if (pick[i]) sub.emplace_back(pts[i]);
        }
        best = std::min(best, exact_meb_oracle(sub, n).radius);
    } while (std::prev_permutation(pick.begin(), pick.end()));
    return best;
}

/// Rows sorted farthest first (ties: lower row first), truncated to k.
inline IndexList full_sort_farthest(const Dataset& ds, PointRef center, std::size_t k) {
    std::vector<std::pair<double, Index>> all;
    for (Index i = 0; i < ds.size(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < ds.dim(); ++j) acc += (ds.row(i)[j] - center[j]) * (ds.row(i)[j] - center[j]);
        all.emplace_back(acc, i);
    }
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
        return a.first > b.first || (a.first == b.first && a.second < b.second);
    });
    IndexList out;
    for (std::size_t i = 0; i < k; ++i) out.push_back(all[i].second);
    return out;
}

/// Total variance through the pairwise identity sum_{i,j} |x_i - x_j|^2 / (2 m^2).
inline double pairwise_variance(const Dataset& ds, const IndexList& rows) {
    double acc = 0.0;
    for (Index a : rows) {
        for (Index b : rows) {
            for (std::size_t j = 0; j < ds.dim(); ++j) {
                const double diff = ds.row(a)[j] - ds.row(b)[j];
                acc += diff * diff;
            }
        }
    }
    const double m = static_cast<double>(rows.size());
    return acc / (2.0 * m * m);
}

inline IndexList sorted(IndexList v) {
    std::sort(v.begin(), v.end());
    return v;
}

/// Standard error of a Bernoulli frequency estimate.
inline double std_error(double p, std::size_t trials) {
    return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

/// 10 Gaussian points near the origin and 2 far away, in 2D. Fixed for every caller.
inline std::vector<Vector> tiny_instance() {
    std::mt19937_64 rng(20240611);
    std::normal_distribution<double> z(0.0, 1.0);
    std::vector<Vector> pts;
    for (int i = 0; i < 10; ++i) pts.push_back({z(rng), z(rng)});
    pts.push_back({6.0, 5.0});
    pts.push_back({-5.5, 6.5});
    return pts;
}

}  // namespace mebo::testing
