#pragma once

#include <span>
#include <vector>

#include "mebo/core.hpp"

namespace mebo {

using PointList = std::vector<PointRef>;

PointList gather(const Dataset& ds, std::span<const Index> rows);

/// One iterate of the farthest-point MEB recurrence.
struct MebIterate {
    Vector center;
    std::size_t step = 1;
};

/// Farthest-point recurrence: c_1 is points[0], then
/// c_{t+1} = c_t + (q - c_t) / (t + 1) with q the farthest point from c_t
/// (lowest position wins ties). Returns c_iters.
Vector approx_meb_center(std::span<const PointRef> points, std::size_t iters);
Vector approx_meb_center(const Dataset& ds, std::span<const Index> rows, std::size_t iters);

/// Every iterate c_1 .. c_iters of the same recurrence.
std::vector<MebIterate> approx_meb_trajectory(std::span<const PointRef> points, std::size_t iters);

/// Largest Euclidean distance from `center` to any of `points`.
double enclosing_radius(std::span<const PointRef> points, PointRef center);
double enclosing_radius(const Dataset& ds, std::span<const Index> rows, PointRef center);

inline constexpr std::size_t kOracleDefaultLimit = 14;
inline constexpr std::size_t kOracleMaxDim = 6;

/// Exact minimum enclosing ball by enumerating every candidate support set of
/// at most d+1 points. Exponential; meant for checking the fast routines on
/// tiny instances. Throws instance_too_large beyond `limit` points or d > 6.
Ball exact_meb_oracle(std::span<const PointRef> points, std::size_t limit = kOracleDefaultLimit);

}  // namespace mebo
