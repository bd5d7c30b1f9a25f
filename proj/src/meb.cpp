#include "mebo/meb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mebo {

namespace {

void check_points(std::span<const PointRef> points) {
    if (points.empty()) {
        throw Error(ErrorCode::empty_subset, "point subset is empty");
    }
    const std::size_t d = points.front().size();
    for (const auto& p : points) {
        if (p.size() != d) {
            throw Error(ErrorCode::invalid_argument, "points of mixed dimension");
        }
    }
}

template <class Visit>
void run_recurrence(std::span<const PointRef> points, std::size_t iters, Visit&& visit) {
    check_points(points);
    if (iters < 1) {
        throw Error(ErrorCode::invalid_params, "MEB iteration count must be at least 1");
    }
    Vector c(points.front().begin(), points.front().end());
    visit(c, 1);
    for (std::size_t t = 1; t < iters; ++t) {
        std::size_t far = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            const double dist = squared_distance(points[i], c);
            if (dist > best) {
                best = dist;
                far = i;
            }
        }
        const double step = 1.0 / static_cast<double>(t + 1);
        const PointRef q = points[far];
        for (std::size_t j = 0; j < c.size(); ++j) {
            c[j] += step * (q[j] - c[j]);
        }
        visit(c, t + 1);
    }
}

// Solves the SPD-ish system in place with partial pivoting. False when singular.
bool solve_linear(std::vector<double>& a, std::vector<double>& b, std::size_t dim) {
    double scale = 0.0;
    for (std::size_t i = 0; i < dim; ++i) scale = std::max(scale, std::abs(a[i * dim + i]));
    const double tiny = 1e-12 * std::max(scale, std::numeric_limits<double>::min());
    for (std::size_t col = 0; col < dim; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < dim; ++r) {
            if (std::abs(a[r * dim + col]) > std::abs(a[piv * dim + col])) piv = r;
        }
        if (std::abs(a[piv * dim + col]) <= tiny) return false;
        if (piv != col) {
            for (std::size_t j = 0; j < dim; ++j) std::swap(a[piv * dim + j], a[col * dim + j]);
            std::swap(b[piv], b[col]);
        }
        for (std::size_t r = col + 1; r < dim; ++r) {
            const double f = a[r * dim + col] / a[col * dim + col];
            for (std::size_t j = col; j < dim; ++j) a[r * dim + j] -= f * a[col * dim + j];
            b[r] -= f * b[col];
        }
    }
    for (std::size_t i = dim; i-- > 0;) {
        double acc = b[i];
        for (std::size_t j = i + 1; j < dim; ++j) acc -= a[i * dim + j] * b[j];
        b[i] = acc / a[i * dim + i];
    }
    return true;
}

// Center of the smallest sphere through all of `support` lying in their affine hull.
bool circumcenter(std::span<const PointRef> points, std::span<const std::size_t> support, Vector& center) {
    const PointRef p0 = points[support[0]];
    const std::size_t d = p0.size();
    center.assign(p0.begin(), p0.end());
    const std::size_t m = support.size() - 1;
    if (m == 0) return true;

    std::vector<double> edges(m * d);
    for (std::size_t i = 0; i < m; ++i) {
        const PointRef pi = points[support[i + 1]];
        for (std::size_t j = 0; j < d; ++j) edges[i * d + j] = pi[j] - p0[j];
    }
    std::vector<double> gram(m * m);
    std::vector<double> rhs(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t k = 0; k < m; ++k) {
            double acc = 0.0;
            for (std::size_t j = 0; j < d; ++j) acc += edges[i * d + j] * edges[k * d + j];
            gram[i * m + k] = acc;
        }
        rhs[i] = 0.5 * gram[i * m + i];
    }
    if (!solve_linear(gram, rhs, m)) return false;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < d; ++j) center[j] += rhs[i] * edges[i * d + j];
    }
    return true;
}

}  // namespace

PointList gather(const Dataset& ds, std::span<const Index> rows) {
    PointList out;
    out.reserve(rows.size());
    for (Index i : rows) {
        if (i >= ds.size()) {
            throw Error(ErrorCode::out_of_range, "row index out of range");
        }
        out.push_back(ds.row(i));
    }
    return out;
}

Vector approx_meb_center(std::span<const PointRef> points, std::size_t iters) {
    Vector out;
    run_recurrence(points, iters, [&](const Vector& c, std::size_t step) {
        if (step == iters) out = c;
    });
    return out;
}

Vector approx_meb_center(const Dataset& ds, std::span<const Index> rows, std::size_t iters) {
    const PointList pts = gather(ds, rows);
    return approx_meb_center(pts, iters);
}

std::vector<MebIterate> approx_meb_trajectory(std::span<const PointRef> points, std::size_t iters) {
    std::vector<MebIterate> out;
    out.reserve(iters);
    run_recurrence(points, iters, [&](const Vector& c, std::size_t step) { out.push_back({c, step}); });
    return out;
}

double enclosing_radius(std::span<const PointRef> points, PointRef center) {
    check_points(points);
    if (center.size() != points.front().size()) {
        throw Error(ErrorCode::invalid_argument, "center dimension does not match the points");
    }
    double best = 0.0;
    for (const auto& p : points) best = std::max(best, squared_distance(p, center));
    return std::sqrt(best);
}

double enclosing_radius(const Dataset& ds, std::span<const Index> rows, PointRef center) {
    const PointList pts = gather(ds, rows);
    return enclosing_radius(pts, center);
}

Ball exact_meb_oracle(std::span<const PointRef> points, std::size_t limit) {
    check_points(points);
    const std::size_t n = points.size();
    const std::size_t d = points.front().size();
    if (n > limit || d > kOracleMaxDim) {
        throw Error(ErrorCode::instance_too_large, "exact MEB oracle is limited to small instances");
    }

    Ball best;
    best.radius = std::numeric_limits<double>::infinity();
    Vector center;
    std::vector<std::size_t> support;
    const std::size_t max_support = std::min(n, d + 1);
    for (std::size_t size = 1; size <= max_support; ++size) {
        // Lexicographic walk over all `size`-subsets of [0, n).
        support.resize(size);
        for (std::size_t i = 0; i < size; ++i) support[i] = i;
        while (true) {
            if (circumcenter(points, support, center)) {
                const double r2 = squared_distance(points[support[0]], center);
                if (std::sqrt(r2) < best.radius) {
                    const double slack = r2 * (1.0 + 1e-10) + 1e-24;
                    bool covers = true;
                    for (const auto& p : points) {
                        if (squared_distance(p, center) > slack) {
                            covers = false;
                            break;
                        }
                    }
                    if (covers) {
                        best.center = center;
                        best.radius = std::sqrt(r2);
                    }
                }
            }
            std::size_t pos = size;
            while (pos > 0 && support[pos - 1] == n - size + pos - 1) --pos;
            if (pos == 0) break;
            ++support[pos - 1];
            for (std::size_t j = pos; j < size; ++j) support[j] = support[j - 1] + 1;
        }
    }
    if (!std::isfinite(best.radius)) {
        throw Error(ErrorCode::invalid_argument, "no covering support set found");
    }
    return best;
}

}  // namespace mebo
