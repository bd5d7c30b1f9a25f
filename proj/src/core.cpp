#include "mebo/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mebo {

namespace {

bool open_unit(double x) { return x > 0.0 && x < 1.0; }

[[noreturn]] void bad_param(const std::string& what) { throw Error(ErrorCode::invalid_params, what); }

}  // namespace

Dataset::Dataset(std::size_t n, std::size_t d, std::vector<double> values)
    : n_(n), d_(d), values_(std::move(values)) {
    if (n_ == 0 || d_ == 0) {
        throw Error(ErrorCode::degenerate_dataset, "dataset needs at least one point and one dimension");
    }
    if (values_.size() != n_ * d_) {
        throw Error(ErrorCode::invalid_argument, "dataset buffer size does not match n*d");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            std::ostringstream os;
            os << "non-finite value at row " << i / d_ << ", column " << i % d_;
            throw Error(ErrorCode::invalid_argument, os.str());
        }
    }
}

Dataset Dataset::from_rows(const std::vector<Vector>& rows) {
    if (rows.empty() || rows.front().empty()) {
        throw Error(ErrorCode::degenerate_dataset, "dataset needs at least one point and one dimension");
    }
    const std::size_t d = rows.front().size();
    std::vector<double> values;
    values.reserve(rows.size() * d);
    for (const auto& r : rows) {
        if (r.size() != d) {
            throw Error(ErrorCode::invalid_argument, "ragged rows");
        }
        values.insert(values.end(), r.begin(), r.end());
    }
    return Dataset(rows.size(), d, std::move(values));
}

Dataset Dataset::subset(std::span<const Index> rows) const {
    std::vector<double> values;
    values.reserve(rows.size() * d_);
    for (Index i : rows) {
        if (i >= n_) {
            throw Error(ErrorCode::out_of_range, "subset row index out of range");
        }
        auto r = row(i);
        values.insert(values.end(), r.begin(), r.end());
    }
    return Dataset(rows.size(), d_, std::move(values));
}

std::size_t ceil_count(double x) {
    if (!(x > 0.0)) {
        return 0;
    }
    const double nearest = std::round(x);
    if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, std::abs(x))) {
        return static_cast<std::size_t>(nearest);
    }
    return static_cast<std::size_t>(std::ceil(x));
}

std::size_t default_meb_iters(double epsilon) { return std::max<std::size_t>(1, ceil_count(1.0 / (epsilon * epsilon))); }

void validate_knobs(const Params& p) {
    if (!open_unit(p.epsilon)) bad_param("epsilon must lie in (0,1)");
    if (!open_unit(p.delta)) bad_param("delta must lie in (0,1)");
    if (!open_unit(p.mu)) bad_param("mu must lie in (0,1)");
    if (p.forest_size < 1) bad_param("forest size must be at least 1");
    if (p.threads < 1) bad_param("threads must be at least 1");
}

DerivedParams derive_params(const Params& p, std::size_t n) {
    validate_knobs(p);
    if (!open_unit(p.gamma)) bad_param("gamma must lie in (0,1)");
    if ((1.0 + p.delta) * p.gamma >= 1.0) bad_param("(1+delta)*gamma must be below 1");
    if (n < 1) throw Error(ErrorCode::degenerate_dataset, "empty dataset");

    DerivedParams dp;
    dp.height = ceil_count(2.0 / p.epsilon) + 1;
    dp.top_k = ceil_count((1.0 + p.delta) * p.gamma * static_cast<double>(n));
    if (dp.top_k >= n) {
        std::ostringstream os;
        os << "top-k count " << dp.top_k << " leaves no inliers among " << n << " points";
        throw Error(ErrorCode::degenerate_dataset, os.str());
    }
    dp.sample_size = std::max<std::size_t>(
        1, ceil_count((1.0 + 1.0 / p.delta) * std::log(static_cast<double>(dp.height) / p.mu)));
    dp.inliers = n - dp.top_k;
    dp.meb_iters = p.meb_iters > 0 ? p.meb_iters : default_meb_iters(p.epsilon);
    return dp;
}

void validate_derived(const DerivedParams& dp, std::size_t n) {
    if (dp.height < 1) bad_param("tree height must be at least 1");
    if (dp.sample_size < 1) bad_param("sample size must be at least 1");
    if (dp.meb_iters < 1) bad_param("MEB iterations must be at least 1");
    if (dp.inliers < 1 || dp.inliers > n) throw Error(ErrorCode::out_of_range, "inlier count out of range");
    if (dp.top_k > n) throw Error(ErrorCode::out_of_range, "top-k count out of range");
}

double squared_distance(PointRef a, PointRef b) noexcept {
    double acc = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double diff = a[j] - b[j];
        acc += diff * diff;
    }
    return acc;
}

}  // namespace mebo
