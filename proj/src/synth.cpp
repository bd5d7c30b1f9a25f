#include "mebo/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>

namespace mebo {

namespace {

class Builder {
  public:
    Builder(std::size_t d, std::uint64_t seed) : d_(d), rng_(seed) {}

    void normal(std::size_t count, const Vector& mean, double sigma, int label) {
        std::normal_distribution<double> z(0.0, sigma);
        for (std::size_t i = 0; i < count; ++i) {
            for (std::size_t j = 0; j < d_; ++j) values_.push_back(mean[j] + z(rng_));
            labels_.push_back(label);
        }
    }

    void uniform(std::size_t count, const Vector& center, double side, int label) {
        std::uniform_real_distribution<double> u(-0.5 * side, 0.5 * side);
        for (std::size_t i = 0; i < count; ++i) {
            for (std::size_t j = 0; j < d_; ++j) values_.push_back(center[j] + u(rng_));
            labels_.push_back(label);
        }
    }

    Vector direction() {
        std::normal_distribution<double> z(0.0, 1.0);
        Vector v(d_);
        double norm = 0.0;
        while (norm < 1e-12) {
            for (double& x : v) x = z(rng_);
            norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
        }
        for (double& x : v) x /= norm;
        return v;
    }

    std::mt19937_64& rng() { return rng_; }

    LabeledData finish() {
        const std::size_t n = labels_.size();
        return {Dataset(n, d_, std::move(values_)), std::move(labels_)};
    }

  private:
    std::size_t d_;
    std::mt19937_64 rng_;
    std::vector<double> values_;
    std::vector<int> labels_;
};

Vector scaled(const Vector& v, double s) {
    Vector out(v);
    for (double& x : out) x *= s;
    return out;
}

// Three normal outlier groups followed by one uniform group.
void add_outlier_groups(Builder& b, std::size_t d, const std::array<std::size_t, 4>& sizes,
                        const ClusterLayout& layout) {
    for (std::size_t g = 0; g < 3; ++g) {
        const double dist = layout.outlier_offset * (1.0 + 0.5 * static_cast<double>(g));
        b.normal(sizes[g], scaled(b.direction(), dist), layout.outlier_sigma, 0);
    }
    b.uniform(sizes[3], Vector(d, 0.0), layout.box_side, 0);
}

void check_fraction(double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw Error(ErrorCode::invalid_argument, "gamma must lie in (0,1)");
    }
}

}  // namespace

LabeledData gen_toy_2d(std::uint64_t seed, const ClusterLayout& layout) {
    Builder b(2, seed);
    b.normal(6000, Vector(2, 0.0), layout.inlier_sigma, 1);
    add_outlier_groups(b, 2, {800, 1200, 800, 1200}, layout);
    return b.finish();
}

LabeledData gen_highdim(std::size_t n, std::size_t d, double gamma, std::uint64_t seed, const ClusterLayout& layout) {
    if (n < 1 || d < 1) {
        throw Error(ErrorCode::invalid_argument, "n and d must be positive");
    }
    check_fraction(gamma);
    const auto outliers = static_cast<std::size_t>(std::llround(gamma * static_cast<double>(n)));
    std::array<std::size_t, 4> sizes{};
    sizes[0] = outliers * 2 / 10;
    sizes[1] = outliers * 3 / 10;
    sizes[2] = outliers * 2 / 10;
    sizes[3] = outliers - sizes[0] - sizes[1] - sizes[2];

    Builder b(d, seed);
    b.normal(n - outliers, Vector(d, 0.0), layout.inlier_sigma, 1);
    add_outlier_groups(b, d, sizes, layout);
    return b.finish();
}

LabeledData gen_multiclass(std::size_t n, std::size_t d, const std::vector<double>& fractions, double gamma,
                           std::uint64_t seed, const ClusterLayout& layout) {
    if (n < 1 || d < 1 || fractions.empty()) {
        throw Error(ErrorCode::invalid_argument, "n, d and the class list must be nonempty");
    }
    if (!(gamma >= 0.0 && gamma < 1.0)) {
        throw Error(ErrorCode::invalid_argument, "gamma must lie in [0,1)");
    }
    double total = gamma;
    for (double f : fractions) {
        if (!(f > 0.0)) throw Error(ErrorCode::invalid_argument, "class fractions must be positive");
        total += f;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw Error(ErrorCode::invalid_argument, "class fractions plus gamma must sum to 1");
    }

    std::vector<std::size_t> sizes;
    std::size_t used = 0;
    for (double f : fractions) {
        sizes.push_back(static_cast<std::size_t>(std::llround(f * static_cast<double>(n))));
        used += sizes.back();
    }
    if (used > n) {
        throw Error(ErrorCode::invalid_argument, "rounded class sizes exceed n");
    }

    Builder b(d, seed);
    // Means are drawn in a box wide enough to hold all classes, then rejected
    // until every pair is at least `separation` apart; failing that, they are
    // spaced along the first axis.
    const double separation = layout.class_separation * layout.inlier_sigma;
    const std::size_t classes = fractions.size();
    const double half = separation * static_cast<double>(classes);
    std::uniform_real_distribution<double> u(-half, half);
    std::vector<Vector> means;
    for (int attempt = 0; attempt < 1000 && means.size() < classes; ++attempt) {
        Vector m(d);
        for (double& x : m) x = u(b.rng());
        const bool far_enough = std::all_of(means.begin(), means.end(), [&](const Vector& other) {
            return distance(m, other) >= separation;
        });
        if (far_enough) means.push_back(std::move(m));
    }
    if (means.size() < classes) {
        means.assign(classes, Vector(d, 0.0));
        for (std::size_t c = 0; c < classes; ++c) means[c][0] = separation * static_cast<double>(c);
    }

    Vector box_center(d, 0.0);
    for (const auto& m : means) {
        for (std::size_t j = 0; j < d; ++j) box_center[j] += m[j] / static_cast<double>(classes);
    }
    double spread = 0.0;
    for (const auto& m : means) spread = std::max(spread, distance(m, box_center));

    for (std::size_t c = 0; c < classes; ++c) {
        b.normal(sizes[c], means[c], layout.inlier_sigma, static_cast<int>(c + 1));
    }
    b.uniform(n - used, box_center, layout.box_side + 2.0 * spread, 0);
    return b.finish();
}

IndexList rows_with_label(const std::vector<int>& labels, int label) {
    IndexList out;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == label) out.push_back(i);
    }
    return out;
}

IndexList inlier_rows(const std::vector<int>& labels) {
    IndexList out;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] != 0) out.push_back(i);
    }
    return out;
}

}  // namespace mebo
