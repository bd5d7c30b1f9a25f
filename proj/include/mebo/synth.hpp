#pragma once

#include <cstdint>
#include <vector>

#include "mebo/core.hpp"

namespace mebo {

/// Points with ground truth: label 0 marks an outlier, j >= 1 marks class j.
struct LabeledData {
    Dataset points;
    std::vector<int> labels;
};

/// Shape of the generated clusters. The inlier cluster sits at the origin.
struct ClusterLayout {
    double inlier_sigma = 1.0;
    double outlier_sigma = 1.0;
    // Outlier group g (0, 1, 2) is centered at distance offset * (1 + g / 2)
    // from the inlier mean, in a random direction.
    double outlier_offset = 10.0;
    // Side of the axis-aligned box the uniform outlier group fills.
    double box_side = 40.0;
    // Minimum pairwise distance between class means, in units of inlier_sigma.
    double class_separation = 10.0;
};

/// 10000 points in 2D: 6000 inliers, outlier groups of 800, 1200, 800
/// (normal) and 1200 (uniform).
LabeledData gen_toy_2d(std::uint64_t seed, const ClusterLayout& layout = {});

/// round((1-gamma) n) inliers from one spherical normal; the outliers split
/// 2:3:2:3 into three normal groups and one uniform group.
LabeledData gen_highdim(std::size_t n, std::size_t d, double gamma, std::uint64_t seed,
                        const ClusterLayout& layout = {});

/// One normal cluster per class with pairwise separated means, plus uniform
/// outliers over a box around all classes. Requires sum(fractions) + gamma = 1.
LabeledData gen_multiclass(std::size_t n, std::size_t d, const std::vector<double>& fractions, double gamma,
                           std::uint64_t seed, const ClusterLayout& layout = {});

IndexList rows_with_label(const std::vector<int>& labels, int label);

/// Rows of any inlier class (nonzero label).
IndexList inlier_rows(const std::vector<int>& labels);

}  // namespace mebo
