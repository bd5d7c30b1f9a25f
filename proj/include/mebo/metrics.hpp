#pragma once

#include <span>
#include <vector>

#include "mebo/core.hpp"

namespace mebo {

/// Inliers are the positive class.
struct F1Score {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    // Set when nothing was predicted; precision is then reported as 0.
    bool empty_prediction = false;
};

/// Both index lists are treated as sets over [0, n); throws out_of_range otherwise.
F1Score f1_score(std::span<const Index> predicted, std::span<const Index> truth, std::size_t n);

struct ClassMatch {
    std::vector<int> label;  // truth label matched to each predicted class, 0 if none
    std::vector<F1Score> per_class;
    double average_f1 = 0.0;
};

/// Pairs predicted classes with the truth labels 1..L so that the summed F1
/// is maximal (exhaustive for up to 8 classes, greedy beyond).
ClassMatch match_classes(const std::vector<IndexList>& predicted, const std::vector<int>& labels);

}  // namespace mebo
