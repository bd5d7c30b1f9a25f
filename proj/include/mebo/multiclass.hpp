#pragma once

#include <vector>

#include "mebo/core.hpp"

namespace mebo {

/// Per-class inlier fractions, peeled in the given order.
struct ClassSpec {
    std::vector<double> fractions;
};

/// Fractions must be positive and, together with gamma, sum to at most 1 (+1e-9).
void validate_class_spec(const ClassSpec& spec, double gamma);

struct ClassFit {
    Ball ball;
    IndexList members;  // ascending rows of the original dataset
    double score = 0.0;
    std::size_t candidates_evaluated = 0;
    DerivedParams derived;
};

/// Greedy peeling. Class j runs the recognizer on the n_j rows still
/// unclaimed with m_j = ceil(fraction_j * n) inliers (clamped to n_j), far
/// sets of size n_j - m_j, and seed p.seed + j; its m_j rows are then removed.
std::vector<ClassFit> peel(const Dataset& ds, const ClassSpec& spec, const Params& p);

}  // namespace mebo
