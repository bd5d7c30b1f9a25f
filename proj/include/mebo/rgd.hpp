#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "mebo/core.hpp"

namespace mebo {

/// splitmix64-based combiner used to derive per-node random streams.
std::uint64_t mix_stream(std::uint64_t state, std::uint64_t value) noexcept;

/// One node of the randomized core-set tree.
///
/// `path` holds the dataset rows from the root down to this node. Trees grown
/// by sequential boosting start from a virtual point (`anchor`) that is not a
/// dataset row; it precedes every path in that tree's MEB computations.
struct TreeNode {
    IndexList path;
    std::shared_ptr<const Vector> anchor;
    Vector center;
    std::uint64_t stream = 0;

    std::size_t depth() const noexcept { return path.size() + (anchor ? 1 : 0); }
};

TreeNode make_root(const Dataset& ds, Index root, std::uint64_t seed, std::size_t tree_id);
TreeNode make_anchored_root(Vector anchor, std::uint64_t seed, std::size_t tree_id);

/// Approximate MEB center of the anchor (if any) followed by the path rows.
Vector path_center(const Dataset& ds, const std::shared_ptr<const Vector>& anchor, std::span<const Index> path,
                   std::size_t meb_iters);

/// Rows of the k farthest from `center`, ascending by row index.
IndexList far_set(const Dataset& ds, PointRef center, std::size_t k);

/// Children of `node`: a uniform sample (without replacement) of
/// min(s, k) rows from the node's far set, each appended to the path.
std::vector<TreeNode> expand_node(const Dataset& ds, const TreeNode& node, const DerivedParams& dp);

struct CandidateScore {
    double score = 0.0;
    IndexList inliers;  // the m nearest rows, ascending
};

/// Mean squared distance of the rows to their own centroid (trace of the covariance).
double total_variance(const Dataset& ds, std::span<const Index> rows);

/// Inliers are the m rows nearest to `center`; the score is their total variance.
CandidateScore score_candidate(const Dataset& ds, PointRef center, std::size_t m);

/// Breadth-first growth of one tree; every node becomes a scored candidate.
std::vector<Candidate> grow_tree(const Dataset& ds, const Params& p, Index root, std::size_t tree_id = 0);
std::vector<Candidate> grow_tree(const Dataset& ds, const DerivedParams& dp, const TreeNode& root,
                                 std::size_t tree_id, unsigned threads = 1);

/// `count` distinct uniformly random rows, derived from `seed`.
IndexList pick_roots(std::uint64_t seed, std::size_t n, std::size_t count);

std::vector<Candidate> boost_forest(const Dataset& ds, const Params& p);
std::vector<Candidate> boost_forest(const Dataset& ds, const Params& p, const DerivedParams& dp);

/// Round 1 grows from a random root; each later round re-roots at the best
/// center found so far, treated as a virtual point.
std::vector<Candidate> boost_sequential(const Dataset& ds, const Params& p, std::size_t rounds);

/// Position of the minimum-score candidate. Equal scores go to the smaller
/// radius, then to the earliest position.
std::size_t best_candidate(std::span<const Candidate> candidates);

/// Forest of p.forest_size trees, then p.sequential_rounds re-rooted trees,
/// then the minimum-variance candidate as a ball over its m nearest rows.
RecognitionResult recognize(const Dataset& ds, const Params& p);
RecognitionResult recognize(const Dataset& ds, const Params& p, const DerivedParams& dp);

}  // namespace mebo
