#include "mebo/rgd.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_set>

#include "mebo/meb.hpp"
#include "mebo/select.hpp"
#include "parallel.hpp"

namespace mebo {

namespace {

constexpr std::uint64_t kAnchorTag = ~std::uint64_t{0};
constexpr std::uint64_t kRootsTag = 0x726f6f7473ULL;

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Scratch buffers reused by every node a worker thread handles.
struct Scratch {
    std::vector<DistanceEntry> entries;
    std::vector<char> mark;
    IndexList pool;
};

Scratch& scratch() {
    thread_local Scratch s;
    return s;
}

// Far set in ascending row order. `entries` must hold the node's distances;
// when the nearest m are already selected and k == n - m, the tail is reused.
IndexList canonical_far_set(std::span<DistanceEntry> entries, std::size_t k, bool tail_is_far_set) {
    const std::size_t n = entries.size();
    if (!tail_is_far_set) select_farthest(entries, k);
    auto& mark = scratch().mark;
    mark.assign(n, 0);
    if (tail_is_far_set) {
        for (std::size_t i = n - k; i < n; ++i) mark[entries[i].index] = 1;
    } else {
        for (std::size_t i = 0; i < k; ++i) mark[entries[i].index] = 1;
    }
    IndexList out;
    out.reserve(k);
    for (Index i = 0; i < n; ++i) {
        if (mark[i]) out.push_back(i);
    }
    return out;
}

std::vector<TreeNode> children_from(const Dataset& ds, const TreeNode& node, const DerivedParams& dp,
                                    const IndexList& far) {
    std::vector<TreeNode> children;
    if (far.empty()) return children;
    const std::size_t take = std::min(dp.sample_size, far.size());
    auto& pool = scratch().pool;
    pool.assign(far.begin(), far.end());
    std::mt19937_64 rng(node.stream);
    children.reserve(take);
    for (std::size_t i = 0; i < take; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
        std::swap(pool[i], pool[pick(rng)]);
        TreeNode child;
        child.path = node.path;
        child.path.push_back(pool[i]);
        child.anchor = node.anchor;
        child.stream = mix_stream(node.stream, pool[i]);
        child.center = path_center(ds, child.anchor, child.path, dp.meb_iters);
        children.push_back(std::move(child));
    }
    return children;
}

// Total variance of the rows flagged in `mark`, accumulated in row order so
// that equal row sets always produce bit-identical scores.
double variance_of_marked(const Dataset& ds, const std::vector<char>& mark, std::size_t count) {
    const std::size_t d = ds.dim();
    Vector centroid(d, 0.0);
    for (Index i = 0; i < ds.size(); ++i) {
        if (!mark[i]) continue;
        const PointRef p = ds.row(i);
        for (std::size_t j = 0; j < d; ++j) centroid[j] += p[j];
    }
    const double inv = 1.0 / static_cast<double>(count);
    for (double& c : centroid) c *= inv;
    double acc = 0.0;
    for (Index i = 0; i < ds.size(); ++i) {
        if (mark[i]) acc += squared_distance(ds.row(i), centroid);
    }
    return acc * inv;
}

double variance_of_first(const Dataset& ds, std::span<const DistanceEntry> rows) {
    auto& mark = scratch().mark;
    mark.assign(ds.size(), 0);
    for (const auto& e : rows) mark[e.index] = 1;
    return variance_of_marked(ds, mark, rows.size());
}

struct NodeOutcome {
    double score = 0.0;
    double radius = 0.0;
    std::vector<TreeNode> children;
};

NodeOutcome process_node(const Dataset& ds, const TreeNode& node, const DerivedParams& dp) {
    auto& entries = scratch().entries;
    squared_distances(ds, node.center, entries);
    std::span<DistanceEntry> all(entries);
    select_nearest(all, dp.inliers);

    NodeOutcome out;
    out.score = variance_of_first(ds, all.first(dp.inliers));
    out.radius = std::sqrt(all[dp.inliers - 1].key);
    if (node.depth() < dp.height && dp.top_k > 0) {
        const bool complement = dp.top_k == ds.size() - dp.inliers;
        const IndexList far = canonical_far_set(all, dp.top_k, complement);
        out.children = children_from(ds, node, dp, far);
    }
    return out;
}

void check_tree_inputs(const Dataset& ds, const DerivedParams& dp, const TreeNode& root) {
    validate_derived(dp, ds.size());
    if (root.center.size() != ds.dim()) {
        throw Error(ErrorCode::invalid_argument, "root center dimension does not match the dataset");
    }
}

}  // namespace

std::uint64_t mix_stream(std::uint64_t state, std::uint64_t value) noexcept {
    return splitmix64(state ^ splitmix64(value));
}

TreeNode make_root(const Dataset& ds, Index root, std::uint64_t seed, std::size_t tree_id) {
    if (root >= ds.size()) {
        throw Error(ErrorCode::out_of_range, "root index out of range");
    }
    TreeNode node;
    node.path = {root};
    const PointRef p = ds.row(root);
    node.center.assign(p.begin(), p.end());
    node.stream = mix_stream(mix_stream(seed, tree_id), root);
    return node;
}

TreeNode make_anchored_root(Vector anchor, std::uint64_t seed, std::size_t tree_id) {
    TreeNode node;
    node.center = anchor;
    node.anchor = std::make_shared<const Vector>(std::move(anchor));
    node.stream = mix_stream(mix_stream(seed, tree_id), kAnchorTag);
    return node;
}

Vector path_center(const Dataset& ds, const std::shared_ptr<const Vector>& anchor, std::span<const Index> path,
                   std::size_t meb_iters) {
    PointList pts;
    pts.reserve(path.size() + 1);
    if (anchor) pts.emplace_back(*anchor);
    for (Index i : path) pts.push_back(ds.row(i));
    return approx_meb_center(pts, meb_iters);
}

IndexList far_set(const Dataset& ds, PointRef center, std::size_t k) {
    if (k > ds.size()) {
        throw Error(ErrorCode::out_of_range, "k must lie in [0, n]");
    }
    auto& entries = scratch().entries;
    squared_distances(ds, center, entries);
    return canonical_far_set(entries, k, false);
}

std::vector<TreeNode> expand_node(const Dataset& ds, const TreeNode& node, const DerivedParams& dp) {
    check_tree_inputs(ds, dp, node);
    if (node.depth() >= dp.height || dp.top_k == 0) return {};
    const IndexList far = far_set(ds, node.center, dp.top_k);
    return children_from(ds, node, dp, far);
}

double total_variance(const Dataset& ds, std::span<const Index> rows) {
    if (rows.empty()) {
        throw Error(ErrorCode::empty_subset, "variance of an empty row set");
    }
    Vector centroid(ds.dim(), 0.0);
    for (Index i : rows) {
        if (i >= ds.size()) throw Error(ErrorCode::out_of_range, "row index out of range");
        const PointRef p = ds.row(i);
        for (std::size_t j = 0; j < p.size(); ++j) centroid[j] += p[j];
    }
    const double inv = 1.0 / static_cast<double>(rows.size());
    for (double& c : centroid) c *= inv;
    double acc = 0.0;
    for (Index i : rows) acc += squared_distance(ds.row(i), centroid);
    return acc * inv;
}

CandidateScore score_candidate(const Dataset& ds, PointRef center, std::size_t m) {
    if (m < 1 || m > ds.size()) {
        throw Error(ErrorCode::out_of_range, "m must lie in [1, n]");
    }
    std::vector<DistanceEntry> entries;
    squared_distances(ds, center, entries);
    std::span<DistanceEntry> all(entries);
    select_nearest(all, m);
    CandidateScore out;
    out.score = variance_of_first(ds, all.first(m));
    out.inliers.reserve(m);
    for (std::size_t i = 0; i < m; ++i) out.inliers.push_back(entries[i].index);
    std::sort(out.inliers.begin(), out.inliers.end());
    return out;
}

std::vector<Candidate> grow_tree(const Dataset& ds, const DerivedParams& dp, const TreeNode& root,
                                 std::size_t tree_id, unsigned threads) {
    check_tree_inputs(ds, dp, root);
    std::vector<Candidate> candidates;
    std::vector<TreeNode> layer{root};
    while (!layer.empty()) {
        std::vector<NodeOutcome> outcomes(layer.size());
        detail::parallel_for(layer.size(), threads,
                             [&](std::size_t i) { outcomes[i] = process_node(ds, layer[i], dp); });
        std::vector<TreeNode> next;
        for (std::size_t i = 0; i < layer.size(); ++i) {
            Candidate c;
            c.center = std::move(layer[i].center);
            c.path = std::move(layer[i].path);
            c.anchored = layer[i].anchor != nullptr;
            c.score = outcomes[i].score;
            c.radius = outcomes[i].radius;
            c.tree = tree_id;
            candidates.push_back(std::move(c));
            for (auto& child : outcomes[i].children) next.push_back(std::move(child));
        }
        layer = std::move(next);
    }
    return candidates;
}

std::vector<Candidate> grow_tree(const Dataset& ds, const Params& p, Index root, std::size_t tree_id) {
    const DerivedParams dp = derive_params(p, ds.size());
    return grow_tree(ds, dp, make_root(ds, root, p.seed, tree_id), tree_id, p.threads);
}

IndexList pick_roots(std::uint64_t seed, std::size_t n, std::size_t count) {
    if (count > n) {
        throw Error(ErrorCode::invalid_params, "forest size exceeds the number of points");
    }
    std::mt19937_64 rng(mix_stream(seed, kRootsTag));
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    IndexList roots;
    std::unordered_set<Index> seen;
    while (roots.size() < count) {
        const Index r = pick(rng);
        if (seen.insert(r).second) roots.push_back(r);
    }
    return roots;
}

std::vector<Candidate> boost_forest(const Dataset& ds, const Params& p, const DerivedParams& dp) {
    validate_knobs(p);
    const IndexList roots = pick_roots(p.seed, ds.size(), p.forest_size);
    std::vector<Candidate> all;
    for (std::size_t t = 0; t < roots.size(); ++t) {
        auto tree = grow_tree(ds, dp, make_root(ds, roots[t], p.seed, t), t, p.threads);
        std::move(tree.begin(), tree.end(), std::back_inserter(all));
    }
    return all;
}

std::vector<Candidate> boost_forest(const Dataset& ds, const Params& p) {
    return boost_forest(ds, p, derive_params(p, ds.size()));
}

std::size_t best_candidate(std::span<const Candidate> candidates) {
    if (candidates.empty()) {
        throw Error(ErrorCode::invalid_argument, "no candidates to choose from");
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        const Candidate& c = candidates[i];
        const Candidate& b = candidates[best];
        if (c.score < b.score || (c.score == b.score && c.radius < b.radius)) best = i;
    }
    return best;
}

namespace {

// Appends `rounds` re-rooted trees to `all`, each anchored at the current best.
void run_sequential(const Dataset& ds, const Params& p, const DerivedParams& dp, std::size_t first_tree,
                    std::size_t rounds, std::vector<Candidate>& all) {
    for (std::size_t r = 0; r < rounds; ++r) {
        const std::size_t tree_id = first_tree + r;
        Vector anchor = all[best_candidate(all)].center;
        auto tree = grow_tree(ds, dp, make_anchored_root(std::move(anchor), p.seed, tree_id), tree_id, p.threads);
        std::move(tree.begin(), tree.end(), std::back_inserter(all));
    }
}

}  // namespace

std::vector<Candidate> boost_sequential(const Dataset& ds, const Params& p, std::size_t rounds) {
    if (rounds < 1) {
        throw Error(ErrorCode::invalid_params, "sequential boosting needs at least one round");
    }
    Params first = p;
    first.forest_size = 1;
    const DerivedParams dp = derive_params(p, ds.size());
    auto all = boost_forest(ds, first, dp);
    run_sequential(ds, p, dp, 1, rounds - 1, all);
    return all;
}

RecognitionResult recognize(const Dataset& ds, const Params& p, const DerivedParams& dp) {
    validate_knobs(p);
    validate_derived(dp, ds.size());
    auto all = boost_forest(ds, p, dp);
    run_sequential(ds, p, dp, p.forest_size, p.sequential_rounds, all);

    const Candidate& best = all[best_candidate(all)];
    RecognitionResult out;
    CandidateScore scored = score_candidate(ds, best.center, dp.inliers);
    out.ball.center = best.center;
    out.ball.radius = 0.0;
    for (Index i : scored.inliers) out.ball.radius = std::max(out.ball.radius, squared_distance(ds.row(i), best.center));
    out.ball.radius = std::sqrt(out.ball.radius);
    out.inliers = std::move(scored.inliers);
    out.score = best.score;
    out.candidates_evaluated = all.size();
    out.derived = dp;
    return out;
}

RecognitionResult recognize(const Dataset& ds, const Params& p) { return recognize(ds, p, derive_params(p, ds.size())); }

}  // namespace mebo
