#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "mebo/meb.hpp"
#include "mebo/metrics.hpp"
#include "mebo/rgd.hpp"
#include "mebo/select.hpp"
#include "mebo/synth.hpp"
#include "support.hpp"

using namespace mebo;
using namespace mebo::testing;

namespace {

DerivedParams shape(std::size_t height, std::size_t s, std::size_t k, std::size_t n) {
    DerivedParams dp;
    dp.height = height;
    dp.sample_size = s;
    dp.top_k = k;
    dp.inliers = n - k;
    dp.meb_iters = 4;
    return dp;
}

Dataset scatter(std::uint64_t seed, std::size_t n, std::size_t d) {
    std::mt19937_64 rng(seed);
    return Dataset::from_rows(random_points(rng, n, d));
}

std::size_t geometric(std::size_t s, std::size_t h) {
    std::size_t total = 0, layer = 1;
    for (std::size_t i = 0; i < h; ++i) {
        total += layer;
        layer *= s;
    }
    return total;
}

// Tiny instance: the 10 Gaussian rows form P_opt at gamma = 1/6.
struct Tiny {
    std::vector<Vector> pts = tiny_instance();
    Dataset ds = Dataset::from_rows(pts);
    double r_opt = brute_force_r_opt(pts, 10);
    Params params(std::uint64_t seed) const {
        Params p;
        p.gamma = 1.0 / 6.0;
        p.epsilon = 0.3;
        p.delta = 0.5;
        p.mu = 0.1;
        p.seed = seed;
        return p;
    }
};

const Tiny& tiny() {
    static const Tiny t;
    return t;
}

bool covers(const Dataset& ds, PointRef center, std::size_t m, double radius) {
    return nearest_m(ds, center, m).pivot <= radius * (1.0 + 1e-12);
}

}  // namespace

TEST_CASE("tiny instance: the Gaussian rows are the optimal inlier set") {
    const auto& t = tiny();
    std::vector<Vector> first(t.pts.begin(), t.pts.begin() + 10);
    CHECK(exact_meb_oracle(refs(first)).radius == doctest::Approx(t.r_opt).epsilon(1e-12));
    const auto dp = derive_params(t.params(0), 12);
    CHECK(dp.height == 8);
    CHECK(dp.top_k == 3);
    CHECK(dp.inliers == 9);
    CHECK(dp.sample_size == 14);
}

TEST_CASE("candidate counts follow the geometric series") {
    const Dataset ds = scatter(1, 60, 3);
    SUBCASE("one child per node, height 2") {
        const auto c = grow_tree(ds, shape(2, 1, 10, 60), make_root(ds, 5, 0, 0), 0);
        REQUIRE(c.size() == 2);
        CHECK(c[0].path == IndexList{5});
    }
    SUBCASE("height 1 is the root alone") {
        const auto c = grow_tree(ds, shape(1, 4, 10, 60), make_root(ds, 7, 0, 0), 0);
        REQUIRE(c.size() == 1);
        CHECK(c[0].center == Vector(ds.row(7).begin(), ds.row(7).end()));
    }
    SUBCASE("height 3, two children") {
        CHECK(grow_tree(ds, shape(3, 2, 10, 60), make_root(ds, 0, 9, 0), 0).size() == 7);
    }
    SUBCASE("random shapes") {
        std::mt19937_64 rng(3);
        for (int trial = 0; trial < 20; ++trial) {
            const std::size_t h = 1 + rng() % 4, s = 1 + rng() % 4, k = s + rng() % 10;
            CHECK(grow_tree(ds, shape(h, s, k, 60), make_root(ds, rng() % 60, rng(), 0), 0).size() ==
                  geometric(s, h));
        }
    }
}

TEST_CASE("forest of three trees, height 3, two children") {
    const Dataset ds = scatter(2, 80, 2);
    Params p;
    p.forest_size = 3;
    p.seed = 4;
    const auto all = boost_forest(ds, p, shape(3, 2, 12, 80));
    CHECK(all.size() == 21);
    std::set<std::size_t> trees;
    for (const auto& c : all) trees.insert(c.tree);
    CHECK(trees == std::set<std::size_t>{0, 1, 2});
}

TEST_CASE("every child was in its parent's far set") {
    const Dataset ds = scatter(5, 300, 4);
    const DerivedParams dp = shape(4, 3, 40, 300);
    const auto all = grow_tree(ds, dp, make_root(ds, 11, 77, 0), 0);
    for (const auto& c : all) {
        if (c.path.size() < 2) continue;
        const std::span<const Index> parent(c.path.data(), c.path.size() - 1);
        const Vector pc = path_center(ds, nullptr, parent, dp.meb_iters);
        const IndexList far = far_set(ds, pc, dp.top_k);
        CHECK(std::binary_search(far.begin(), far.end(), c.path.back()));
        CHECK(c.center == path_center(ds, nullptr, c.path, dp.meb_iters));
    }
}

TEST_CASE("expand_node samples distinct far-set rows") {
    const Dataset ds = scatter(6, 100, 3);
    const DerivedParams dp = shape(3, 5, 8, 100);
    const TreeNode root = make_root(ds, 3, 1, 0);
    const auto kids = expand_node(ds, root, dp);
    REQUIRE(kids.size() == 5);
    const IndexList far = far_set(ds, root.center, 8);
    std::set<Index> seen;
    for (const auto& k : kids) {
        CHECK(std::binary_search(far.begin(), far.end(), k.path.back()));
        seen.insert(k.path.back());
    }
    CHECK(seen.size() == 5);
    CHECK(expand_node(ds, root, shape(3, 20, 8, 100)).size() == 8);
    CHECK(expand_node(ds, root, shape(1, 5, 8, 100)).empty());
}

TEST_CASE("score examples") {
    const Dataset same = Dataset::from_rows({{1, 1}, {1, 1}, {1, 1}, {9, 9}});
    const auto s = score_candidate(same, Vector{1, 1}, 3);
    CHECK(s.score == 0.0);
    CHECK(s.inliers == IndexList{0, 1, 2});

    const Dataset pair = Dataset::from_rows({{0, 0}, {2, 0}, {50, 50}});
    CHECK(score_candidate(pair, Vector{1, 0}, 2).score == doctest::Approx(1.0));
    CHECK(total_variance(pair, IndexList{0, 1}) == doctest::Approx(1.0));

    CHECK_THROWS_AS(score_candidate(pair, Vector{0, 0}, 0), Error);
    CHECK_THROWS_AS(score_candidate(pair, Vector{0, 0}, 4), Error);
    CHECK_THROWS_AS(total_variance(pair, IndexList{}), Error);
}

TEST_CASE("score matches the pairwise variance oracle") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 5 + rng() % 200, d = 1 + rng() % 10;
        const Dataset ds = Dataset::from_rows(random_points(rng, n, d, -5.0, 5.0));
        const Vector c(d, 0.5);
        const std::size_t m = 1 + rng() % n;
        const auto s = score_candidate(ds, c, m);
        CHECK(s.inliers == sorted(nearest_m(ds, c, m).indices));
        CHECK(s.score == doctest::Approx(pairwise_variance(ds, s.inliers)).epsilon(1e-9));
    }
}

TEST_CASE("identical cluster plus scattered outliers is recovered exactly") {
    std::vector<Vector> rows(35, Vector{2.0, -1.0, 0.5});
    std::mt19937_64 rng(10);
    for (auto& p : random_points(rng, 15, 3, -30.0, 30.0)) rows.push_back(p);
    const Dataset ds = Dataset::from_rows(rows);
    IndexList truth(35);
    std::iota(truth.begin(), truth.end(), 0);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Params p;
        p.gamma = 0.2;
        p.delta = 0.5;
        p.seed = seed;
        const auto r = recognize(ds, p);
        CHECK(r.derived.inliers == 35);
        CHECK(r.score == 0.0);
        CHECK(f1_score(r.inliers, truth, ds.size()).f1 == 1.0);
    }
}

TEST_CASE("results do not depend on the thread count") {
    const auto data = gen_highdim(1500, 20, 0.3, 3);
    Params p;
    p.gamma = 0.3;
    p.epsilon = 0.9;
    p.delta = 0.2;
    p.mu = 0.5;
    p.forest_size = 2;
    p.sequential_rounds = 1;
    p.seed = 12;
    const auto a = recognize(data.points, p);
    p.threads = 4;
    const auto b = recognize(data.points, p);
    CHECK(a.ball.center == b.ball.center);
    CHECK(a.ball.radius == b.ball.radius);
    CHECK(a.inliers == b.inliers);
    CHECK(a.score == b.score);
    CHECK(a.candidates_evaluated == b.candidates_evaluated);
}

TEST_CASE("a one-tree forest and a one-round sequence equal grow_tree") {
    const Dataset ds = scatter(13, 200, 5);
    Params p;
    p.gamma = 0.2;
    p.epsilon = 0.9;
    p.seed = 21;
    const Index root = pick_roots(p.seed, ds.size(), 1)[0];
    const auto single = grow_tree(ds, p, root, 0);
    const auto forest = boost_forest(ds, p);
    const auto seq = boost_sequential(ds, p, 1);
    REQUIRE(single.size() == forest.size());
    REQUIRE(single.size() == seq.size());
    for (std::size_t i = 0; i < single.size(); ++i) {
        CHECK(single[i].path == forest[i].path);
        CHECK(single[i].center == seq[i].center);
        CHECK(single[i].score == seq[i].score);
    }
    CHECK_THROWS_AS(boost_sequential(ds, p, 0), Error);
}

TEST_CASE("sequential rounds never lose the best score") {
    const auto data = gen_highdim(800, 10, 0.4, 9);
    Params p;
    p.gamma = 0.4;
    p.epsilon = 0.9;
    p.delta = 0.2;
    p.mu = 0.8;
    p.seed = 5;
    const auto all = boost_sequential(data.points, p, 4);
    double best = INFINITY;
    std::size_t anchored_trees = 0;
    for (std::size_t t = 0; t < 4; ++t) {
        for (const auto& c : all) {
            if (c.tree == t) best = std::min(best, c.score);
        }
        const auto upto = std::count_if(all.begin(), all.end(), [&](const Candidate& c) { return c.tree <= t; });
        std::vector<Candidate> prefix(all.begin(), all.begin() + upto);
        CHECK(prefix[best_candidate(prefix)].score == best);
    }
    for (const auto& c : all) {
        if (c.tree > 0 && c.path.empty()) ++anchored_trees;
        CHECK(c.anchored == (c.tree > 0));
    }
    CHECK(anchored_trees == 3);
}

TEST_CASE("pick_roots gives distinct rows") {
    const auto roots = pick_roots(3, 10, 10);
    CHECK(sorted(roots) == IndexList{0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
    CHECK(pick_roots(3, 100, 4) == pick_roots(3, 100, 4));
    CHECK_THROWS_AS(pick_roots(3, 5, 6), Error);
}

TEST_CASE("a sample from the far set reaches the optimal set (statistical)") {
    // 180 tight inliers, 20 remote outliers; P_opt is the inlier block.
    const auto data = gen_highdim(200, 3, 0.1, 4);
    Params p;
    p.gamma = 0.1;
    p.epsilon = 0.9;
    p.delta = 0.5;
    p.mu = 0.1;
    const auto dp = derive_params(p, 200);
    std::size_t hits = 0, trials = 0;
    std::mt19937_64 rng(1);
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const TreeNode root = make_root(data.points, rng() % 200, seed, 0);
        const auto kids = expand_node(data.points, root, dp);
        ++trials;
        hits += std::any_of(kids.begin(), kids.end(), [&](const TreeNode& k) { return data.labels[k.path.back()] != 0; });
    }
    const double target = 1.0 - p.mu / static_cast<double>(dp.height);
    const double rate = static_cast<double>(hits) / static_cast<double>(trials);
    CHECK(rate >= target - 3.0 * std_error(target, trials));
}

TEST_CASE("a root-to-leaf path inside the optimal set exists (statistical)") {
    const auto data = gen_highdim(200, 3, 0.1, 4);
    Params p;
    p.gamma = 0.1;
    p.epsilon = 0.9;
    p.delta = 0.5;
    p.mu = 0.1;
    const auto dp = derive_params(p, 200);
    const std::size_t trials = 200;
    std::size_t hits = 0;
    for (std::uint64_t seed = 0; seed < trials; ++seed) {
        p.seed = seed;
        const auto all = grow_tree(data.points, p, pick_roots(seed, 200, 1)[0], 0);
        hits += std::any_of(all.begin(), all.end(), [&](const Candidate& c) {
            return c.path.size() == dp.height &&
                   std::all_of(c.path.begin(), c.path.end(), [&](Index i) { return data.labels[i] != 0; });
        });
    }
    const double target = (1.0 - p.gamma) * (1.0 - p.mu);
    CHECK(static_cast<double>(hits) / trials >= target - 3.0 * std_error(target, trials));
}

TEST_CASE("radius growth along optimal paths") {
    // Exact centers: whenever the parent's m-coverage radius R exceeds
    // (1+eps) r_opt and the new row lies at distance >= R from the parent
    // center, the child's radius is at least R/2 + r_parent^2 / (2R).
    const auto& t = tiny();
    std::size_t checked = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const Params p = t.params(seed);
        const auto dp = derive_params(p, 12);
        const auto all = grow_tree(t.ds, p, pick_roots(seed, 12, 1)[0], 0);
        for (const auto& c : all) {
            if (c.path.size() < 2) continue;
            if (!std::all_of(c.path.begin(), c.path.end(), [](Index i) { return i < 10; })) continue;
            const PointList parent = gather(t.ds, std::span<const Index>(c.path.data(), c.path.size() - 1));
            const Ball pb = exact_meb_oracle(parent);
            const double big_r = nearest_m(t.ds, pb.center, dp.inliers).pivot;
            if (big_r <= (1.0 + p.epsilon) * t.r_opt) continue;
            if (distance(t.ds.row(c.path.back()), pb.center) < big_r) continue;
            const Ball cb = exact_meb_oracle(gather(t.ds, c.path));
            CHECK(cb.radius >= big_r / 2.0 + pb.radius * pb.radius / (2.0 * big_r) - 1e-9);
            ++checked;
        }
    }
    MESSAGE("checked " << checked);
    CHECK(checked > 50);
}

TEST_CASE("some candidate covers m points within (1+eps) r_opt (statistical)") {
    const auto& t = tiny();
    const std::size_t trials = 200;
    std::size_t hits = 0;
    for (std::uint64_t seed = 0; seed < trials; ++seed) {
        const Params p = t.params(seed);
        const auto dp = derive_params(p, 12);
        const auto all = boost_forest(t.ds, p);
        hits += std::any_of(all.begin(), all.end(), [&](const Candidate& c) {
            return covers(t.ds, c.center, dp.inliers, (1.0 + p.epsilon) * t.r_opt);
        });
    }
    const double target = (1.0 - 1.0 / 6.0) * (1.0 - 0.1);
    CHECK(static_cast<double>(hits) / trials >= target - 3.0 * std_error(target, trials));
}

TEST_CASE("forest success grows with the number of roots (statistical)") {
    // A strict radius makes a single tree fail often enough to see the trend.
    const auto& t = tiny();
    const std::size_t trials = 200;
    std::vector<std::size_t> hits(4, 0);
    for (std::uint64_t seed = 0; seed < trials; ++seed) {
        Params p = t.params(seed);
        p.epsilon = 0.9;
        p.mu = 0.9;
        p.forest_size = 3;
        const auto dp = derive_params(p, 12);
        const auto all = boost_forest(t.ds, p);
        bool ok = false;
        for (std::size_t kappa = 1; kappa <= 3; ++kappa) {
            for (const auto& c : all) {
                if (c.tree == kappa - 1 && covers(t.ds, c.center, dp.inliers, t.r_opt)) ok = true;
            }
            hits[kappa] += ok;
        }
    }
    const double single = static_cast<double>(hits[1]) / trials;
    for (std::size_t kappa = 2; kappa <= 3; ++kappa) {
        CHECK(hits[kappa] >= hits[kappa - 1]);
        const double bound = 1.0 - std::pow(1.0 - single, static_cast<double>(kappa));
        CHECK(static_cast<double>(hits[kappa]) / trials >= bound - 3.0 * std_error(bound, trials));
    }
}

TEST_CASE("three sequential rounds do not hurt the median F1") {
    const std::size_t seeds = 20;
    std::vector<double> one, three;
    for (std::uint64_t seed = 0; seed < seeds; ++seed) {
        const auto data = gen_highdim(1000, 100, 0.5, seed);
        const IndexList truth = inlier_rows(data.labels);
        Params p;
        p.gamma = 0.5;
        p.epsilon = 0.9;
        p.delta = 0.2;
        p.mu = 0.9;
        p.seed = seed;
        p.sequential_rounds = 0;
        one.push_back(f1_score(recognize(data.points, p).inliers, truth, 1000).f1);
        p.sequential_rounds = 2;
        three.push_back(f1_score(recognize(data.points, p).inliers, truth, 1000).f1);
    }
    std::sort(one.begin(), one.end());
    const double median_one = (one[seeds / 2 - 1] + one[seeds / 2]) / 2.0;
    std::sort(three.begin(), three.end());
    const double median_three = (three[seeds / 2 - 1] + three[seeds / 2]) / 2.0;
    CHECK(median_three >= median_one);
}

TEST_CASE("equal scores go to the smaller radius, then the earliest") {
    std::vector<Candidate> c(4);
    c[0].score = 2.0;
    c[0].radius = 5.0;
    c[1].score = 1.0;
    c[1].radius = 3.0;
    c[2].score = 1.0;
    c[2].radius = 2.0;
    c[3].score = 1.0;
    c[3].radius = 2.0;
    CHECK(best_candidate(c) == 2);
    CHECK_THROWS_AS(best_candidate(std::vector<Candidate>{}), Error);
}

TEST_CASE("the same inlier set scores identically from any center") {
    // Both centers select rows {0, 1, 2} but visit them in different orders.
    const Dataset ds = Dataset::from_rows({{0.1, 0.0}, {0.0, 0.3}, {0.7, 0.2}, {50.0, 50.0}});
    const auto a = score_candidate(ds, Vector{0.0, 0.0}, 3);
    const auto b = score_candidate(ds, Vector{0.7, 0.2}, 3);
    REQUIRE(a.inliers == b.inliers);
    CHECK(a.score == b.score);
    const auto tree = grow_tree(ds, shape(3, 2, 1, 4), make_root(ds, 0, 1, 0), 0);
    for (const auto& c : tree) {
        CHECK(c.radius == doctest::Approx(nearest_m(ds, c.center, 3).pivot).epsilon(1e-15));
    }
}
