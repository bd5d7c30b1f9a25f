#include <random>

#include "doctest.h"
#include "mebo/metrics.hpp"

using namespace mebo;

TEST_CASE("F1 examples") {
    const IndexList truth{0, 1, 2, 3};
    const auto perfect = f1_score(truth, truth, 10);
    CHECK(perfect.precision == 1.0);
    CHECK(perfect.recall == 1.0);
    CHECK(perfect.f1 == 1.0);

    const auto half = f1_score(IndexList{2, 3, 4, 5}, truth, 10);
    CHECK(half.precision == 0.5);
    CHECK(half.recall == 0.5);
    CHECK(half.f1 == 0.5);

    const auto wide = f1_score(IndexList{0, 1, 2, 3, 4, 5, 6, 7}, truth, 10);
    CHECK(wide.precision == 0.5);
    CHECK(wide.recall == 1.0);
    CHECK(wide.f1 == doctest::Approx(2.0 / 3.0));

    const auto disjoint = f1_score(IndexList{5, 6}, truth, 10);
    CHECK(disjoint.f1 == 0.0);

    const auto none = f1_score(IndexList{}, truth, 10);
    CHECK(none.empty_prediction);
    CHECK(none.precision == 0.0);
    CHECK(none.f1 == 0.0);
}

TEST_CASE("duplicates and order do not matter") {
    CHECK(f1_score(IndexList{3, 1, 1, 0}, IndexList{0, 1, 3}, 5).f1 == 1.0);
}

TEST_CASE("indices must lie below n") {
    CHECK_THROWS_AS(f1_score(IndexList{5}, IndexList{0}, 5), Error);
    CHECK_THROWS_AS(f1_score(IndexList{0}, IndexList{7}, 5), Error);
}

TEST_CASE("bounds and symmetry on random sets") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 1 + rng() % 60;
        IndexList a, b;
        for (Index i = 0; i < n; ++i) {
            if (rng() % 2) a.push_back(i);
            if (rng() % 2) b.push_back(i);
        }
        if (b.empty()) b.push_back(0);
        const auto s = f1_score(a, b, n);
        CHECK(s.f1 >= 0.0);
        CHECK(s.f1 <= 2.0 * std::min(s.precision, s.recall) + 1e-15);
        CHECK(s.f1 <= std::max(s.precision, s.recall) + 1e-15);
        if (a.size() == b.size() && !a.empty()) CHECK(f1_score(b, a, n).f1 == doctest::Approx(s.f1));
    }
}

TEST_CASE("class matching finds the best permutation") {
    // labels: rows 0-3 class 1, rows 4-7 class 2, rows 8-9 outliers
    const std::vector<int> labels{1, 1, 1, 1, 2, 2, 2, 2, 0, 0};
    const std::vector<IndexList> predicted{{4, 5, 6, 7}, {0, 1, 2, 8}};
    const auto m = match_classes(predicted, labels);
    REQUIRE(m.label.size() == 2);
    CHECK(m.label[0] == 2);
    CHECK(m.label[1] == 1);
    CHECK(m.per_class[0].f1 == 1.0);
    CHECK(m.per_class[1].f1 == doctest::Approx(0.75));
    CHECK(m.average_f1 == doctest::Approx(0.875));
}

TEST_CASE("extra predicted classes match nothing") {
    const std::vector<int> labels{1, 1, 0, 0};
    const auto m = match_classes({{0, 1}, {2}}, labels);
    CHECK(m.label[0] == 1);
    CHECK(m.label[1] == 0);
    CHECK(m.per_class[1].f1 == 0.0);
    CHECK(m.average_f1 == doctest::Approx(0.5));
}
