#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace pfre;

namespace {
auto r1 = euclidean_oracle(1, Norm::l2);
auto r2 = euclidean_oracle(2, Norm::l2);
}  // namespace

TEST(BuildCurve, Examples) {
    auto one = build_curve(std::vector<EuclideanPoint>{{4}}, r1);
    EXPECT_EQ(one.size(), 1u);
    EXPECT_EQ(one.prefix_length(1), 0.0);

    auto c = build_curve(std::vector<EuclideanPoint>{{0}, {1}, {3}}, r1);
    EXPECT_EQ(c.edge_length(1), 1.0);
    EXPECT_EQ(c.edge_length(2), 2.0);
    EXPECT_EQ(c.prefix_length(3), 3.0);

    auto t = build_curve(std::vector<EuclideanPoint>{{0, 0}, {3, 4}, {3, 5}}, r2);
    EXPECT_EQ(t.prefix_length(2), 5.0);
    EXPECT_EQ(t.prefix_length(3), 6.0);
}

TEST(BuildCurve, RejectsInvalidPoints) {
    EXPECT_THROW(build_curve(std::vector<EuclideanPoint>{}, r1), std::invalid_argument);
    EXPECT_THROW(build_curve(std::vector<EuclideanPoint>{{0}, {1, 2}}, r1), std::invalid_argument);
    EXPECT_THROW(build_curve(std::vector<EuclideanPoint>{{0}, {std::nan("")}}, r1),
                 std::invalid_argument);
}

TEST(BuildCurve, UnreachableGraphVertices) {
    auto g = std::make_shared<const WeightedGraph>(3, std::vector<GraphEdge>{{0, 1, 1}});
    EXPECT_THROW(build_curve(std::vector<GraphVertex>{0, 2}, graph_oracle(g)), UnreachableError);
    EXPECT_THROW(build_curve(std::vector<GraphVertex>{0, 7}, graph_oracle(g)), std::invalid_argument);
}

TEST(SubcurveLength, Examples) {
    auto c = build_curve(std::vector<EuclideanPoint>{{0}, {1}, {3}}, r1);
    EXPECT_EQ(subcurve_length(c, 2, 2), 0.0);
    EXPECT_EQ(subcurve_length(c, 1, 3), 3.0);
    EXPECT_EQ(subcurve_length(c, 2, 3), 2.0);
    EXPECT_THROW(subcurve_length(c, 0, 2), std::out_of_range);
    EXPECT_THROW(subcurve_length(c, 3, 2), std::out_of_range);
    EXPECT_THROW(subcurve_length(c, 1, 4), std::out_of_range);
}

TEST(Curve, PrefixIsBitExactSequentialSum) {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 50; ++t) {
        auto c = build_curve(gen::random_walk(100, 3, rng()), euclidean_oracle(3, Norm::l2));
        auto canon = c.canonical_prefix();
        for (std::size_t k = 1; k <= c.size(); ++k) ASSERT_EQ(c.prefix_length(k), canon[k - 1]);
    }
}

TEST(Curve, TriangleInequalityAgainstLength) {
    std::mt19937_64 rng(6);
    for (Norm p : {Norm::l1, Norm::l2, Norm::linf}) {
        auto o = euclidean_oracle(2, p);
        auto c = build_curve(gen::random_walk(64, 2, rng()), o);
        for (std::size_t a = 1; a <= c.size(); ++a)
            for (std::size_t b = a; b <= c.size(); ++b)
                ASSERT_LE(o(c[a], c[b]), subcurve_length(c, a, b) + 1e-9);
    }
}

TEST(Curve, HeadUpdatesUseTranslation) {
    auto c = build_curve(std::vector<EuclideanPoint>{{0}, {1}}, r1);
    c.push_front({-5}, 5.0);
    EXPECT_EQ(c.prefix_offset(), -5.0);
    EXPECT_EQ(c.prefix_length(1), 0.0);
    EXPECT_EQ(c.prefix_length(2), 5.0);
    EXPECT_EQ(c.prefix_length(3), 6.0);
    c.push_back({3}, 2.0);
    EXPECT_EQ(c.prefix_length(4), 8.0);
    c.pop_front();
    c.pop_back();
    EXPECT_EQ(c.size(), 2u);
    EXPECT_EQ(c.prefix_length(2), 1.0);
    c.pop_back();
    EXPECT_THROW(c.pop_back(), std::length_error);
    EXPECT_THROW(c.pop_front(), std::length_error);
}

TEST(Packedness, StraightSegmentAtMostTwo) {
    for (std::size_t k : {2, 3, 10, 40}) {
        auto c = build_curve(gen::line(k, 2), r2);
        auto rep = estimate_packedness(c, r2);
        EXPECT_LE(rep.c_lower, 2.0 + 1e-9) << k;
        EXPECT_GE(rep.c_lower, 1.0);
    }
    // dense radius sweep around the midpoint agrees with the bound
    auto c = build_curve(gen::line(9, 2), r2);
    for (int s = 1; s <= 200; ++s) {
        double r = 0.05 * s;
        double inside = 0;
        for (std::size_t e = 1; e < c.size(); ++e) {
            auto iv = detail::clip_segment(r2, c[e], c[e + 1], {4, 0}, r);
            if (iv) inside += (iv->second - iv->first) * c.edge_length(e);
        }
        EXPECT_LE(inside / r, 2.0 + 1e-9);
    }
}

TEST(Packedness, RetracedSegmentFiveTimes) {
    auto c = build_curve(gen::retrace(51, 5, 2), r2);
    auto rep = estimate_packedness(c, r2);
    EXPECT_GE(rep.c_lower, 10.0 - 1e-6);
    EXPECT_LE(rep.c_lower, 10.0 + 1e-6);  // analytic c is exactly 2 * reps
}

TEST(Packedness, TwoPointCurveIsExactlyTwo) {
    auto c = build_curve(std::vector<EuclideanPoint>{{0, 0}, {2, 0}}, r2);
    auto rep = estimate_packedness(c, r2);
    EXPECT_EQ(rep.c_lower, 2.0);
    EXPECT_EQ(rep.center, (EuclideanPoint{1, 0}));
}

TEST(Packedness, OtherNorms) {
    for (Norm p : {Norm::l1, Norm::linf}) {
        auto o = euclidean_oracle(2, p);
        auto c = build_curve(gen::retrace(31, 3, 2), o);
        auto rep = estimate_packedness(c, o);
        EXPECT_NEAR(rep.c_lower, 6.0, 1e-9) << to_string(p);
    }
}

TEST(Packedness, MonotoneUnderAppending) {
    std::mt19937_64 rng(9);
    for (int t = 0; t < 10; ++t) {
        auto pts = gen::random_walk(20, 2, rng());
        double prev = 0;
        for (std::size_t k = 2; k <= pts.size(); ++k) {
            std::vector<EuclideanPoint> head(pts.begin(), pts.begin() + k);
            double c = estimate_packedness(build_curve(head, r2), r2).c_lower;
            EXPECT_GE(c, prev - 1e-12);
            prev = c;
        }
    }
}

TEST(Packedness, RejectsDegenerateInput) {
    auto c = build_curve(std::vector<EuclideanPoint>{{0, 0}}, r2);
    EXPECT_THROW(estimate_packedness(c, r2), std::invalid_argument);
}
