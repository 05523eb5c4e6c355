#include <gtest/gtest.h>

#include <map>
#include <random>

#include "support.hpp"

using namespace pfre;

namespace {

auto r1 = euclidean_oracle(1, Norm::l2);

Curve<EuclideanPoint> c1(std::vector<double> xs) {
    std::vector<EuclideanPoint> pts;
    for (double x : xs) pts.push_back({x});
    return build_curve(pts, r1);
}

QueryParams qp(double eps, double rho = 0.0, std::size_t i = 0, std::size_t j = 0) {
    QueryParams p;
    p.epsilon = eps;
    p.rho = rho;
    p.i = i;
    p.j = j;
    return p;
}

template <class Index, class Q, class O>
void check_decide(const Index& idx, const Q& Qc, double eps, double rho, double D, const O& qo,
                  const std::string& ctx) {
    auto v = decide(idx, Qc, qp(eps, rho), qo).verdict;
    if (v == Verdict::greater)
        ASSERT_GT(D, rho - 1e-9) << ctx;
    else
        ASSERT_LE(D, (1 + eps) * rho + 1e-9) << ctx;
}

}  // namespace

TEST(ExactFrechet, Examples) {
    auto P = c1({0, 10});
    EXPECT_EQ(exact_discrete_frechet(P, P, r1), 0.0);
    EXPECT_EQ(exact_discrete_frechet(P, c1({0}), r1), 10.0);
    EXPECT_EQ(exact_discrete_frechet(P, c1({5}), r1), 5.0);
    EXPECT_THROW(exact_discrete_frechet(P, P, r1, 3), BudgetExceeded);
}

TEST(ExactFrechet, MatchesWalkEnumeration) {
    // brute force over all monotone walks on tiny lattices
    std::mt19937_64 rng(51);
    for (int t = 0; t < 200; ++t) {
        std::size_t n = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
        std::size_t m = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
        auto o = euclidean_oracle(2, Norm::l2);
        auto P = build_curve(gen::random_walk(n, 2, rng()), o);
        auto Q = build_curve(gen::random_walk(m, 2, rng()), o);
        double best = std::numeric_limits<double>::infinity();
        auto walk = [&](auto&& self, std::size_t a, std::size_t b, double mx) -> void {
            mx = std::max(mx, o(P[a], Q[b]));
            if (a == n && b == m) {
                best = std::min(best, mx);
                return;
            }
            if (a < n) self(self, a + 1, b, mx);
            if (b < m) self(self, a, b + 1, mx);
            if (a < n && b < m) self(self, a + 1, b + 1, mx);
        };
        walk(walk, 1, 1, 0.0);
        ASSERT_EQ(exact_discrete_frechet(P, Q, o), best);
    }
}

TEST(Decide, Examples) {
    auto idx = make_index(std::vector<EuclideanPoint>{{0}, {10}}, r1);
    auto Q0 = c1({0});
    EXPECT_EQ(decide(idx, idx.curve(), qp(0.5, 1.0)).verdict, Verdict::at_most);
    EXPECT_EQ(decide(idx, Q0, qp(0.1, 5.0)).verdict, Verdict::greater);
    EXPECT_EQ(decide(idx, Q0, qp(0.1, 20.0)).verdict, Verdict::at_most);
    EXPECT_EQ(to_string(Verdict::at_most), "AT_MOST_ONE_PLUS_EPS_RHO");
    EXPECT_EQ(to_string(Verdict::greater), "GREATER_THAN_RHO");
}

TEST(Decide, RhoZeroIsExactReachability) {
    auto idx = make_index(std::vector<EuclideanPoint>{{0}, {1}, {2}}, r1);
    EXPECT_EQ(decide(idx, c1({0, 1, 2}), qp(0.5, 0.0)).verdict, Verdict::at_most);
    EXPECT_EQ(decide(idx, c1({0, 2}), qp(0.5, 0.0)).verdict, Verdict::greater);
}

TEST(Decide, RejectsBadParameters) {
    auto idx = make_index(std::vector<EuclideanPoint>{{0}, {1}}, r1);
    auto Q = c1({0});
    EXPECT_THROW(decide(idx, Q, qp(0.0, 1)), std::invalid_argument);
    EXPECT_THROW(decide(idx, Q, qp(1.0, 1)), std::invalid_argument);
    EXPECT_THROW(decide(idx, Q, qp(0.5, -1)), std::invalid_argument);
    EXPECT_THROW(decide(idx, Q, qp(0.5, 1, 2, 3)), std::out_of_range);
    EXPECT_THROW(decide(idx, Q, qp(0.6, 1), perturbed_oracle(r1, 0.2, 1)), std::invalid_argument);
}

TEST(Decide, OneSidedExactOracle) {
    std::mt19937_64 rng(52);
    for (int t = 0; t < 500; ++t) {
        auto inst = fixture::random_euclidean(rng);
        auto idx = make_index(inst.P, inst.oracle);
        auto Q = build_curve(inst.Q, inst.oracle);
        double D = exact_discrete_frechet(idx.curve(), Q, inst.oracle);
        for (double eps : {0.1, 0.5, 0.9})
            for (double f : {0.5, 1.0, 2.0})
                check_decide(idx, Q, eps, f * D, D, inst.oracle, "trial " + std::to_string(t));
    }
}

TEST(Decide, OneSidedRandomThresholds) {
    std::mt19937_64 rng(53);
    for (int t = 0; t < 300; ++t) {
        auto inst = fixture::random_euclidean(rng);
        auto idx = make_index(inst.P, inst.oracle);
        auto Q = build_curve(inst.Q, inst.oracle);
        double D = exact_discrete_frechet(idx.curve(), Q, inst.oracle);
        double rho = std::uniform_real_distribution<double>(0, 2.5)(rng) * (D + 0.1);
        check_decide(idx, Q, 0.3, rho, D, inst.oracle, "trial " + std::to_string(t));
    }
}

TEST(Decide, OneSidedPerturbedOracle) {
    std::mt19937_64 rng(54);
    for (int t = 0; t < 150; ++t) {
        auto inst = fixture::random_euclidean(rng);
        auto idx = make_index(inst.P, inst.oracle);
        auto Q = build_curve(inst.Q, inst.oracle);
        double D = exact_discrete_frechet(idx.curve(), Q, inst.oracle);
        for (double eps : {0.1, 0.5, 0.9})
            for (std::uint64_t seed = 1; seed <= 5; ++seed) {
                auto po = perturbed_oracle(inst.oracle, eps / 6, seed);
                for (double f : {0.5, 1.0, 2.0})
                    check_decide(idx, Q, eps, f * D, D, po, "trial " + std::to_string(t));
            }
    }
}

TEST(Decide, OneSidedGraph) {
    std::mt19937_64 rng(55);
    for (int t = 0; t < 200; ++t) {
        auto inst = fixture::random_graph_instance(rng);
        auto idx = make_index(inst.P, inst.oracle);
        auto Q = build_curve(inst.Q, inst.oracle);
        double D = exact_discrete_frechet(idx.curve(), Q, inst.oracle);
        for (double eps : {0.1, 0.5, 0.9})
            for (double f : {0.5, 1.0, 2.0}) {
                check_decide(idx, Q, eps, f * D, D, inst.oracle, "trial " + std::to_string(t));
                check_decide(idx, Q, eps, f * D, D, perturbed_oracle(inst.oracle, eps / 6, t),
                             "perturbed trial " + std::to_string(t));
            }
    }
}

TEST(Decide, MonotoneInRho) {
    std::mt19937_64 rng(56);
    std::size_t violations = 0, ladders = 0;
    for (int t = 0; t < 300; ++t) {
        auto inst = fixture::random_euclidean(rng);
        auto idx = make_index(inst.P, inst.oracle);
        auto Q = build_curve(inst.Q, inst.oracle);
        double D = exact_discrete_frechet(idx.curve(), Q, inst.oracle);
        bool seen_at_most = false;
        for (int s = 0; s <= 40; ++s) {
            double rho = (D + 0.01) * 0.05 * s;
            bool at_most = decide(idx, Q, qp(0.5, rho)).verdict == Verdict::at_most;
            if (seen_at_most && !at_most) ++violations;
            seen_at_most = seen_at_most || at_most;
        }
        ++ladders;
    }
    EXPECT_EQ(violations, 0u) << "over " << ladders << " ladders";
}

TEST(Decide, SubcurveMatchesExtractedCurve) {
    // lattice data under L1: prefix sums are exact, so both paths see identical numbers
    std::mt19937_64 rng(57);
    auto o = euclidean_oracle(2, Norm::l1);
    for (int t = 0; t < 200; ++t) {
        std::size_t n = std::uniform_int_distribution<std::size_t>(1, 60)(rng);
        auto idx = make_index(gen::random_walk(n, 2, rng(), true), o);
        auto Q = build_curve(gen::random_walk(std::uniform_int_distribution<std::size_t>(1, 30)(rng), 2,
                                              rng(), true),
                             o);
        std::size_t i = std::uniform_int_distribution<std::size_t>(1, n)(rng);
        std::size_t j = std::uniform_int_distribution<std::size_t>(i, n)(rng);
        auto sub = make_index(std::vector<EuclideanPoint>(idx.curve().points().begin() + (i - 1),
                                                          idx.curve().points().begin() + j),
                              o);
        double D = exact_discrete_frechet(sub.curve(), Q, o);
        for (double rho : {0.5 * D, D, 2 * D, D + 1}) {
            auto a = decide(idx, Q, qp(0.5, rho, i, j));
            auto b = decide(sub, Q, qp(0.5, rho));
            ASSERT_EQ(a.verdict, b.verdict) << "trial " << t;
            ASSERT_EQ(a.cells_pushed, b.cells_pushed);
        }
        auto va = value(idx, Q, qp(0.5, 0, i, j));
        auto vb = value(sub, Q, qp(0.5));
        ASSERT_TRUE(fixture::in_sandwich(va.nu, D, 0.5)) << va.nu << " vs " << D;
        ASSERT_TRUE(fixture::in_sandwich(vb.nu, D, 0.5));
    }
}

TEST(Value, Examples) {
    auto idx = make_index(std::vector<EuclideanPoint>{{0}, {10}}, r1);
    EXPECT_NEAR(value(idx, idx.curve(), qp(0.5)).nu, 0.0, 1e-9);
    double nu = value(idx, c1({5}), qp(0.1)).nu;
    EXPECT_GE(nu, 4.5);
    EXPECT_LE(nu, 5.5);

    auto single = make_index(std::vector<EuclideanPoint>{{3}}, r1);
    EXPECT_EQ(value(single, single.curve(), qp(0.5)).nu, 0.0);
    EXPECT_NEAR(value(single, c1({3, 7}), qp(0.5)).nu, 4.0, 2.0);
}

TEST(Value, IdenticalCurvesGiveZero) {
    std::mt19937_64 rng(58);
    for (int t = 0; t < 50; ++t) {
        auto inst = fixture::random_euclidean(rng);
        auto idx = make_index(inst.P, inst.oracle);
        EXPECT_NEAR(value(idx, idx.curve(), qp(0.5)).nu, 0.0, 1e-9);
    }
}

TEST(Value, SandwichEuclidean) {
    std::mt19937_64 rng(59);
    for (int t = 0; t < 500; ++t) {
        auto inst = fixture::random_euclidean(rng);
        auto idx = make_index(inst.P, inst.oracle);
        auto Q = build_curve(inst.Q, inst.oracle);
        double D = exact_discrete_frechet(idx.curve(), Q, inst.oracle);
        for (double eps : {0.1, 0.5, 0.9}) {
            auto r = value(idx, Q, qp(eps));
            ASSERT_TRUE(fixture::in_sandwich(r.nu, D, eps))
                << "trial " << t << " eps " << eps << " nu " << r.nu << " D " << D;
            ASSERT_TRUE(r.rho_monotone);
            ASSERT_GE(r.nu, 0.0);
        }
    }
}

TEST(Value, SandwichGraph) {
    std::mt19937_64 rng(60);
    for (int t = 0; t < 200; ++t) {
        auto inst = fixture::random_graph_instance(rng);
        auto idx = make_index(inst.P, inst.oracle);
        auto Q = build_curve(inst.Q, inst.oracle);
        double D = exact_discrete_frechet(idx.curve(), Q, inst.oracle);
        for (double eps : {0.1, 0.5, 0.9}) {
            auto r = value(idx, Q, qp(eps));
            ASSERT_TRUE(fixture::in_sandwich(r.nu, D, eps)) << "trial " << t;
        }
    }
}

TEST(Value, SandwichPerturbedOracle) {
    std::mt19937_64 rng(61);
    for (int t = 0; t < 200; ++t) {
        auto inst = fixture::random_euclidean(rng);
        auto idx = make_index(inst.P, inst.oracle);
        auto Q = build_curve(inst.Q, inst.oracle);
        double D = exact_discrete_frechet(idx.curve(), Q, inst.oracle);
        for (double eps : {0.1, 0.5, 0.9}) {
            auto r = value(idx, Q, qp(eps), perturbed_oracle(inst.oracle, eps / 6, t + 1));
            ASSERT_TRUE(fixture::in_sandwich(r.nu, D, eps)) << "trial " << t;
        }
    }
}

TEST(Value, SearchCasesAllOccur) {
    std::mt19937_64 rng(62);
    std::map<std::string, int> seen;
    for (int t = 0; t < 300; ++t) {
        auto inst = fixture::random_euclidean(rng);
        auto idx = make_index(inst.P, inst.oracle);
        auto Q = build_curve(inst.Q, inst.oracle);
        auto r = value(idx, Q, qp(std::uniform_real_distribution<double>(0.05, 0.95)(rng)));
        ++seen[to_string(r.search_case)];
        ASSERT_LE(r.bracket_lo, r.bracket_hi);
        ASSERT_EQ(r.lambda, r.bracket_lo);
    }
    EXPECT_GT(seen["a"] + seen["b"], 0);
    EXPECT_GT(seen["beyond"], 0);
}

TEST(ZeroBound, StraightLineDecision) {
    const double eps = 0.5, c = 2.0;
    for (std::size_t n : {64, 1000, 5000}) {
        auto idx = make_index(gen::line(n, 2), euclidean_oracle(2, Norm::l2));
        std::mt19937_64 rng(n);
        for (std::size_t m : {1, 7, 32}) {
            auto Qp = gen::line(m, 2);
            std::normal_distribution<double> u(0, 3);
            for (auto& p : Qp) {
                p[0] *= double(n) / double(m);
                p[1] += u(rng);
            }
            auto Q = build_curve(Qp, euclidean_oracle(2, Norm::l2));
            for (double rho : {0.5, 3.0, 10.0, 100.0, double(n)}) {
                auto o = decide(idx, Q, qp(eps, rho));
                ASSERT_LE(double(o.cells_pushed), 8 * (c * 6 / eps) * double(m));
            }
        }
    }
}

TEST(ZeroBound, RetracedDecision) {
    const double eps = 0.5;
    for (std::size_t reps : {2, 5}) {
        auto pts = gen::retrace(400, reps, 2);
        auto idx = make_index(pts, euclidean_oracle(2, Norm::l2));
        double c = 2.0 * reps;
        for (std::size_t m : {1, 16}) {
            auto Q = build_curve(gen::retrace(m + 1, 1, 2), euclidean_oracle(2, Norm::l2));
            for (double rho : {0.01, 0.1, 0.5, 2.0}) {
                auto o = decide(idx, Q, qp(eps, rho));
                ASSERT_LE(double(o.cells_pushed), 8 * (c * 6 / eps) * double(Q.size()));
            }
        }
    }
}

TEST(ZeroBound, ValueCaseA) {
    std::mt19937_64 rng(63);
    int case_a = 0;
    for (int t = 0; t < 200; ++t) {
        std::size_t n = std::uniform_int_distribution<std::size_t>(2, 3000)(rng);
        auto idx = make_index(gen::line(n, 2), euclidean_oracle(2, Norm::l2));
        std::size_t m = std::uniform_int_distribution<std::size_t>(1, 32)(rng);
        auto Qp = gen::line(m, 2);
        std::normal_distribution<double> u(0, std::uniform_real_distribution<double>(0.1, 50)(rng));
        for (auto& p : Qp) {
            p[0] *= double(n) / double(m);
            p[1] += u(rng);
        }
        auto Q = build_curve(Qp, euclidean_oracle(2, Norm::l2));
        double eps = std::uniform_real_distribution<double>(0.1, 0.9)(rng);
        auto r = value(idx, Q, qp(eps));
        if (r.search_case != SearchCase::interval) continue;
        ++case_a;
        ASSERT_LE(double(r.cells_pushed), 8 * (2.0 * 24 / eps) * double(m));
    }
    EXPECT_GT(case_a, 0);
}
