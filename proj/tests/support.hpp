#ifndef PFRE_TESTS_SUPPORT_HPP
#define PFRE_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <memory>
#include <random>
#include <vector>

#include "pfre/pfre.hpp"

namespace pfre::fixture {

struct EuclideanInstance {
    EuclideanOracle oracle;
    std::vector<EuclideanPoint> P;
    std::vector<EuclideanPoint> Q;
};

struct GraphInstance {
    std::shared_ptr<const WeightedGraph> graph;
    GraphOracle oracle;
    std::vector<GraphVertex> P;
    std::vector<GraphVertex> Q;
};

inline Norm random_norm(std::mt19937_64& rng) {
    static constexpr Norm all[] = {Norm::l1, Norm::l2, Norm::linf};
    return all[std::uniform_int_distribution<int>(0, 2)(rng)];
}

/// Q either follows P with noise, or wanders off as its own walk.
inline EuclideanInstance random_euclidean(std::mt19937_64& rng, std::size_t max_n = 64,
                                          std::size_t max_m = 64) {
    std::size_t d = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
    std::size_t n = std::uniform_int_distribution<std::size_t>(1, max_n)(rng);
    std::size_t m = std::uniform_int_distribution<std::size_t>(1, max_m)(rng);
    EuclideanInstance inst{EuclideanOracle(d, random_norm(rng)), gen::random_walk(n, d, rng()), {}};
    std::normal_distribution<double> noise(0.0, std::uniform_real_distribution<double>(0.01, 3.0)(rng));
    if (std::bernoulli_distribution(0.6)(rng)) {
        // follow P: monotone resample plus noise
        for (std::size_t k = 0; k < m; ++k) {
            std::size_t src = n == 1 ? 0 : (k * (n - 1)) / std::max<std::size_t>(1, m - 1);
            EuclideanPoint p = inst.P[std::min(src, n - 1)];
            for (double& c : p) c += noise(rng);
            inst.Q.push_back(std::move(p));
        }
    } else {
        inst.Q = gen::random_walk(m, d, rng());
        EuclideanPoint shift(d);
        for (double& c : shift) c = noise(rng);
        for (auto& p : inst.Q)
            for (std::size_t c = 0; c < d; ++c) p[c] += shift[c];
    }
    return inst;
}

inline GraphInstance random_graph_instance(std::mt19937_64& rng, std::size_t max_vertices = 64,
                                           std::size_t max_n = 64, std::size_t max_m = 64,
                                           bool integer_weights = false) {
    std::size_t N = std::uniform_int_distribution<std::size_t>(2, max_vertices)(rng);
    std::size_t extra = std::uniform_int_distribution<std::size_t>(0, N)(rng);
    auto g = std::make_shared<const WeightedGraph>(gen::random_graph(N, extra, rng(), integer_weights));
    std::size_t n = std::uniform_int_distribution<std::size_t>(1, max_n)(rng);
    std::size_t m = std::uniform_int_distribution<std::size_t>(1, max_m)(rng);
    GraphInstance inst{g, GraphOracle(g), gen::graph_walk(*g, n, rng()), gen::graph_walk(*g, m, rng())};
    return inst;
}

/// Linear-scan reference for P[i, j]^mu, summing edges from each kept vertex.
template <class Point>
std::vector<std::size_t> reference_simplify(const Curve<Point>& P, double mu, std::size_t i,
                                            std::size_t j) {
    std::vector<std::size_t> out{i};
    std::size_t x = i;
    while (x < j) {
        double len = 0.0;
        std::size_t y = x + 1;
        for (; y < j; ++y) {
            len += P.edge_length(y - 1);
            if (len > mu) break;
        }
        out.push_back(y);
        x = y;
    }
    return out;
}

/// Curve made of the given vertices of P, measured with `oracle`.
template <DistanceOracle Oracle>
Curve<typename Oracle::point_type> pick(const Curve<typename Oracle::point_type>& P,
                                        const std::vector<std::size_t>& idx, const Oracle& oracle) {
    std::vector<typename Oracle::point_type> pts;
    for (auto k : idx) pts.push_back(P[k]);
    return build_curve(pts, oracle);
}

inline std::vector<std::vector<double>> floyd_warshall(const WeightedGraph& g) {
    const std::size_t N = g.vertex_count();
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> d(N, std::vector<double>(N, inf));
    for (std::size_t v = 0; v < N; ++v) d[v][v] = 0.0;
    for (const auto& e : g.edges()) {
        d[e.u][e.v] = std::min(d[e.u][e.v], e.weight);
        d[e.v][e.u] = std::min(d[e.v][e.u], e.weight);
    }
    for (std::size_t k = 0; k < N; ++k)
        for (std::size_t a = 0; a < N; ++a)
            for (std::size_t b = 0; b < N; ++b) d[a][b] = std::min(d[a][b], d[a][k] + d[k][b]);
    return d;
}

/// All pairwise differences of the canonical prefix lengths.
template <class Point>
std::vector<double> prefix_differences(const Curve<Point>& P) {
    auto lam = P.canonical_prefix();
    std::vector<double> out;
    for (std::size_t a = 0; a < lam.size(); ++a)
        for (std::size_t b = a + 1; b < lam.size(); ++b) out.push_back(lam[b] - lam[a]);
    return out;
}

template <DistanceOracle Oracle>
std::vector<double> pairwise_distances(const Curve<typename Oracle::point_type>& P, const Oracle& o) {
    std::vector<double> out;
    for (std::size_t a = 1; a <= P.size(); ++a)
        for (std::size_t b = a + 1; b <= P.size(); ++b) out.push_back(o(P[a], P[b]));
    return out;
}

inline bool in_sandwich(double nu, double D, double eps, double slack = 1e-9) {
    return nu >= (1.0 - eps) * D - slack && nu <= (1.0 + eps) * D + slack;
}

}  // namespace pfre::fixture

#endif  // PFRE_TESTS_SUPPORT_HPP
