#ifndef PFRE_GENERATE_HPP
#define PFRE_GENERATE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "metric_oracles.hpp"

namespace pfre::gen {

/// p_k = (k - 1, 0, ..., 0). A segment meets any ball in length <= 2r, so c <= 2.
inline std::vector<EuclideanPoint> line(std::size_t n, std::size_t d) {
    if (n == 0 || d == 0) throw std::invalid_argument("line needs n >= 1 and d >= 1");
    std::vector<EuclideanPoint> out(n, EuclideanPoint(d, 0.0));
    for (std::size_t k = 0; k < n; ++k) out[k][0] = static_cast<double>(k);
    return out;
}

/// Archimedean spiral r = theta / (2 pi) in the first two coordinates,
/// sampled at unit arc steps.
inline std::vector<EuclideanPoint> spiral(std::size_t n, std::size_t d) {
    if (n == 0 || d < 2) throw std::invalid_argument("spiral needs n >= 1 and d >= 2");
    std::vector<EuclideanPoint> out;
    out.reserve(n);
    double theta = 2.0 * std::numbers::pi;
    for (std::size_t k = 0; k < n; ++k) {
        double r = theta / (2.0 * std::numbers::pi);
        EuclideanPoint p(d, 0.0);
        p[0] = r * std::cos(theta);
        p[1] = r * std::sin(theta);
        out.push_back(std::move(p));
        theta += 1.0 / std::max(r, 1.0);  // about one unit of arc
    }
    return out;
}

/// Number of vertices retrace(n, reps) actually produces.
inline std::size_t retrace_size(std::size_t n, std::size_t reps) {
    std::size_t steps = std::max<std::size_t>(1, (n - 1) / reps);
    return reps * steps + 1;
}

/// `reps` traversals of the unit segment on the first axis, back and forth.
/// The ball at the midpoint with radius 1/2 holds length reps, so c >= 2 reps.
inline std::vector<EuclideanPoint> retrace(std::size_t n, std::size_t reps, std::size_t d) {
    if (n < 2 || reps == 0 || d == 0) throw std::invalid_argument("retrace needs n >= 2, reps >= 1");
    std::size_t steps = std::max<std::size_t>(1, (n - 1) / reps);
    std::vector<EuclideanPoint> out;
    out.reserve(reps * steps + 1);
    out.push_back(EuclideanPoint(d, 0.0));
    for (std::size_t r = 0; r < reps; ++r)
        for (std::size_t k = 1; k <= steps; ++k) {
            double t = static_cast<double>(k) / static_cast<double>(steps);
            EuclideanPoint p(d, 0.0);
            p[0] = r % 2 == 0 ? t : 1.0 - t;
            out.push_back(std::move(p));
        }
    return out;
}

/// Random walk from the origin. With `lattice`, each step moves one unit
/// along a random axis, so all coordinates stay integral.
inline std::vector<EuclideanPoint> random_walk(std::size_t n, std::size_t d, std::uint64_t seed,
                                               bool lattice = false) {
    if (n == 0 || d == 0) throw std::invalid_argument("random_walk needs n >= 1 and d >= 1");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> step(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> axis(0, d - 1);
    std::bernoulli_distribution sign(0.5);
    std::vector<EuclideanPoint> out;
    out.reserve(n);
    EuclideanPoint p(d, 0.0);
    out.push_back(p);
    for (std::size_t k = 1; k < n; ++k) {
        if (lattice) {
            p[axis(rng)] += sign(rng) ? 1.0 : -1.0;
        } else {
            for (auto& c : p) c += step(rng);
        }
        out.push_back(p);
    }
    return out;
}

/// Connected random graph on N vertices: a random spanning tree plus about
/// `extra` further edges. Weights uniform in [1, 10], integral if requested.
inline WeightedGraph random_graph(std::size_t N, std::size_t extra, std::uint64_t seed,
                                  bool integer_weights = false) {
    if (N == 0) throw std::invalid_argument("graph needs at least one vertex");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> wr(1.0, 10.0);
    std::uniform_int_distribution<int> wi(1, 10);
    auto weight = [&] { return integer_weights ? static_cast<double>(wi(rng)) : wr(rng); };
    std::vector<GraphEdge> edges;
    std::set<std::pair<GraphVertex, GraphVertex>> have;
    for (GraphVertex v = 1; v < N; ++v) {
        std::uniform_int_distribution<GraphVertex> parent(0, v - 1);
        GraphVertex u = parent(rng);
        edges.push_back({u, v, weight()});
        have.insert({u, v});
    }
    if (N > 1) {
        std::uniform_int_distribution<GraphVertex> any(0, static_cast<GraphVertex>(N - 1));
        for (std::size_t k = 0; k < extra; ++k) {
            GraphVertex u = any(rng), v = any(rng);
            if (u == v) continue;
            if (u > v) std::swap(u, v);
            if (!have.insert({u, v}).second) continue;
            edges.push_back({u, v, weight()});
        }
    }
    return WeightedGraph(N, std::move(edges));
}

/// Random walk of n vertices along the edges of g.
inline std::vector<GraphVertex> graph_walk(const WeightedGraph& g, std::size_t n,
                                           std::uint64_t seed) {
    if (n == 0 || g.vertex_count() == 0) throw std::invalid_argument("graph_walk needs n >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<GraphVertex> start(0, static_cast<GraphVertex>(g.vertex_count() - 1));
    std::vector<GraphVertex> out{start(rng)};
    while (out.size() < n) {
        const auto& nb = g.neighbors(out.back());
        if (nb.empty()) {
            out.push_back(out.back());
            continue;
        }
        std::uniform_int_distribution<std::size_t> pick(0, nb.size() - 1);
        out.push_back(nb[pick(rng)].first);
    }
    return out;
}

}  // namespace pfre::gen

#endif  // PFRE_GENERATE_HPP
