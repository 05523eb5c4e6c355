#ifndef PFRE_METRIC_ORACLES_HPP
#define PFRE_METRIC_ORACLES_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

namespace pfre {

/// A point of R^d.
using EuclideanPoint = std::vector<double>;

/// A vertex of a weighted graph, 0-based.
using GraphVertex = std::uint32_t;

/// Raised when a graph oracle is asked for the distance between two
/// vertices in different connected components.
class UnreachableError : public std::runtime_error {
   public:
    UnreachableError(GraphVertex a, GraphVertex b)
        : std::runtime_error("vertices " + std::to_string(a) + " and " +
                             std::to_string(b) + " are not connected"),
          from(a),
          to(b) {}
    GraphVertex from;
    GraphVertex to;
};

/**
 * Contract shared by every distance oracle.
 *
 * `o(a, b)` returns the perceived distance, which lies within a factor
 * (1 +- o.alpha()) of the true distance, is symmetric, is zero on identical
 * arguments and is deterministic across calls.
 */
template <class O>
concept DistanceOracle = requires(const O& o, const typename O::point_type& a) {
    typename O::point_type;
    { o(a, a) } -> std::convertible_to<double>;
    { o.alpha() } -> std::convertible_to<double>;
};

enum class Norm { l1, l2, linf };

inline std::string to_string(Norm p) {
    switch (p) {
        case Norm::l1: return "p1";
        case Norm::l2: return "p2";
        case Norm::linf: return "pinf";
    }
    return "?";
}

namespace detail {

// Every distance-like quantity in R^d (point-point, point-box, box-box)
// goes through this one accumulation so that rounding is monotone in the
// per-coordinate magnitudes.
template <class F>
double lp_accumulate(Norm p, std::size_t d, F&& magnitude) {
    double acc = 0.0;
    switch (p) {
        case Norm::l1:
            for (std::size_t k = 0; k < d; ++k) acc += magnitude(k);
            return acc;
        case Norm::l2:
            for (std::size_t k = 0; k < d; ++k) {
                double v = magnitude(k);
                acc += v * v;
            }
            return std::sqrt(acc);
        case Norm::linf:
            for (std::size_t k = 0; k < d; ++k) acc = std::max(acc, magnitude(k));
            return acc;
    }
    return acc;
}

}  // namespace detail

/// Exact L_p distance in R^d (alpha = 0).
class EuclideanOracle {
   public:
    using point_type = EuclideanPoint;

    EuclideanOracle(std::size_t dimension, Norm norm) : dim_(dimension), norm_(norm) {
        if (dimension == 0) throw std::invalid_argument("dimension must be >= 1");
    }

    double operator()(const point_type& a, const point_type& b) const {
        return detail::lp_accumulate(norm_, dim_,
                                     [&](std::size_t k) { return std::abs(a[k] - b[k]); });
    }

    /// Lower bound on d(q, x) over x in the box [lo, hi].
    double box_distance(const point_type& q, std::span<const double> lo,
                        std::span<const double> hi) const {
        return detail::lp_accumulate(norm_, dim_, [&](std::size_t k) {
            if (q[k] < lo[k]) return lo[k] - q[k];
            if (q[k] > hi[k]) return q[k] - hi[k];
            return 0.0;
        });
    }

    double alpha() const { return 0.0; }
    std::size_t dimension() const { return dim_; }
    Norm norm() const { return norm_; }

    bool valid(const point_type& a) const {
        return a.size() == dim_ &&
               std::all_of(a.begin(), a.end(), [](double v) { return std::isfinite(v); });
    }

   private:
    std::size_t dim_;
    Norm norm_;
};

inline EuclideanOracle euclidean_oracle(std::size_t dimension, Norm norm) {
    return EuclideanOracle(dimension, norm);
}

struct GraphEdge {
    GraphVertex u;
    GraphVertex v;
    double weight;
};

/// Undirected graph with strictly positive edge weights.
class WeightedGraph {
   public:
    WeightedGraph() = default;
    WeightedGraph(std::size_t vertex_count, std::vector<GraphEdge> edges)
        : n_(vertex_count), edges_(std::move(edges)), adj_(vertex_count) {
        for (const auto& e : edges_) {
            if (e.u >= n_ || e.v >= n_)
                throw std::invalid_argument("edge endpoint out of range");
            if (!(e.weight > 0.0) || !std::isfinite(e.weight))
                throw std::invalid_argument("edge weights must be positive and finite");
            adj_[e.u].push_back({e.v, e.weight});
            adj_[e.v].push_back({e.u, e.weight});
        }
    }

    std::size_t vertex_count() const { return n_; }
    const std::vector<GraphEdge>& edges() const { return edges_; }
    const std::vector<std::pair<GraphVertex, double>>& neighbors(GraphVertex v) const {
        return adj_[v];
    }

    /// Single-source shortest path distances; unreachable vertices get +inf.
    std::vector<double> dijkstra(GraphVertex source) const {
        return multi_source_dijkstra(std::span<const GraphVertex>(&source, 1)).first;
    }

    /**
     * Shortest path distance from the nearest of `sources`, with the index
     * (into `sources`) of that nearest source. Ties go to the smaller index.
     */
    std::pair<std::vector<double>, std::vector<std::uint32_t>> multi_source_dijkstra(
        std::span<const GraphVertex> sources) const {
        constexpr double inf = std::numeric_limits<double>::infinity();
        constexpr auto none = std::numeric_limits<std::uint32_t>::max();
        std::vector<double> dist(n_, inf);
        std::vector<std::uint32_t> label(n_, none);
        using Item = std::tuple<double, std::uint32_t, GraphVertex>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        for (std::uint32_t s = 0; s < sources.size(); ++s) {
            GraphVertex v = sources[s];
            if (label[v] == none) {
                dist[v] = 0.0;
                label[v] = s;
            }
        }
        for (GraphVertex v = 0; v < n_; ++v)
            if (label[v] != none) pq.emplace(0.0, label[v], v);
        while (!pq.empty()) {
            auto [d, l, v] = pq.top();
            pq.pop();
            if (d > dist[v] || (d == dist[v] && l > label[v])) continue;
            for (auto [w, wt] : adj_[v]) {
                double nd = d + wt;
                if (nd < dist[w] || (nd == dist[w] && l < label[w])) {
                    dist[w] = nd;
                    label[w] = l;
                    pq.emplace(nd, l, w);
                }
            }
        }
        return {std::move(dist), std::move(label)};
    }

   private:
    std::size_t n_ = 0;
    std::vector<GraphEdge> edges_;
    std::vector<std::vector<std::pair<GraphVertex, double>>> adj_;
};

/**
 * Exact shortest-path oracle over a weighted graph.
 *
 * Distances from a source are computed once by Dijkstra and memoized; the
 * memo is shared between copies and guarded by a mutex.
 */
class GraphOracle {
   public:
    using point_type = GraphVertex;

    explicit GraphOracle(std::shared_ptr<const WeightedGraph> graph)
        : state_(std::make_shared<State>()) {
        if (!graph) throw std::invalid_argument("null graph");
        state_->graph = std::move(graph);
    }

    double operator()(GraphVertex a, GraphVertex b) const {
        if (a == b) return 0.0;
        // canonical source keeps d(a,b) == d(b,a) bit-exactly
        GraphVertex s = std::min(a, b), t = std::max(a, b);
        double d = row(s)[t];
        if (!std::isfinite(d)) throw UnreachableError(a, b);
        return d;
    }

    double alpha() const { return 0.0; }
    const WeightedGraph& graph() const { return *state_->graph; }
    std::shared_ptr<const WeightedGraph> graph_ptr() const { return state_->graph; }
    bool valid(GraphVertex v) const { return v < state_->graph->vertex_count(); }

    std::size_t cached_sources() const {
        std::lock_guard lock(state_->mu);
        return state_->rows.size();
    }

   private:
    struct State {
        std::shared_ptr<const WeightedGraph> graph;
        mutable std::mutex mu;
        std::unordered_map<GraphVertex, std::shared_ptr<const std::vector<double>>> rows;
    };

    const std::vector<double>& row(GraphVertex s) const {
        {
            std::lock_guard lock(state_->mu);
            auto it = state_->rows.find(s);
            if (it != state_->rows.end()) return *it->second;
        }
        auto fresh = std::make_shared<const std::vector<double>>(state_->graph->dijkstra(s));
        std::lock_guard lock(state_->mu);
        auto [it, inserted] = state_->rows.emplace(s, std::move(fresh));
        return *it->second;
    }

    std::shared_ptr<State> state_;
};

inline GraphOracle graph_oracle(std::shared_ptr<const WeightedGraph> graph) {
    return GraphOracle(std::move(graph));
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline std::uint64_t point_hash(GraphVertex v) { return splitmix64(v); }

inline std::uint64_t point_hash(const EuclideanPoint& p) {
    std::uint64_t h = 0x243F6A8885A308D3ull ^ p.size();
    for (double c : p) {
        if (c == 0.0) c = 0.0;  // fold -0.0
        h = splitmix64(h ^ std::bit_cast<std::uint64_t>(c));
    }
    return h;
}

}  // namespace detail

/**
 * Deterministic adversarial wrapper around an exact oracle.
 *
 * d°(a, b) = d(a, b) * (1 + alpha * u) where u in [-1, 1] is a hash of the
 * seed and the unordered pair {a, b}.
 */
template <DistanceOracle Base>
class PerturbedOracle {
   public:
    using point_type = typename Base::point_type;

    PerturbedOracle(Base base, double alpha, std::uint64_t seed)
        : base_(std::move(base)), alpha_(alpha), seed_(seed) {
        if (base_.alpha() != 0.0)
            throw std::invalid_argument("perturbed oracle needs an exact base oracle");
        if (!(alpha >= 0.0 && alpha < 1.0))
            throw std::invalid_argument("alpha must lie in [0, 1)");
    }

    double operator()(const point_type& a, const point_type& b) const {
        double d = base_(a, b);
        if (d == 0.0 || alpha_ == 0.0) return d;
        std::uint64_t ha = detail::point_hash(a), hb = detail::point_hash(b);
        if (ha > hb) std::swap(ha, hb);
        std::uint64_t h = detail::splitmix64(seed_ ^ detail::splitmix64(ha ^ detail::splitmix64(hb)));
        // 53 random bits -> u in [-1, 1]
        double u = static_cast<double>(h >> 11) * 0x1.0p-53 * 2.0 - 1.0;
        double v = d * (1.0 + alpha_ * u);
        return std::clamp(v, (1.0 - alpha_) * d, (1.0 + alpha_) * d);
    }

    double alpha() const { return alpha_; }
    const Base& base() const { return base_; }
    std::uint64_t seed() const { return seed_; }

   private:
    Base base_;
    double alpha_;
    std::uint64_t seed_;
};

template <DistanceOracle Base>
PerturbedOracle<Base> perturbed_oracle(Base base, double alpha, std::uint64_t seed) {
    return PerturbedOracle<Base>(std::move(base), alpha, seed);
}

}  // namespace pfre

#endif  // PFRE_METRIC_ORACLES_HPP
