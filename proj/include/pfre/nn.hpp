#ifndef PFRE_NN_HPP
#define PFRE_NN_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "curve.hpp"
#include "metric_oracles.hpp"

namespace pfre {

/// Nearest vertex p_index (1-based) of a range and its distance.
struct NnHit {
    std::size_t index = 0;
    double distance = std::numeric_limits<double>::infinity();

    bool better_than(const NnHit& o) const {
        return distance < o.distance || (distance == o.distance && index < o.index);
    }
};

/// Balanced binary decomposition of [1, n]; node 0 is the root.
class RangeDecomposition {
   public:
    struct Node {
        std::size_t lo, hi;
        std::int32_t left = -1, right = -1;
    };

    RangeDecomposition() = default;
    explicit RangeDecomposition(std::size_t n) {
        if (n == 0) throw std::invalid_argument("empty range");
        nodes_.reserve(2 * n);
        build(1, n);
    }

    std::size_t node_count() const { return nodes_.size(); }
    const Node& node(std::size_t id) const { return nodes_[id]; }
    std::size_t size() const { return nodes_.empty() ? 0 : nodes_[0].hi; }

    /// Node ids whose ranges partition [i, j], left to right.
    std::vector<std::size_t> cover(std::size_t i, std::size_t j) const {
        if (i < 1 || j > size() || i > j) throw std::out_of_range("range outside the curve");
        std::vector<std::size_t> out;
        cover(0, i, j, out);
        return out;
    }

    std::size_t depth() const { return depth(0); }

   private:
    std::int32_t build(std::size_t lo, std::size_t hi) {
        auto id = static_cast<std::int32_t>(nodes_.size());
        nodes_.push_back({lo, hi});
        if (lo < hi) {
            std::size_t mid = lo + (hi - lo) / 2;
            std::int32_t l = build(lo, mid);
            std::int32_t r = build(mid + 1, hi);
            nodes_[id].left = l;
            nodes_[id].right = r;
        }
        return id;
    }

    void cover(std::size_t id, std::size_t i, std::size_t j, std::vector<std::size_t>& out) const {
        const Node& nd = nodes_[id];
        if (j < nd.lo || nd.hi < i) return;
        if (i <= nd.lo && nd.hi <= j) {
            out.push_back(id);
            return;
        }
        cover(nd.left, i, j, out);
        cover(nd.right, i, j, out);
    }

    std::size_t depth(std::int32_t id) const {
        const Node& nd = nodes_[id];
        if (nd.left < 0) return 1;
        return 1 + std::max(depth(nd.left), depth(nd.right));
    }

    std::vector<Node> nodes_;
};

/**
 * Exact range nearest neighbour over a Euclidean curve: one kd-tree per
 * decomposition node. Ties go to the smallest vertex index.
 */
class EuclideanNn {
   public:
    EuclideanNn(const Curve<EuclideanPoint>& curve, const EuclideanOracle& oracle)
        : oracle_(oracle), dec_(curve.size()), d_(oracle.dimension()) {
        pts_.assign(curve.points().begin(), curve.points().end());
        trees_.resize(dec_.node_count());
        for (std::size_t id = 0; id < dec_.node_count(); ++id) {
            auto& t = trees_[id];
            const auto& nd = dec_.node(id);
            t.perm.resize(nd.hi - nd.lo + 1);
            std::iota(t.perm.begin(), t.perm.end(), nd.lo);
            build(t, 0, t.perm.size());
        }
    }

    const RangeDecomposition& decomposition() const { return dec_; }

    /// Exact minimiser of d(p, q) over p in P[i, j].
    NnHit nearest(const EuclideanPoint& q, std::size_t i, std::size_t j,
                  std::size_t* evaluations = nullptr) const {
        NnHit best;
        for (std::size_t id : dec_.cover(i, j)) search(trees_[id], 0, q, best, evaluations);
        return best;
    }

   private:
    static constexpr std::size_t bucket = 8;

    struct KdNode {
        std::uint32_t begin, end;
        std::int32_t left = -1, right = -1;
    };
    struct Tree {
        std::vector<std::size_t> perm;  // 1-based vertex indices
        std::vector<KdNode> nodes;
        std::vector<double> boxes;  // lo then hi, 2d per node
    };

    const double* lo(const Tree& t, std::size_t n) const { return &t.boxes[2 * d_ * n]; }
    const double* hi(const Tree& t, std::size_t n) const { return &t.boxes[2 * d_ * n + d_]; }

    std::int32_t build(Tree& t, std::size_t begin, std::size_t end) {
        auto id = static_cast<std::int32_t>(t.nodes.size());
        t.nodes.push_back({static_cast<std::uint32_t>(begin), static_cast<std::uint32_t>(end)});
        std::size_t base = t.boxes.size();
        t.boxes.resize(base + 2 * d_);
        const auto& first = pts_[t.perm[begin] - 1];
        for (std::size_t c = 0; c < d_; ++c) t.boxes[base + c] = t.boxes[base + d_ + c] = first[c];
        for (std::size_t k = begin + 1; k < end; ++k) {
            const auto& p = pts_[t.perm[k] - 1];
            for (std::size_t c = 0; c < d_; ++c) {
                t.boxes[base + c] = std::min(t.boxes[base + c], p[c]);
                t.boxes[base + d_ + c] = std::max(t.boxes[base + d_ + c], p[c]);
            }
        }
        if (end - begin <= bucket) return id;
        std::size_t dim = 0;
        double width = -1.0;
        for (std::size_t c = 0; c < d_; ++c) {
            double w = t.boxes[base + d_ + c] - t.boxes[base + c];
            if (w > width) {
                width = w;
                dim = c;
            }
        }
        if (width <= 0.0) return id;
        std::size_t mid = begin + (end - begin) / 2;
        std::nth_element(t.perm.begin() + begin, t.perm.begin() + mid, t.perm.begin() + end,
                         [&](std::size_t a, std::size_t b) {
                             return pts_[a - 1][dim] < pts_[b - 1][dim];
                         });
        std::int32_t l = build(t, begin, mid);
        std::int32_t r = build(t, mid, end);
        t.nodes[id].left = l;
        t.nodes[id].right = r;
        return id;
    }

    double box_distance(const Tree& t, std::size_t n, const EuclideanPoint& q) const {
        return oracle_.box_distance(q, {lo(t, n), d_}, {hi(t, n), d_});
    }

    void search(const Tree& t, std::int32_t n, const EuclideanPoint& q, NnHit& best,
                std::size_t* evaluations) const {
        const KdNode& kd = t.nodes[n];
        if (kd.left < 0) {
            for (std::uint32_t k = kd.begin; k < kd.end; ++k) {
                std::size_t idx = t.perm[k];
                NnHit cand{idx, oracle_(q, pts_[idx - 1])};
                if (evaluations) ++*evaluations;
                if (cand.better_than(best)) best = cand;
            }
            return;
        }
        double dl = box_distance(t, kd.left, q);
        double dr = box_distance(t, kd.right, q);
        std::int32_t first = kd.left, second = kd.right;
        if (dr < dl) {
            std::swap(first, second);
            std::swap(dl, dr);
        }
        // equal distances may still win on index, so prune strictly
        if (!(dl > best.distance)) search(t, first, q, best, evaluations);
        if (!(dr > best.distance)) search(t, second, q, best, evaluations);
    }

    EuclideanOracle oracle_;
    RangeDecomposition dec_;
    std::size_t d_;
    std::vector<EuclideanPoint> pts_;
    std::vector<Tree> trees_;
};

/**
 * Range nearest neighbour over a graph curve. Each decomposition node keeps
 * a multi-source shortest-path labelling of every graph vertex by its
 * nearest curve vertex in the node. Reported distances are re-measured with
 * the oracle so they agree with direct queries.
 */
class GraphNn {
   public:
    GraphNn(const Curve<GraphVertex>& curve, const GraphOracle& oracle)
        : oracle_(oracle), dec_(curve.size()) {
        pts_.assign(curve.points().begin(), curve.points().end());
        const auto& g = oracle.graph();
        labels_.resize(dec_.node_count());
        std::vector<GraphVertex> sources;
        for (std::size_t id = 0; id < dec_.node_count(); ++id) {
            const auto& nd = dec_.node(id);
            sources.assign(pts_.begin() + (nd.lo - 1), pts_.begin() + nd.hi);
            auto [dist, label] = g.multi_source_dijkstra(sources);
            auto& out = labels_[id];
            out.resize(g.vertex_count());
            for (std::size_t v = 0; v < out.size(); ++v)
                out[v] = label[v] == std::numeric_limits<std::uint32_t>::max()
                             ? 0
                             : static_cast<std::uint32_t>(nd.lo + label[v]);
        }
    }

    const RangeDecomposition& decomposition() const { return dec_; }

    NnHit nearest(GraphVertex q, std::size_t i, std::size_t j,
                  std::size_t* evaluations = nullptr) const {
        NnHit best;
        for (std::size_t id : dec_.cover(i, j)) {
            std::uint32_t idx = labels_[id][q];
            if (idx == 0) continue;  // unreachable from this node
            NnHit cand{idx, oracle_(q, pts_[idx - 1])};
            if (evaluations) ++*evaluations;
            if (cand.better_than(best)) best = cand;
        }
        if (best.index == 0) throw UnreachableError(q, pts_[i - 1]);
        return best;
    }

   private:
    GraphOracle oracle_;
    RangeDecomposition dec_;
    std::vector<GraphVertex> pts_;
    std::vector<std::vector<std::uint32_t>> labels_;
};

template <class Oracle>
struct nn_index;
template <>
struct nn_index<EuclideanOracle> {
    using type = EuclideanNn;
};
template <>
struct nn_index<GraphOracle> {
    using type = GraphNn;
};

template <class Oracle>
concept HasNnIndex = requires { typename nn_index<Oracle>::type; };

/// Builds the decomposition for the oracle's space.
template <class Oracle>
    requires HasNnIndex<Oracle>
auto build_nn_decomposition(const Curve<typename Oracle::point_type>& curve, const Oracle& oracle) {
    return typename nn_index<Oracle>::type(curve, oracle);
}

/// Reference linear scan with the same tie rule.
template <DistanceOracle Oracle>
NnHit nearest_linear(const Curve<typename Oracle::point_type>& curve, const Oracle& oracle,
                     const typename Oracle::point_type& q, std::size_t i, std::size_t j) {
    curve.check_range(i, j);
    NnHit best;
    for (std::size_t k = i; k <= j; ++k) {
        NnHit cand{k, oracle(q, curve[k])};
        if (cand.better_than(best)) best = cand;
    }
    return best;
}

}  // namespace pfre

#endif  // PFRE_NN_HPP
