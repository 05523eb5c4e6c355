#ifndef PFRE_TADD_HPP
#define PFRE_TADD_HPP

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "curve.hpp"
#include "metric_oracles.hpp"

namespace pfre {

/**
 * Two-approximate distance decomposition: sorted values c_s, each standing
 * for the interval [c_s, 2 c_s]. Every positive source distance lies in at
 * least one of them.
 */
struct TaddIntervals {
    std::vector<double> c;

    std::size_t size() const { return c.size(); }
    bool empty() const { return c.empty(); }
    bool operator==(const TaddIntervals&) const = default;
};

namespace detail {

inline void normalize(std::vector<double>& c) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
}

// Pairs (a, b) of index ranges into sorted unique values v, a entirely
// left of b. Cross distances lie in [b.min - a.max, b.max - a.min].
struct Wspd1d {
    std::span<const double> v;
    std::vector<double>* out;

    void pair(std::size_t a0, std::size_t a1, std::size_t b0, std::size_t b1) {
        double lower = v[b0] - v[a1 - 1];
        double upper = v[b1 - 1] - v[a0];
        if (upper <= 2.0 * lower) {
            out->push_back(lower);
            return;
        }
        // split the wider side
        if (v[a1 - 1] - v[a0] >= v[b1 - 1] - v[b0]) {
            std::size_t m = split(a0, a1);
            pair(a0, m, b0, b1);
            pair(m, a1, b0, b1);
        } else {
            std::size_t m = split(b0, b1);
            pair(a0, a1, b0, m);
            pair(a0, a1, m, b1);
        }
    }

    void self(std::size_t lo, std::size_t hi) {
        if (hi - lo < 2) return;
        std::size_t m = split(lo, hi);
        self(lo, m);
        self(m, hi);
        pair(lo, m, m, hi);
    }

    // fair split at the value midpoint
    std::size_t split(std::size_t lo, std::size_t hi) const {
        double mid = v[lo] + 0.5 * (v[hi - 1] - v[lo]);
        auto it = std::upper_bound(v.begin() + lo, v.begin() + hi, mid);
        std::size_t m = static_cast<std::size_t>(it - v.begin());
        if (m == lo || m == hi) m = lo + (hi - lo) / 2;
        return m;
    }
};

}  // namespace detail

/// 1-TADD over sorted unique values (distance-zero pairs are exempt).
inline TaddIntervals tadd_1d(std::vector<double> values) {
    detail::normalize(values);
    TaddIntervals t;
    detail::Wspd1d w{values, &t.c};
    w.self(0, values.size());
    detail::normalize(t.c);
    return t;
}

/// 1-TADD of the prefix lengths of `curve`, taken from the canonical
/// (sequentially summed) prefix so it depends only on the edge lengths.
template <class Point>
TaddIntervals build_1tadd(const Curve<Point>& curve) {
    return tadd_1d(curve.canonical_prefix());
}

namespace detail {

class EuclideanWspd {
   public:
    EuclideanWspd(const EuclideanOracle& oracle, std::span<const EuclideanPoint> pts)
        : o_(oracle), pts_(pts), d_(oracle.dimension()) {}

    std::vector<double> run() {
        if (pts_.size() < 2) return {};
        idx_.resize(pts_.size());
        std::iota(idx_.begin(), idx_.end(), std::size_t{0});
        std::int32_t root = build(0, idx_.size());
        self(root);
        return std::move(out_);
    }

   private:
    struct Node {
        std::size_t lo, hi;
        std::vector<double> bmin, bmax;
        std::int32_t left = -1, right = -1;
        bool point() const { return left < 0; }
    };

    std::int32_t build(std::size_t lo, std::size_t hi) {
        Node nd{lo, hi, pts_[idx_[lo]], pts_[idx_[lo]]};
        for (std::size_t k = lo + 1; k < hi; ++k)
            for (std::size_t c = 0; c < d_; ++c) {
                nd.bmin[c] = std::min(nd.bmin[c], pts_[idx_[k]][c]);
                nd.bmax[c] = std::max(nd.bmax[c], pts_[idx_[k]][c]);
            }
        std::size_t dim = 0;
        double width = -1.0;
        for (std::size_t c = 0; c < d_; ++c)
            if (nd.bmax[c] - nd.bmin[c] > width) {
                width = nd.bmax[c] - nd.bmin[c];
                dim = c;
            }
        auto id = static_cast<std::int32_t>(nodes_.size());
        nodes_.push_back(nd);
        if (width <= 0.0) return id;  // all points coincide
        double mid = nd.bmin[dim] + 0.5 * width;
        auto first = idx_.begin() + lo, last = idx_.begin() + hi;
        auto it = std::partition(first, last, [&](std::size_t p) { return pts_[p][dim] <= mid; });
        std::size_t m = static_cast<std::size_t>(it - idx_.begin());
        if (m == lo || m == hi) {
            m = lo + (hi - lo) / 2;
            std::nth_element(first, idx_.begin() + m, last, [&](std::size_t a, std::size_t b) {
                return pts_[a][dim] < pts_[b][dim];
            });
        }
        std::int32_t l = build(lo, m);
        std::int32_t r = build(m, hi);
        nodes_[id].left = l;
        nodes_[id].right = r;
        return id;
    }

    double lower(const Node& a, const Node& b) const {
        return lp_accumulate(o_.norm(), d_, [&](std::size_t c) {
            if (a.bmax[c] < b.bmin[c]) return b.bmin[c] - a.bmax[c];
            if (b.bmax[c] < a.bmin[c]) return a.bmin[c] - b.bmax[c];
            return 0.0;
        });
    }
    double upper(const Node& a, const Node& b) const {
        return lp_accumulate(o_.norm(), d_, [&](std::size_t c) {
            return std::max(b.bmax[c] - a.bmin[c], a.bmax[c] - b.bmin[c]);
        });
    }
    double diameter(const Node& a) const {
        return lp_accumulate(o_.norm(), d_, [&](std::size_t c) { return a.bmax[c] - a.bmin[c]; });
    }

    void self(std::int32_t id) {
        const Node& nd = nodes_[id];
        if (nd.point()) return;
        self(nd.left);
        self(nd.right);
        pair(nd.left, nd.right);
    }

    void pair(std::int32_t a, std::int32_t b) {
        const Node& na = nodes_[a];
        const Node& nb = nodes_[b];
        double lo = lower(na, nb);
        double hi = upper(na, nb);
        if (hi == 0.0) return;  // coincident points
        if (hi <= 2.0 * lo) {
            out_.push_back(lo);
            return;
        }
        bool split_a = !na.point() && (nb.point() || diameter(na) >= diameter(nb));
        if (split_a) {
            pair(na.left, b);
            pair(na.right, b);
        } else {
            pair(a, nb.left);
            pair(a, nb.right);
        }
    }

    const EuclideanOracle& o_;
    std::span<const EuclideanPoint> pts_;
    std::size_t d_;
    std::vector<std::size_t> idx_;
    std::vector<Node> nodes_;
    std::vector<double> out_;
};

}  // namespace detail

/// Greedy TADD of an explicit distance multiset: the smallest uncovered
/// distance c opens [c, 2c].
inline TaddIntervals tadd_from_distances(std::vector<double> distances) {
    detail::normalize(distances);
    TaddIntervals t;
    for (double d : distances) {
        if (d <= 0.0) continue;
        if (t.c.empty() || d > 2.0 * t.c.back()) t.c.push_back(d);
    }
    return t;
}

/// TADD of all pairwise vertex distances, via a fair-split WSPD.
inline TaddIntervals build_2d_tadd(const Curve<EuclideanPoint>& curve,
                                   const EuclideanOracle& oracle) {
    std::vector<EuclideanPoint> pts(curve.points().begin(), curve.points().end());
    TaddIntervals t;
    t.c = detail::EuclideanWspd(oracle, pts).run();
    detail::normalize(t.c);
    return t;
}

/// Graph metrics have no WSPD; all pairs are enumerated explicitly.
inline TaddIntervals build_2d_tadd(const Curve<GraphVertex>& curve, const GraphOracle& oracle) {
    std::vector<GraphVertex> vs(curve.points().begin(), curve.points().end());
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    std::vector<double> dist;
    dist.reserve(vs.size() * (vs.size() - 1) / 2);
    for (std::size_t a = 0; a < vs.size(); ++a)
        for (std::size_t b = a + 1; b < vs.size(); ++b) dist.push_back(oracle(vs[a], vs[b]));
    return tadd_from_distances(std::move(dist));
}

/// True iff every positive distance has some c with c <= d <= 2c.
inline bool verify_tadd(std::span<const double> distances, const TaddIntervals& tadd) {
    std::vector<double> c = tadd.c;
    std::sort(c.begin(), c.end());
    for (double d : distances) {
        if (!(d > 0.0)) continue;
        auto it = std::upper_bound(c.begin(), c.end(), d);
        if (it == c.begin() || d > 2.0 * *std::prev(it)) return false;
    }
    return true;
}

/// An interval [lo, hi] of candidate distance values.
struct ScaledInterval {
    double lo;
    double hi;
    bool operator==(const ScaledInterval&) const = default;
};

/// [6c/eps, 12c/eps] per c, plus the sentinel [0, 0], sorted by left end.
inline std::vector<ScaledInterval> scale_for_frechet(const TaddIntervals& tadd, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
    std::vector<ScaledInterval> out{{0.0, 0.0}};
    for (double c : tadd.c) out.push_back({6.0 * c / eps, 12.0 * c / eps});
    std::sort(out.begin(), out.end(), [](auto& a, auto& b) { return a.lo < b.lo; });
    return out;
}

/// [c/2, 4c] per c, plus H* = [lambda, 2 lambda], sorted by left end.
inline std::vector<ScaledInterval> scale_for_hausdorff(const TaddIntervals& tadd, double lambda) {
    if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be non-negative");
    std::vector<ScaledInterval> out;
    for (double c : tadd.c) out.push_back({0.5 * c, 4.0 * c});
    out.push_back({lambda, 2.0 * lambda});
    std::sort(out.begin(), out.end(), [](auto& a, auto& b) { return a.lo < b.lo; });
    return out;
}

/// Recomputes the 1-TADD for the current state of an updated curve. Prefix
/// lengths are re-summed from the first vertex, so head updates never
/// depend on the stored translation offset.
template <class Point>
TaddIntervals rebuild_after_update(const TaddIntervals& /*previous*/, const Curve<Point>& curve) {
    return build_1tadd(curve);
}

}  // namespace pfre

#endif  // PFRE_TADD_HPP
