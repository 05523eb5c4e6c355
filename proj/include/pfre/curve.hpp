#ifndef PFRE_CURVE_HPP
#define PFRE_CURVE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "metric_oracles.hpp"

namespace pfre {

/// Which end of a curve an update applies to.
enum class End { head, tail };

/**
 * A polygonal curve p_1..p_n with cached edge lengths d(p_k, p_{k+1}) and
 * prefix lengths lambda_i = l(P[1, i]).
 *
 * All public indices are 1-based. Prefix lengths are kept relative to a
 * translation offset so that prepending a vertex does not rewrite the
 * stored values: lambda_i = raw_i - raw_1.
 */
template <class Point>
class Curve {
   public:
    using point_type = Point;

    Curve() = default;

    /// Assembles a curve from already-measured parts. `raw_prefix` may carry
    /// any translation; it must satisfy raw_{k+1} = raw_k + edge_k.
    Curve(std::deque<Point> points, std::deque<double> edges, std::deque<double> raw_prefix,
          double alpha = 0.0)
        : points_(std::move(points)),
          edges_(std::move(edges)),
          raw_(std::move(raw_prefix)),
          alpha_(alpha) {
        if (points_.empty()) throw std::invalid_argument("curve must have at least one vertex");
        if (edges_.size() + 1 != points_.size() || raw_.size() != points_.size())
            throw std::invalid_argument("curve parts have inconsistent sizes");
    }

    std::size_t size() const { return points_.size(); }

    const Point& operator[](std::size_t i) const { return points_[check(i) - 1]; }
    const std::deque<Point>& points() const { return points_; }
    const std::deque<double>& edge_lengths() const { return edges_; }

    /// d(p_k, p_{k+1}) for 1 <= k < n.
    double edge_length(std::size_t k) const {
        if (k < 1 || k >= size()) throw std::out_of_range("edge index out of range");
        return edges_[k - 1];
    }

    /// lambda_i = l(P[1, i]).
    double prefix_length(std::size_t i) const { return raw_[check(i) - 1] - raw_.front(); }

    /// The translated prefix values as stored, and their offset raw_1.
    const std::deque<double>& raw_prefix() const { return raw_; }
    double prefix_offset() const { return raw_.front(); }

    /// lambda_i recomputed by a sequential sum of edge lengths starting at 0;
    /// equals prefix_length(i) for a curve that has never been updated.
    std::vector<double> canonical_prefix() const {
        std::vector<double> out(size());
        out[0] = 0.0;
        for (std::size_t k = 1; k < size(); ++k) out[k] = out[k - 1] + edges_[k - 1];
        return out;
    }

    double length() const { return raw_.back() - raw_.front(); }

    /// Slack of the oracle that measured the edges.
    double oracle_alpha() const { return alpha_; }

    Curve subcurve(std::size_t i, std::size_t j) const {
        check_range(i, j);
        std::deque<Point> pts(points_.begin() + (i - 1), points_.begin() + j);
        std::deque<double> es(edges_.begin() + (i - 1), edges_.begin() + (j - 1));
        std::deque<double> raw;
        double acc = 0.0;
        raw.push_back(acc);
        for (double e : es) raw.push_back(acc += e);
        return Curve(std::move(pts), std::move(es), std::move(raw), alpha_);
    }

    void check_range(std::size_t i, std::size_t j) const {
        if (i < 1 || j > size() || i > j)
            throw std::out_of_range("subcurve range [" + std::to_string(i) + ", " +
                                    std::to_string(j) + "] invalid for n = " +
                                    std::to_string(size()));
    }

    // Updates. Used by the dynamic index; each is O(1).
    void push_back(Point p, double edge) {
        raw_.push_back(raw_.back() + edge);
        edges_.push_back(edge);
        points_.push_back(std::move(p));
    }
    void push_front(Point p, double edge) {
        raw_.push_front(raw_.front() - edge);
        edges_.push_front(edge);
        points_.push_front(std::move(p));
    }
    void pop_back() {
        underflow_check();
        raw_.pop_back();
        edges_.pop_back();
        points_.pop_back();
    }
    void pop_front() {
        underflow_check();
        raw_.pop_front();
        edges_.pop_front();
        points_.pop_front();
    }

   private:
    std::size_t check(std::size_t i) const {
        if (i < 1 || i > size())
            throw std::out_of_range("vertex index " + std::to_string(i) + " out of range");
        return i;
    }
    void underflow_check() const {
        if (size() < 2) throw std::length_error("cannot truncate a single-vertex curve");
    }

    std::deque<Point> points_;
    std::deque<double> edges_;
    std::deque<double> raw_;
    double alpha_ = 0.0;
};

/// Measures consecutive edges with `oracle` and returns the curve.
template <DistanceOracle Oracle, class Range>
Curve<typename Oracle::point_type> build_curve(const Range& points, const Oracle& oracle) {
    using P = typename Oracle::point_type;
    std::deque<P> pts(std::begin(points), std::end(points));
    if (pts.empty()) throw std::invalid_argument("curve must have at least one vertex");
    if constexpr (requires { oracle.valid(pts.front()); }) {
        for (std::size_t k = 0; k < pts.size(); ++k)
            if (!oracle.valid(pts[k]))
                throw std::invalid_argument("vertex " + std::to_string(k + 1) +
                                            " is not a valid point of the space");
    }
    std::deque<double> edges, raw;
    raw.push_back(0.0);
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        double e = oracle(pts[k], pts[k + 1]);
        edges.push_back(e);
        raw.push_back(raw.back() + e);
    }
    return Curve<P>(std::move(pts), std::move(edges), std::move(raw), oracle.alpha());
}

template <class Point>
double subcurve_length(const Curve<Point>& curve, std::size_t i, std::size_t j) {
    curve.check_range(i, j);
    return curve.prefix_length(j) - curve.prefix_length(i);
}

/// Certified lower bound on the packedness constant with its witness ball.
struct PackednessReport {
    double c_lower = 0.0;
    EuclideanPoint center;
    double radius = 0.0;
};

namespace detail {

// Parameter interval [t0, t1] of segment a + t (b - a), t in [0, 1], inside
// the closed ball B(center, r). Every L_p ball is convex, so the
// intersection is one interval.
inline std::optional<std::pair<double, double>> clip_segment(const EuclideanOracle& oracle,
                                                             const EuclideanPoint& a,
                                                             const EuclideanPoint& b,
                                                             const EuclideanPoint& center,
                                                             double r) {
    const std::size_t d = oracle.dimension();
    double t0 = 0.0, t1 = 1.0;
    // Clip against half-spaces  s . (x - center) <= r.
    auto halfspace = [&](const std::vector<double>& s) {
        double base = 0.0, slope = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            base += s[k] * (a[k] - center[k]);
            slope += s[k] * (b[k] - a[k]);
        }
        // base + t * slope <= r
        if (slope == 0.0) return base <= r;
        double t = (r - base) / slope;
        if (slope > 0.0)
            t1 = std::min(t1, t);
        else
            t0 = std::max(t0, t);
        return t0 <= t1;
    };
    switch (oracle.norm()) {
        case Norm::l2: {
            // |a - c + t (b - a)|^2 <= r^2
            double qa = 0.0, qb = 0.0, qc = -r * r;
            for (std::size_t k = 0; k < d; ++k) {
                double u = b[k] - a[k], w = a[k] - center[k];
                qa += u * u;
                qb += 2.0 * u * w;
                qc += w * w;
            }
            if (qa == 0.0) {
                if (qc > 0.0) return std::nullopt;
                break;
            }
            double disc = qb * qb - 4.0 * qa * qc;
            if (disc < 0.0) return std::nullopt;
            double sq = std::sqrt(disc);
            t0 = std::max(t0, (-qb - sq) / (2.0 * qa));
            t1 = std::min(t1, (-qb + sq) / (2.0 * qa));
            break;
        }
        case Norm::linf: {
            std::vector<double> s(d, 0.0);
            for (std::size_t k = 0; k < d; ++k) {
                for (double sign : {1.0, -1.0}) {
                    std::fill(s.begin(), s.end(), 0.0);
                    s[k] = sign;
                    if (!halfspace(s)) return std::nullopt;
                }
            }
            break;
        }
        case Norm::l1: {
            if (d > 20) throw std::invalid_argument("L1 clipping supports d <= 20");
            std::vector<double> s(d);
            for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
                for (std::size_t k = 0; k < d; ++k) s[k] = (mask >> k) & 1 ? -1.0 : 1.0;
                if (!halfspace(s)) return std::nullopt;
            }
            break;
        }
    }
    if (t0 > t1) return std::nullopt;
    return std::make_pair(t0, t1);
}

}  // namespace detail

/**
 * Lower bound on the packedness constant c of a Euclidean curve.
 *
 * Balls are centred at every vertex and every edge midpoint, with radii
 * d(center, p_j) and d(center, p_j) / 2 for every vertex p_j. Edges are
 * clipped to each ball exactly, so every reported ratio l(P cap B) / r is
 * realised by an actual ball. A segment inside a ball of radius r is
 * never longer than 2r, which bounds clipping round-off.
 */
inline PackednessReport estimate_packedness(const Curve<EuclideanPoint>& curve,
                                            const EuclideanOracle& oracle) {
    const std::size_t n = curve.size();
    if (n < 2) throw std::invalid_argument("packedness needs at least two vertices");
    std::vector<EuclideanPoint> centers(curve.points().begin(), curve.points().end());
    for (std::size_t k = 1; k < n; ++k) {
        EuclideanPoint mid(oracle.dimension());
        for (std::size_t c = 0; c < mid.size(); ++c)
            mid[c] = 0.5 * (curve[k][c] + curve[k + 1][c]);
        centers.push_back(std::move(mid));
    }
    PackednessReport best;
    // radii at rounding-noise scale certify nothing
    const double floor_r = 1e-9 * curve.length();
    std::vector<double> radii;
    for (const auto& center : centers) {
        radii.clear();
        for (std::size_t j = 1; j <= n; ++j) {
            double r = oracle(center, curve[j]);
            if (r > floor_r) {
                radii.push_back(r);
                radii.push_back(0.5 * r);
            }
        }
        std::sort(radii.begin(), radii.end());
        radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
        for (double r : radii) {
            double inside = 0.0;
            for (std::size_t k = 1; k < n; ++k) {
                double len = curve.edge_length(k);
                if (len == 0.0) continue;
                auto iv = detail::clip_segment(oracle, curve[k], curve[k + 1], center, r);
                if (iv) inside += std::min((iv->second - iv->first) * len, 2.0 * r);
            }
            double ratio = inside / r;
            if (ratio > best.c_lower) {
                best.c_lower = ratio;
                best.center = center;
                best.radius = r;
            }
        }
    }
    return best;
}

}  // namespace pfre

#endif  // PFRE_CURVE_HPP
