#ifndef PFRE_BUNDLE_HPP
#define PFRE_BUNDLE_HPP

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <deque>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "curve.hpp"
#include "index.hpp"
#include "metric_oracles.hpp"
#include "tadd.hpp"

namespace pfre {

class BundleError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

enum class SpaceKind : std::uint8_t { euclidean = 0, graph = 1 };

/**
 * Serialized preprocessing of one curve. Layout, all little-endian:
 * magic "PFRE1", u32 version, space, norm, dimension, edge alpha,
 * packedness estimate, vertices, edge lengths, raw prefix lengths (their
 * first entry is the translation offset), 1-TADD, optional 2-D TADD and,
 * for graph curves, the graph itself.
 */
struct Bundle {
    static constexpr std::uint32_t version = 1;

    SpaceKind space = SpaceKind::euclidean;
    Norm norm = Norm::l2;
    std::size_t dimension = 0;
    double alpha = 0.0;
    double c_estimate = -1.0;  // negative when not estimated
    std::vector<EuclideanPoint> coords;
    std::vector<GraphVertex> vertices;
    std::vector<double> edges;
    std::vector<double> raw_prefix;
    TaddIntervals tadd;
    std::optional<TaddIntervals> tadd_2d;
    std::shared_ptr<const WeightedGraph> graph;

    std::size_t size() const { return raw_prefix.size(); }
    bool operator==(const Bundle& o) const {
        auto same_graph = [&] {
            if (!graph || !o.graph) return !graph && !o.graph;
            if (graph->vertex_count() != o.graph->vertex_count()) return false;
            const auto &a = graph->edges(), &b = o.graph->edges();
            if (a.size() != b.size()) return false;
            for (std::size_t k = 0; k < a.size(); ++k)
                if (a[k].u != b[k].u || a[k].v != b[k].v || a[k].weight != b[k].weight) return false;
            return true;
        };
        return space == o.space && norm == o.norm && dimension == o.dimension && alpha == o.alpha &&
               (c_estimate == o.c_estimate) && coords == o.coords && vertices == o.vertices &&
               edges == o.edges && raw_prefix == o.raw_prefix && tadd == o.tadd &&
               tadd_2d == o.tadd_2d && same_graph();
    }
};

namespace detail {

class LeWriter {
   public:
    explicit LeWriter(std::ostream& out) : out_(out) {}
    void u8(std::uint8_t v) { out_.put(static_cast<char>(v)); }
    void u32(std::uint32_t v) {
        for (int k = 0; k < 4; ++k) u8(static_cast<std::uint8_t>(v >> (8 * k)));
    }
    void u64(std::uint64_t v) {
        for (int k = 0; k < 8; ++k) u8(static_cast<std::uint8_t>(v >> (8 * k)));
    }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void f64s(const std::vector<double>& v) {
        u64(v.size());
        for (double x : v) f64(x);
    }

   private:
    std::ostream& out_;
};

class LeReader {
   public:
    explicit LeReader(std::istream& in) : in_(in) {}
    std::uint8_t u8() {
        int c = in_.get();
        if (c == std::char_traits<char>::eof()) throw BundleError("bundle is truncated");
        return static_cast<std::uint8_t>(c);
    }
    std::uint32_t u32() {
        std::uint32_t v = 0;
        for (int k = 0; k < 4; ++k) v |= std::uint32_t{u8()} << (8 * k);
        return v;
    }
    std::uint64_t u64() {
        std::uint64_t v = 0;
        for (int k = 0; k < 8; ++k) v |= std::uint64_t{u8()} << (8 * k);
        return v;
    }
    double f64() { return std::bit_cast<double>(u64()); }
    std::uint64_t count(std::uint64_t limit = std::uint64_t{1} << 40) {
        std::uint64_t n = u64();
        if (n > limit) throw BundleError("bundle length field is implausible");
        return n;
    }
    std::vector<double> f64s() {
        std::vector<double> v(count());
        for (double& x : v) x = f64();
        return v;
    }

   private:
    std::istream& in_;
};

}  // namespace detail

inline void save_bundle(std::ostream& out, const Bundle& b) {
    detail::LeWriter w(out);
    out.write("PFRE1", 5);
    w.u32(Bundle::version);
    w.u8(static_cast<std::uint8_t>(b.space));
    w.u8(static_cast<std::uint8_t>(b.norm));
    w.u64(b.dimension);
    w.f64(b.alpha);
    w.f64(b.c_estimate);
    w.u64(b.size());
    if (b.space == SpaceKind::euclidean) {
        for (const auto& p : b.coords)
            for (double x : p) w.f64(x);
    } else {
        for (auto v : b.vertices) w.u32(v);
    }
    w.f64s(b.edges);
    w.f64s(b.raw_prefix);
    w.f64s(b.tadd.c);
    w.u8(b.tadd_2d ? 1 : 0);
    if (b.tadd_2d) w.f64s(b.tadd_2d->c);
    if (b.space == SpaceKind::graph) {
        w.u64(b.graph->vertex_count());
        w.u64(b.graph->edges().size());
        for (const auto& e : b.graph->edges()) {
            w.u32(e.u);
            w.u32(e.v);
            w.f64(e.weight);
        }
    }
    if (!out) throw BundleError("failed writing bundle");
}

inline Bundle load_bundle(std::istream& in) {
    char magic[5];
    if (!in.read(magic, 5) || std::memcmp(magic, "PFRE1", 5) != 0)
        throw BundleError("not a bundle (bad magic)");
    detail::LeReader r(in);
    if (auto v = r.u32(); v != Bundle::version)
        throw BundleError("unsupported bundle version " + std::to_string(v));
    Bundle b;
    auto space = r.u8();
    auto norm = r.u8();
    if (space > 1 || norm > 2) throw BundleError("bundle header is corrupt");
    b.space = static_cast<SpaceKind>(space);
    b.norm = static_cast<Norm>(norm);
    b.dimension = r.u64();
    b.alpha = r.f64();
    b.c_estimate = r.f64();
    std::uint64_t n = r.count();
    if (n == 0) throw BundleError("bundle holds an empty curve");
    if (b.space == SpaceKind::euclidean) {
        if (b.dimension == 0 || b.dimension > 4096) throw BundleError("bundle dimension is corrupt");
        b.coords.assign(n, EuclideanPoint(b.dimension));
        for (auto& p : b.coords)
            for (double& x : p) x = r.f64();
    } else {
        b.vertices.resize(n);
        for (auto& v : b.vertices) v = r.u32();
    }
    b.edges = r.f64s();
    b.raw_prefix = r.f64s();
    if (b.edges.size() + 1 != n || b.raw_prefix.size() != n)
        throw BundleError("bundle curve sizes are inconsistent");
    b.tadd.c = r.f64s();
    if (r.u8()) b.tadd_2d = TaddIntervals{r.f64s()};
    if (b.space == SpaceKind::graph) {
        std::uint64_t N = r.count(), M = r.count();
        std::vector<GraphEdge> edges(M);
        for (auto& e : edges) {
            e.u = r.u32();
            e.v = r.u32();
            e.weight = r.f64();
        }
        try {
            b.graph = std::make_shared<const WeightedGraph>(N, std::move(edges));
        } catch (const std::invalid_argument& e) {
            throw BundleError(std::string("bundle graph is invalid: ") + e.what());
        }
        for (auto v : b.vertices)
            if (v >= N) throw BundleError("bundle vertex outside the graph");
    }
    if (in.peek() != std::char_traits<char>::eof()) throw BundleError("trailing bytes after bundle");
    return b;
}

namespace detail {

template <class Point>
void fill_curve(Bundle& b, const Curve<Point>& c) {
    b.edges.assign(c.edge_lengths().begin(), c.edge_lengths().end());
    b.raw_prefix.assign(c.raw_prefix().begin(), c.raw_prefix().end());
    b.alpha = c.oracle_alpha();
}

}  // namespace detail

/// Captures an index; derived structures are built if not cached yet.
inline Bundle make_bundle(const CurveIndex<EuclideanOracle>& idx, bool with_2d = true) {
    Bundle b;
    b.space = SpaceKind::euclidean;
    b.norm = idx.oracle().norm();
    b.dimension = idx.oracle().dimension();
    b.coords.assign(idx.curve().points().begin(), idx.curve().points().end());
    detail::fill_curve(b, idx.curve());
    b.tadd = *idx.tadd();
    if (with_2d) b.tadd_2d = *idx.tadd_2d();
    return b;
}

inline Bundle make_bundle(const CurveIndex<GraphOracle>& idx, bool with_2d = true) {
    Bundle b;
    b.space = SpaceKind::graph;
    b.vertices.assign(idx.curve().points().begin(), idx.curve().points().end());
    detail::fill_curve(b, idx.curve());
    b.tadd = *idx.tadd();
    if (with_2d) b.tadd_2d = *idx.tadd_2d();
    b.graph = idx.oracle().graph_ptr();
    return b;
}

/// Rebuilds the index; the tree is rebuilt balanced from the edge lengths.
inline CurveIndex<EuclideanOracle> euclidean_index(const Bundle& b) {
    if (b.space != SpaceKind::euclidean) throw BundleError("bundle is not Euclidean");
    Curve<EuclideanPoint> c(std::deque<EuclideanPoint>(b.coords.begin(), b.coords.end()),
                            std::deque<double>(b.edges.begin(), b.edges.end()),
                            std::deque<double>(b.raw_prefix.begin(), b.raw_prefix.end()), b.alpha);
    CurveIndex<EuclideanOracle> idx(std::move(c), EuclideanOracle(b.dimension, b.norm));
    idx.set_tadd(b.tadd);
    if (b.tadd_2d) idx.set_tadd_2d(*b.tadd_2d);
    return idx;
}

inline CurveIndex<GraphOracle> graph_index(const Bundle& b) {
    if (b.space != SpaceKind::graph) throw BundleError("bundle is not a graph bundle");
    Curve<GraphVertex> c(std::deque<GraphVertex>(b.vertices.begin(), b.vertices.end()),
                         std::deque<double>(b.edges.begin(), b.edges.end()),
                         std::deque<double>(b.raw_prefix.begin(), b.raw_prefix.end()), b.alpha);
    CurveIndex<GraphOracle> idx(std::move(c), GraphOracle(b.graph));
    idx.set_tadd(b.tadd);
    if (b.tadd_2d) idx.set_tadd_2d(*b.tadd_2d);
    return idx;
}

}  // namespace pfre

#endif  // PFRE_BUNDLE_HPP
