#ifndef PFRE_IO_HPP
#define PFRE_IO_HPP

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "metric_oracles.hpp"

namespace pfre {

/// Malformed input, with the 1-based line it was found on.
class ParseError : public std::runtime_error {
   public:
    ParseError(const std::string& source, std::size_t line, const std::string& what)
        : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line(line) {}
    std::size_t line;
};

/// Contents of a curve file: coordinates for `curve`, vertex ids for `gcurve`.
struct CurveFile {
    bool graph = false;
    std::size_t dimension = 0;
    std::vector<EuclideanPoint> coords;
    std::vector<GraphVertex> vertices;

    std::size_t size() const { return graph ? vertices.size() : coords.size(); }
};

namespace detail {

class LineReader {
   public:
    LineReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

    // next non-blank, non-comment line split into tokens; false at EOF
    bool next(std::vector<std::string_view>& tokens) {
        while (std::getline(in_, buf_)) {
            ++line_;
            if (auto h = buf_.find('#'); h != std::string::npos) buf_.resize(h);
            tokens.clear();
            std::size_t k = 0;
            while (k < buf_.size()) {
                while (k < buf_.size() && std::isspace(static_cast<unsigned char>(buf_[k]))) ++k;
                std::size_t s = k;
                while (k < buf_.size() && !std::isspace(static_cast<unsigned char>(buf_[k]))) ++k;
                if (k > s) tokens.emplace_back(buf_.data() + s, k - s);
            }
            if (!tokens.empty()) return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(source_, line_, what); }

    template <class T>
    T number(std::string_view tok, const char* what) const {
        T v{};
        auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || p != tok.data() + tok.size())
            fail(std::string("expected ") + what + ", got '" + std::string(tok) + "'");
        return v;
    }

    std::size_t line() const { return line_; }

   private:
    std::istream& in_;
    std::string source_;
    std::string buf_;
    std::size_t line_ = 0;
};

}  // namespace detail

inline CurveFile read_curve(std::istream& in, const std::string& source = "<curve>") {
    detail::LineReader r(in, source);
    std::vector<std::string_view> t;
    if (!r.next(t)) r.fail("empty curve file");
    CurveFile f;
    std::size_t n = 0;
    if (t[0] == "curve" && t.size() == 3) {
        n = r.number<std::size_t>(t[1], "vertex count");
        f.dimension = r.number<std::size_t>(t[2], "dimension");
        if (f.dimension == 0) r.fail("dimension must be >= 1");
    } else if (t[0] == "gcurve" && t.size() == 2) {
        f.graph = true;
        n = r.number<std::size_t>(t[1], "vertex count");
    } else {
        r.fail("expected header 'curve <n> <d>' or 'gcurve <n>'");
    }
    if (n == 0) r.fail("curve must have at least one vertex");
    for (std::size_t k = 0; k < n; ++k) {
        if (!r.next(t)) r.fail("expected " + std::to_string(n) + " vertices, found " + std::to_string(k));
        if (f.graph) {
            if (t.size() != 1) r.fail("expected one vertex id");
            f.vertices.push_back(r.number<GraphVertex>(t[0], "vertex id"));
        } else {
            if (t.size() != f.dimension)
                r.fail("expected " + std::to_string(f.dimension) + " coordinates, got " +
                       std::to_string(t.size()));
            EuclideanPoint p(f.dimension);
            for (std::size_t c = 0; c < f.dimension; ++c) {
                p[c] = r.number<double>(t[c], "coordinate");
                if (!std::isfinite(p[c])) r.fail("coordinate is not finite");
            }
            f.coords.push_back(std::move(p));
        }
    }
    if (r.next(t)) r.fail("trailing content after " + std::to_string(n) + " vertices");
    return f;
}

inline WeightedGraph read_graph(std::istream& in, const std::string& source = "<graph>") {
    detail::LineReader r(in, source);
    std::vector<std::string_view> t;
    if (!r.next(t) || t[0] != "graph" || t.size() != 3) r.fail("expected header 'graph <N> <M>'");
    auto N = r.number<std::size_t>(t[1], "vertex count");
    auto M = r.number<std::size_t>(t[2], "edge count");
    std::vector<GraphEdge> edges;
    edges.reserve(M);
    for (std::size_t k = 0; k < M; ++k) {
        if (!r.next(t)) r.fail("expected " + std::to_string(M) + " edges, found " + std::to_string(k));
        if (t.size() != 4 || t[0] != "e") r.fail("expected 'e <u> <v> <w>'");
        GraphEdge e{r.number<GraphVertex>(t[1], "vertex id"), r.number<GraphVertex>(t[2], "vertex id"),
                    r.number<double>(t[3], "weight")};
        if (e.u >= N || e.v >= N) r.fail("edge endpoint out of range");
        if (!(e.weight > 0.0) || !std::isfinite(e.weight)) r.fail("weight must be positive");
        edges.push_back(e);
    }
    if (r.next(t)) r.fail("trailing content after " + std::to_string(M) + " edges");
    return WeightedGraph(N, std::move(edges));
}

/// Shortest round-trip decimal form.
inline std::string format_double(double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

inline void write_curve(std::ostream& out, const std::vector<EuclideanPoint>& pts) {
    std::size_t d = pts.empty() ? 1 : pts.front().size();
    out << "curve " << pts.size() << ' ' << d << '\n';
    for (const auto& p : pts) {
        for (std::size_t c = 0; c < p.size(); ++c) out << (c ? " " : "") << format_double(p[c]);
        out << '\n';
    }
}

inline void write_curve(std::ostream& out, const std::vector<GraphVertex>& vs) {
    out << "gcurve " << vs.size() << '\n';
    for (auto v : vs) out << v << '\n';
}

inline void write_graph(std::ostream& out, const WeightedGraph& g) {
    out << "graph " << g.vertex_count() << ' ' << g.edges().size() << '\n';
    for (const auto& e : g.edges()) out << "e " << e.u << ' ' << e.v << ' ' << format_double(e.weight) << '\n';
}

}  // namespace pfre

#endif  // PFRE_IO_HPP
