#ifndef PFRE_SIMPLIFICATION_TREE_HPP
#define PFRE_SIMPLIFICATION_TREE_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "curve.hpp"

namespace pfre {

/**
 * Balanced leaf tree over the edge widths of a curve.
 *
 * Leaf k (1-based, in curve order) carries w_k = d(p_k, p_{k+1}), the width
 * of the half-open prefix-length interval (lambda_k, lambda_{k+1}]. Internal
 * nodes store the sum and count of the leaves below them. Balance is AVL on
 * internal nodes; sums are always recomputed from the children, never
 * patched by deltas.
 */
class SimplificationTree {
   public:
    static constexpr std::int32_t nil = -1;

    struct Node {
        double sum = 0.0;
        std::uint32_t count = 0;
        std::int32_t height = 0;  // leaves have height 0
        std::int32_t left = nil;
        std::int32_t right = nil;
        bool leaf() const { return left == nil; }
    };

    SimplificationTree() = default;

    explicit SimplificationTree(std::span<const double> widths) {
        nodes_.reserve(widths.empty() ? 0 : 2 * widths.size() - 1);
        if (!widths.empty()) root_ = build(widths, 0, widths.size());
    }

    /// Number of curve vertices represented (leaves + 1).
    std::size_t vertex_count() const { return leaf_count() + 1; }
    std::size_t leaf_count() const { return root_ == nil ? 0 : nodes_[root_].count; }
    double total() const { return root_ == nil ? 0.0 : nodes_[root_].sum; }
    std::int32_t height() const { return root_ == nil ? 0 : nodes_[root_].height; }
    std::int32_t root() const { return root_; }
    const Node& node(std::int32_t id) const { return nodes_[id]; }

    /// Leaf widths in order.
    std::vector<double> widths() const {
        std::vector<double> out;
        out.reserve(leaf_count());
        collect(root_, out);
        return out;
    }

    /// Sum of the first x - 1 widths, i.e. lambda_x relative to p_1.
    double prefix(std::size_t x, std::size_t* visits = nullptr) const {
        if (x < 1 || x > vertex_count()) throw std::out_of_range("vertex index out of range");
        std::size_t remaining = x - 1;
        double acc = 0.0;
        std::int32_t cur = root_;
        while (remaining > 0 && cur != nil) {
            if (visits) ++*visits;
            const Node& nd = nodes_[cur];
            if (nd.leaf()) {
                acc += nd.sum;
                break;
            }
            const Node& l = nodes_[nd.left];
            if (remaining < l.count) {
                cur = nd.left;
            } else {
                acc += l.sum;
                remaining -= l.count;
                if (remaining == 0) break;
                cur = nd.right;
            }
        }
        return acc;
    }

    struct Hit {
        std::size_t vertex;  // 1-based vertex y
        double prefix;       // lambda_y relative to p_1
    };

    /**
     * First vertex y whose relative prefix length exceeds `target`
     * (strictly), found by one root-to-leaf descent. Returns nullopt when
     * target >= total length.
     */
    std::optional<Hit> first_exceeding(double target, std::size_t* visits = nullptr) const {
        if (root_ == nil || !(nodes_[root_].sum > target)) {
            if (visits && root_ != nil) ++*visits;
            return std::nullopt;
        }
        double acc = 0.0;
        std::size_t before = 0;
        std::int32_t cur = root_;
        while (true) {
            if (visits) ++*visits;
            const Node& nd = nodes_[cur];
            if (nd.leaf()) break;
            const Node& l = nodes_[nd.left];
            if (acc + l.sum > target) {
                cur = nd.left;
            } else {
                acc += l.sum;
                before += l.count;
                cur = nd.right;
            }
        }
        // leaf index before+1 covers (lambda_{before+1}, lambda_{before+2}]
        return Hit{before + 2, acc + nodes_[cur].sum};
    }

    /// Root-to-leaf path of the last descent, kept by a cursor between calls.
    struct Finger {
        struct Step {
            std::int32_t node;
            std::size_t before;
            double left_end;  // acc + left.sum, where the descent turned left
        };
        std::vector<Step> path;  // left turns only
        std::int32_t leaf = nil;
        double acc = 0.0;
        std::size_t before = 0;
    };

    /**
     * Same answer as first_exceeding(target), bit for bit, for targets that
     * never decrease between calls with the same finger. The new path leaves
     * the old one at the topmost left turn the target now passes, so only
     * the subtree below that turn is walked.
     */
    std::optional<Hit> first_exceeding(double target, Finger& f, std::size_t* visits = nullptr) const {
        if (root_ == nil || !(nodes_[root_].sum > target)) {
            if (visits && root_ != nil) ++*visits;
            return std::nullopt;
        }
        double acc = 0.0;
        std::size_t before = 0;
        std::int32_t cur = root_;
        if (f.leaf != nil) {
            auto it = std::find_if(f.path.begin(), f.path.end(),
                                   [&](const auto& s) { return !(s.left_end > target); });
            if (it == f.path.end()) return Hit{f.before + 2, f.acc + nodes_[f.leaf].sum};
            const Node& nd = nodes_[it->node];
            acc = it->left_end;
            before = it->before + nodes_[nd.left].count;
            cur = nd.right;
            f.path.erase(it, f.path.end());
        } else {
            f.path.clear();
        }
        while (true) {
            if (visits) ++*visits;
            const Node& nd = nodes_[cur];
            if (nd.leaf()) break;
            const Node& l = nodes_[nd.left];
            if (acc + l.sum > target) {
                f.path.push_back({cur, before, acc + l.sum});
                cur = nd.left;
            } else {
                acc += l.sum;
                before += l.count;
                cur = nd.right;
            }
        }
        f.leaf = cur;
        f.acc = acc;
        f.before = before;
        return Hit{before + 2, acc + nodes_[cur].sum};
    }

    // Updates at either end, O(log n) each.
    void push_back(double width) { root_ = insert_end(root_, make_leaf(width), false); }
    void push_front(double width) { root_ = insert_end(root_, make_leaf(width), true); }
    void pop_back() { remove_end(false); }
    void pop_front() { remove_end(true); }

    void extend(End end, double width) {
        if (!(width >= 0.0)) throw std::invalid_argument("edge length must be non-negative");
        end == End::head ? push_front(width) : push_back(width);
    }
    void truncate(End end) {
        if (leaf_count() == 0) throw std::length_error("cannot truncate a single-vertex curve");
        end == End::head ? pop_front() : pop_back();
    }

    /// Checks sums, counts, heights and the AVL condition; used by tests.
    bool check_invariants() const {
        if (root_ == nil) return true;
        bool ok = true;
        check(root_, ok);
        return ok;
    }

   private:
    std::int32_t make_leaf(double width) {
        std::int32_t id = alloc();
        nodes_[id] = Node{width, 1, 0, nil, nil};
        return id;
    }

    std::int32_t make_internal(std::int32_t l, std::int32_t r) {
        std::int32_t id = alloc();
        nodes_[id].left = l;
        nodes_[id].right = r;
        pull(id);
        return id;
    }

    std::int32_t alloc() {
        if (!free_.empty()) {
            std::int32_t id = free_.back();
            free_.pop_back();
            return id;
        }
        nodes_.emplace_back();
        return static_cast<std::int32_t>(nodes_.size() - 1);
    }

    void release(std::int32_t id) { free_.push_back(id); }

    void pull(std::int32_t id) {
        Node& nd = nodes_[id];
        const Node& l = nodes_[nd.left];
        const Node& r = nodes_[nd.right];
        nd.sum = l.sum + r.sum;
        nd.count = l.count + r.count;
        nd.height = 1 + std::max(l.height, r.height);
    }

    std::int32_t build(std::span<const double> w, std::size_t lo, std::size_t hi) {
        if (hi - lo == 1) return make_leaf(w[lo]);
        std::size_t mid = lo + (hi - lo + 1) / 2;
        std::int32_t l = build(w, lo, mid);
        std::int32_t r = build(w, mid, hi);
        return make_internal(l, r);
    }

    std::int32_t rotate_right(std::int32_t id) {
        std::int32_t l = nodes_[id].left;
        nodes_[id].left = nodes_[l].right;
        pull(id);
        nodes_[l].right = id;
        pull(l);
        return l;
    }

    std::int32_t rotate_left(std::int32_t id) {
        std::int32_t r = nodes_[id].right;
        nodes_[id].right = nodes_[r].left;
        pull(id);
        nodes_[r].left = id;
        pull(r);
        return r;
    }

    std::int32_t rebalance(std::int32_t id) {
        pull(id);
        Node& nd = nodes_[id];
        int bal = nodes_[nd.left].height - nodes_[nd.right].height;
        if (bal > 1) {
            std::int32_t l = nd.left;
            if (nodes_[nodes_[l].left].height < nodes_[nodes_[l].right].height)
                nodes_[id].left = rotate_left(l);
            return rotate_right(id);
        }
        if (bal < -1) {
            std::int32_t r = nd.right;
            if (nodes_[nodes_[r].right].height < nodes_[nodes_[r].left].height)
                nodes_[id].right = rotate_right(r);
            return rotate_left(id);
        }
        return id;
    }

    std::int32_t insert_end(std::int32_t id, std::int32_t leaf, bool front) {
        if (id == nil) return leaf;
        if (nodes_[id].leaf()) return front ? make_internal(leaf, id) : make_internal(id, leaf);
        if (front)
            nodes_[id].left = insert_end(nodes_[id].left, leaf, true);
        else
            nodes_[id].right = insert_end(nodes_[id].right, leaf, false);
        return rebalance(id);
    }

    void remove_end(bool front) {
        if (root_ == nil) throw std::length_error("cannot truncate a single-vertex curve");
        root_ = remove_end(root_, front);
    }

    std::int32_t remove_end(std::int32_t id, bool front) {
        Node& nd = nodes_[id];
        if (nd.leaf()) {
            release(id);
            return nil;
        }
        std::int32_t side = front ? nd.left : nd.right;
        if (nodes_[side].leaf()) {
            std::int32_t other = front ? nd.right : nd.left;
            release(side);
            release(id);
            return other;
        }
        if (front)
            nodes_[id].left = remove_end(side, true);
        else
            nodes_[id].right = remove_end(side, false);
        return rebalance(id);
    }

    void collect(std::int32_t id, std::vector<double>& out) const {
        if (id == nil) return;
        if (nodes_[id].leaf()) {
            out.push_back(nodes_[id].sum);
            return;
        }
        collect(nodes_[id].left, out);
        collect(nodes_[id].right, out);
    }

    void check(std::int32_t id, bool& ok) const {
        const Node& nd = nodes_[id];
        if (nd.leaf()) {
            ok = ok && nd.count == 1 && nd.height == 0 && nd.right == nil;
            return;
        }
        if (nd.right == nil) {
            ok = false;
            return;
        }
        check(nd.left, ok);
        check(nd.right, ok);
        const Node& l = nodes_[nd.left];
        const Node& r = nodes_[nd.right];
        ok = ok && nd.sum == l.sum + r.sum && nd.count == l.count + r.count &&
             nd.height == 1 + std::max(l.height, r.height) && std::abs(l.height - r.height) <= 1;
    }

    std::vector<Node> nodes_;
    std::vector<std::int32_t> free_;
    std::int32_t root_ = nil;
};

template <class Point>
SimplificationTree build_tree(const Curve<Point>& curve) {
    std::vector<double> w(curve.edge_lengths().begin(), curve.edge_lengths().end());
    return SimplificationTree(w);
}

/// Vertices of P[i, j]^mu in order (1-based indices into P).
struct SimplifiedView {
    std::vector<std::size_t> indices;
    double mu = 0.0;
    bool truncated = false;
    std::size_t node_visits = 0;
};

/**
 * Incremental enumeration of P[i, j]^mu.
 *
 * Starting at p_i, the successor of a kept vertex p_x is the first p_y with
 * l(P[x, y]) > mu; p_j is always the final vertex. Each successor costs one
 * root-to-leaf descent.
 */
class SimplificationCursor {
   public:
    SimplificationCursor(const SimplificationTree& tree, double mu, std::size_t i, std::size_t j)
        : tree_(&tree), mu_(mu), last_(j) {
        if (i < 1 || j > tree.vertex_count() || i > j)
            throw std::out_of_range("simplification range invalid");
        if (!(mu >= 0.0)) throw std::invalid_argument("mu must be non-negative");
        kept_.push_back(i);
        prefix_ = tree.prefix(i, &visits_);
        done_ = (i == j);
    }

    /// Index into P of the a-th kept vertex (0-based), computing on demand.
    std::optional<std::size_t> at(std::size_t a) {
        while (kept_.size() <= a && !done_) advance();
        if (a < kept_.size()) return kept_[a];
        return std::nullopt;
    }

    bool is_last(std::size_t a) {
        if (!at(a)) return false;
        return kept_[a] == last_;
    }

    /// Enumerates up to `cap` vertices (all when cap is empty).
    std::size_t fill(std::optional<std::size_t> cap = std::nullopt) {
        while (!done_ && (!cap || kept_.size() < *cap)) advance();
        return kept_.size();
    }

    bool done() const { return done_; }
    const std::vector<std::size_t>& kept() const { return kept_; }
    std::size_t node_visits() const { return visits_; }
    double mu() const { return mu_; }

   private:
    void advance() {
        auto hit = tree_->first_exceeding(prefix_ + mu_, finger_, &visits_);
        std::size_t x = kept_.back();
        std::size_t y = hit ? std::max(hit->vertex, x + 1) : last_;
        if (y >= last_) {
            kept_.push_back(last_);
            done_ = true;
            return;
        }
        kept_.push_back(y);
        prefix_ = hit->prefix;
    }

    const SimplificationTree* tree_;
    SimplificationTree::Finger finger_;
    double mu_;
    std::size_t last_;
    std::vector<std::size_t> kept_;
    double prefix_ = 0.0;
    std::size_t visits_ = 0;
    bool done_ = false;
};

inline SimplifiedView simplify(const SimplificationTree& tree, double mu, std::size_t i,
                               std::size_t j, std::optional<std::size_t> cap = std::nullopt) {
    SimplificationCursor cur(tree, mu, i, j);
    cur.fill(cap);
    SimplifiedView v;
    v.indices = cur.kept();
    v.mu = mu;
    v.truncated = !cur.done();
    v.node_visits = cur.node_visits();
    return v;
}

}  // namespace pfre

#endif  // PFRE_SIMPLIFICATION_TREE_HPP
