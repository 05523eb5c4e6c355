#ifndef PFRE_INDEX_HPP
#define PFRE_INDEX_HPP

#include <memory>
#include <mutex>
#include <optional>
#include <utility>

#include "curve.hpp"
#include "metric_oracles.hpp"
#include "nn.hpp"
#include "simplification_tree.hpp"
#include "tadd.hpp"

namespace pfre {

/**
 * Preprocessed curve P: the curve, its simplification tree, and lazily
 * built 1-TADD, 2-D TADD and range-NN structures.
 *
 * Queries may run concurrently; extend/truncate need exclusive access.
 * Derived structures are dropped on every update and rebuilt from the
 * current vertices on next use, so they match a fresh build exactly.
 */
template <DistanceOracle Oracle>
class CurveIndex {
   public:
    using oracle_type = Oracle;
    using point_type = typename Oracle::point_type;
    using curve_type = Curve<point_type>;

    CurveIndex(curve_type curve, Oracle oracle)
        : oracle_(std::move(oracle)),
          curve_(std::move(curve)),
          tree_(build_tree(curve_)),
          cache_(std::make_unique<Cache>()) {}

    template <class Range>
    static CurveIndex from_points(const Range& points, Oracle oracle) {
        auto c = build_curve(points, oracle);
        return CurveIndex(std::move(c), std::move(oracle));
    }

    const Oracle& oracle() const { return oracle_; }
    const curve_type& curve() const { return curve_; }
    const SimplificationTree& tree() const { return tree_; }
    std::size_t size() const { return curve_.size(); }

    std::shared_ptr<const TaddIntervals> tadd() const {
        std::lock_guard lock(cache_->mu);
        if (!cache_->tadd) cache_->tadd = std::make_shared<const TaddIntervals>(build_1tadd(curve_));
        return cache_->tadd;
    }

    std::shared_ptr<const TaddIntervals> tadd_2d() const
        requires requires(const curve_type& c, const Oracle& o) { build_2d_tadd(c, o); }
    {
        std::lock_guard lock(cache_->mu);
        if (!cache_->tadd2)
            cache_->tadd2 = std::make_shared<const TaddIntervals>(build_2d_tadd(curve_, oracle_));
        return cache_->tadd2;
    }

    auto nn() const
        requires HasNnIndex<Oracle>
    {
        using Nn = typename nn_index<Oracle>::type;
        std::lock_guard lock(cache_->mu);
        if (!cache_->nn) cache_->nn = std::make_shared<const Nn>(curve_, oracle_);
        return std::static_pointer_cast<const Nn>(cache_->nn);
    }

    /// Installs structures loaded from a bundle.
    void set_tadd(TaddIntervals t) {
        std::lock_guard lock(cache_->mu);
        cache_->tadd = std::make_shared<const TaddIntervals>(std::move(t));
    }
    void set_tadd_2d(TaddIntervals t) {
        std::lock_guard lock(cache_->mu);
        cache_->tadd2 = std::make_shared<const TaddIntervals>(std::move(t));
    }

    /// Adds p at one end. The edge length defaults to the oracle's value.
    void extend(End end, point_type p, std::optional<double> edge = std::nullopt) {
        if (!edge) edge = end == End::head ? oracle_(p, curve_[1]) : oracle_(curve_[size()], p);
        tree_.extend(end, *edge);
        end == End::head ? curve_.push_front(std::move(p), *edge)
                         : curve_.push_back(std::move(p), *edge);
        invalidate();
    }

    void truncate(End end) {
        tree_.truncate(end);
        end == End::head ? curve_.pop_front() : curve_.pop_back();
        invalidate();
    }

   private:
    struct Cache {
        std::mutex mu;
        std::shared_ptr<const TaddIntervals> tadd, tadd2;
        std::shared_ptr<const void> nn;
    };

    void invalidate() {
        std::lock_guard lock(cache_->mu);
        cache_->tadd.reset();
        cache_->tadd2.reset();
        cache_->nn.reset();
    }

    Oracle oracle_;
    curve_type curve_;
    SimplificationTree tree_;
    std::unique_ptr<Cache> cache_;
};

template <DistanceOracle Oracle, class Range>
CurveIndex<Oracle> make_index(const Range& points, Oracle oracle) {
    return CurveIndex<Oracle>::from_points(points, std::move(oracle));
}

}  // namespace pfre

#endif  // PFRE_INDEX_HPP
