#ifndef PFRE_FRECHET_HPP
#define PFRE_FRECHET_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "curve.hpp"
#include "index.hpp"
#include "metric_oracles.hpp"
#include "simplification_tree.hpp"
#include "tadd.hpp"

namespace pfre {

/// Raised when an exact O(nm) computation would exceed its cell budget.
class BudgetExceeded : public std::length_error {
   public:
    BudgetExceeded(std::size_t need, std::size_t budget)
        : std::length_error("exact computation needs " + std::to_string(need) +
                            " cells, budget is " + std::to_string(budget)) {}
};

inline constexpr std::size_t default_exact_budget = std::size_t{1} << 26;

/// Discrete Frechet distance by the O(nm) dynamic program, two rows at a time.
template <DistanceOracle Oracle>
double exact_discrete_frechet(const Curve<typename Oracle::point_type>& P,
                              const Curve<typename Oracle::point_type>& Q, const Oracle& oracle,
                              std::size_t budget = default_exact_budget) {
    const std::size_t n = P.size(), m = Q.size();
    if (n == 0 || m == 0) throw std::invalid_argument("curves must be non-empty");
    if (n > budget / m) throw BudgetExceeded(n * m, budget);
    std::vector<double> prev(m), cur(m);
    for (std::size_t a = 1; a <= n; ++a) {
        for (std::size_t b = 1; b <= m; ++b) {
            double d = oracle(P[a], Q[b]);
            double best;
            if (a == 1 && b == 1)
                best = 0.0;
            else if (a == 1)
                best = cur[b - 2];
            else if (b == 1)
                best = prev[0];
            else
                best = std::min({prev[b - 1], cur[b - 2], prev[b - 2]});
            cur[b - 1] = std::max(best, d);
        }
        std::swap(prev, cur);
    }
    return prev[m - 1];
}

enum class Verdict { at_most, greater };

inline std::string to_string(Verdict v) {
    return v == Verdict::at_most ? "AT_MOST_ONE_PLUS_EPS_RHO" : "GREATER_THAN_RHO";
}

/// Query inputs; derived quantities are always recomputed from (eps, rho).
struct QueryParams {
    double epsilon = 0.5;
    double rho = 0.0;
    std::size_t i = 0;  // subrange of P, 1-based; 0 means the full curve
    std::size_t j = 0;

    static constexpr double k_decision = 6.0;
    static constexpr double k_value = 24.0;

    double rho_star() const { return (1.0 + 0.5 * epsilon) * rho; }
    double mu() const { return epsilon * rho / 6.0; }
    double max_alpha() const { return epsilon / 6.0; }

    std::pair<std::size_t, std::size_t> range(std::size_t n) const {
        std::size_t a = i == 0 ? 1 : i, b = j == 0 ? n : j;
        if (a < 1 || b > n || a > b)
            throw std::out_of_range("subrange [" + std::to_string(a) + ", " + std::to_string(b) +
                                    "] invalid for n = " + std::to_string(n));
        return {a, b};
    }

    void check_epsilon() const {
        if (!(epsilon > 0.0 && epsilon < 1.0))
            throw std::invalid_argument("epsilon must lie in (0, 1)");
    }
    void check_rho() const {
        if (!(rho >= 0.0) || !std::isfinite(rho))
            throw std::invalid_argument("rho must be finite and non-negative");
    }
};

struct DecisionOutcome {
    Verdict verdict = Verdict::greater;
    std::size_t cells_pushed = 0;
    std::size_t oracle_calls = 0;
    std::size_t simplified_vertices = 0;  // vertices of P^mu enumerated
    std::size_t node_visits = 0;
};

enum class SearchCase { interval, gap, beyond };

inline std::string to_string(SearchCase c) {
    switch (c) {
        case SearchCase::interval: return "a";
        case SearchCase::gap: return "b";
        case SearchCase::beyond: return "beyond";
    }
    return "?";
}

struct ValueResult {
    double nu = 0.0;
    double lambda = 0.0;  // lower end of the bracket found by the search
    double C = 0.0;       // d(p_i, q_1) / (1 + eps/2)
    double mu = 0.0;
    double rho_star = 0.0;  // final threshold of FindApproximation
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;  // +inf when beyond every endpoint
    SearchCase search_case = SearchCase::gap;
    std::size_t cells_pushed = 0;         // FindApproximation
    std::size_t search_cells_pushed = 0;  // all decide calls of the search
    std::size_t decide_calls = 0;
    std::size_t oracle_calls = 0;
    std::size_t threshold_raises = 0;
    bool rho_monotone = true;
};

namespace detail {

template <class Point, class QOracle>
struct LazyMatrix {
    const Curve<Point>& P;
    const Curve<Point>& Q;
    const QOracle& o;
    SimplificationCursor cur;
    std::size_t oracle_calls = 0;
    std::vector<const Point*> cols;
    // visited bits, column-major; only materialized columns take space
    std::vector<std::uint64_t> seen;

    LazyMatrix(const Curve<Point>& p, const Curve<Point>& q, const QOracle& oracle, SimplificationCursor c)
        : P(p), Q(q), o(oracle), cur(std::move(c)) {}

    // cell (a, b), both 0-based: a into P^mu, b into Q
    double at(std::size_t a, std::size_t b) {
        ++oracle_calls;
        return o(*cols[a], Q[b + 1]);
    }
    bool has_column(std::size_t a) {
        if (a < cols.size()) return true;
        while (cols.size() <= a) {
            auto k = cur.at(cols.size());
            if (!k) break;
            cols.push_back(&P[*k]);
        }
        seen.resize((cols.size() * Q.size() + 63) / 64, 0);
        return a < cols.size();
    }
    /// Marks (a, b) visited; false if it already was. Column a must exist.
    bool visit(std::size_t a, std::size_t b) {
        std::size_t bit = a * Q.size() + b;
        std::uint64_t mask = std::uint64_t{1} << (bit % 64);
        if (seen[bit / 64] & mask) return false;
        seen[bit / 64] |= mask;
        return true;
    }
    bool target(std::size_t a, std::size_t b) { return b + 1 == Q.size() && cur.is_last(a); }
};

template <class Point, class QOracle>
DecisionOutcome decide_impl(const SimplificationTree& tree, const Curve<Point>& P,
                            const Curve<Point>& Q, double eps, double rho, std::size_t i,
                            std::size_t j, const QOracle& qo) {
    const double rs = (1.0 + 0.5 * eps) * rho;
    LazyMatrix<Point, QOracle> M{P, Q, qo, SimplificationCursor(tree, eps * rho / 6.0, i, j)};
    const std::size_t m = Q.size();
    DecisionOutcome out;
    auto finish = [&](Verdict v) {
        out.verdict = v;
        out.oracle_calls = M.oracle_calls;
        out.simplified_vertices = M.cur.kept().size();
        out.node_visits = M.cur.node_visits();
        return out;
    };

    std::vector<std::pair<std::size_t, std::size_t>> stack;
    M.has_column(0);
    M.visit(0, 0);
    if (!(M.at(0, 0) <= rs)) return finish(Verdict::greater);
    stack.emplace_back(0, 0);
    ++out.cells_pushed;
    if (M.target(0, 0)) return finish(Verdict::at_most);

    while (!stack.empty()) {
        auto [a, b] = stack.back();
        stack.pop_back();
        const std::pair<std::size_t, std::size_t> nbrs[3] = {{a + 1, b}, {a, b + 1}, {a + 1, b + 1}};
        for (auto [x, y] : nbrs) {
            if (y >= m || !M.has_column(x)) continue;
            if (!M.visit(x, y)) continue;
            if (!(M.at(x, y) <= rs)) continue;
            stack.emplace_back(x, y);
            ++out.cells_pushed;
            if (M.target(x, y)) return finish(Verdict::at_most);
        }
    }
    return finish(Verdict::greater);
}

}  // namespace detail

/**
 * A-decision on P[i, j]: AT_MOST implies D_F <= (1 + eps) rho and GREATER
 * implies D_F > rho, provided the query oracle has slack <= eps / 6.
 */
template <DistanceOracle Oracle, DistanceOracle QOracle>
DecisionOutcome decide(const CurveIndex<Oracle>& index, const Curve<typename Oracle::point_type>& Q,
                       const QueryParams& params, const QOracle& query_oracle) {
    params.check_epsilon();
    params.check_rho();
    if (Q.size() == 0) throw std::invalid_argument("query curve is empty");
    if (query_oracle.alpha() > params.max_alpha())
        throw std::invalid_argument("oracle slack exceeds epsilon / 6");
    auto [i, j] = params.range(index.size());
    return detail::decide_impl(index.tree(), index.curve(), Q, params.epsilon, params.rho, i, j,
                               query_oracle);
}

template <DistanceOracle Oracle>
DecisionOutcome decide(const CurveIndex<Oracle>& index, const Curve<typename Oracle::point_type>& Q,
                       const QueryParams& params) {
    return decide(index, Q, params, index.oracle());
}

/// Sorted unique endpoints of the rescaled 1-TADD, including 0.
inline std::vector<double> frechet_endpoints(const TaddIntervals& tadd, double eps) {
    std::vector<double> e;
    for (const auto& iv : scale_for_frechet(tadd, eps)) {
        e.push_back(iv.lo);
        e.push_back(iv.hi);
    }
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
    return e;
}

namespace detail {

template <class Point, class QOracle>
void find_approximation(const SimplificationTree& tree, const Curve<Point>& P,
                        const Curve<Point>& Q, double eps, double lambda, std::size_t i,
                        std::size_t j, const QOracle& qo, ValueResult& r) {
    const double g = 1.0 + 0.5 * eps;
    r.mu = eps / 6.0 * lambda;
    LazyMatrix<Point, QOracle> M{P, Q, qo, SimplificationCursor(tree, r.mu, i, j)};
    const std::size_t m = Q.size();

    M.has_column(0);
    M.visit(0, 0);
    r.C = M.at(0, 0) / g;
    double rs = g * std::max(r.C, lambda);

    using Entry = std::tuple<double, std::size_t, std::size_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
    r.cells_pushed = 1;
    bool reached = M.target(0, 0);

    while (!reached) {
        while (!stack.empty() && !reached) {
            auto [a, b] = stack.back();
            stack.pop_back();
            const std::pair<std::size_t, std::size_t> nbrs[3] = {
                {a + 1, b}, {a, b + 1}, {a + 1, b + 1}};
            for (auto [x, y] : nbrs) {
                if (y >= m || !M.has_column(x)) continue;
                if (!M.visit(x, y)) continue;
                double d = M.at(x, y);
                if (d <= rs) {
                    stack.emplace_back(x, y);
                    ++r.cells_pushed;
                    if (M.target(x, y)) {
                        reached = true;
                        break;
                    }
                } else {
                    heap.emplace(d, x, y);
                }
            }
        }
        if (reached) break;
        if (heap.empty()) throw std::logic_error("free-space search exhausted before the target");
        auto [d, x, y] = heap.top();
        heap.pop();
        double next = g * d;
        double before = rs;
        rs = std::max(rs, next);
        r.rho_monotone = r.rho_monotone && rs >= before;
        if (rs > before) ++r.threshold_raises;
        stack.emplace_back(x, y);
        ++r.cells_pushed;
        reached = M.target(x, y);
    }
    r.rho_star = rs;
    r.nu = rs / g;
    r.oracle_calls += M.oracle_calls;
}

}  // namespace detail

/**
 * A-value on P[i, j]: binary search over the rescaled 1-TADD endpoints with
 * decide, then FindApproximation from the resulting lower bound lambda.
 */
template <DistanceOracle Oracle, DistanceOracle QOracle>
ValueResult value(const CurveIndex<Oracle>& index, const Curve<typename Oracle::point_type>& Q,
                  const QueryParams& params, const QOracle& query_oracle) {
    params.check_epsilon();
    if (Q.size() == 0) throw std::invalid_argument("query curve is empty");
    if (query_oracle.alpha() > params.max_alpha())
        throw std::invalid_argument("oracle slack exceeds epsilon / 6");
    const double eps = params.epsilon;
    auto [i, j] = params.range(index.size());
    auto tadd = index.tadd();
    const auto E = frechet_endpoints(*tadd, eps);
    const auto K = static_cast<std::ptrdiff_t>(E.size());

    ValueResult r;
    // invariant: GREATER at E[lo] (or lo = -1), AT_MOST at E[hi] (or hi = K)
    std::ptrdiff_t lo = -1, hi = K;
    while (hi - lo > 1) {
        std::ptrdiff_t mid = lo + (hi - lo) / 2;
        auto o = detail::decide_impl(index.tree(), index.curve(), Q, eps, E[mid], i, j,
                                     query_oracle);
        ++r.decide_calls;
        r.search_cells_pushed += o.cells_pushed;
        r.oracle_calls += o.oracle_calls;
        (o.verdict == Verdict::greater ? lo : hi) = mid;
    }
    r.bracket_lo = lo < 0 ? 0.0 : E[lo];
    r.bracket_hi = hi == K ? std::numeric_limits<double>::infinity() : E[hi];
    r.lambda = r.bracket_lo;
    if (hi == K) {
        r.search_case = SearchCase::beyond;
    } else {
        r.search_case = SearchCase::gap;
        for (double c : tadd->c)
            if (6.0 * c / eps <= r.bracket_lo && r.bracket_hi <= 12.0 * c / eps) {
                r.search_case = SearchCase::interval;
                break;
            }
    }
    detail::find_approximation(index.tree(), index.curve(), Q, eps, r.lambda, i, j, query_oracle,
                               r);
    return r;
}

template <DistanceOracle Oracle>
ValueResult value(const CurveIndex<Oracle>& index, const Curve<typename Oracle::point_type>& Q,
                  const QueryParams& params) {
    return value(index, Q, params, index.oracle());
}

}  // namespace pfre

#endif  // PFRE_FRECHET_HPP
