#ifndef PFRE_HAUSDORFF_HPP
#define PFRE_HAUSDORFF_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "curve.hpp"
#include "frechet.hpp"
#include "index.hpp"
#include "nn.hpp"
#include "simplification_tree.hpp"
#include "tadd.hpp"

namespace pfre {

/// max of both directed discrete Hausdorff distances, by double loop.
template <DistanceOracle Oracle>
double exact_hausdorff(const Curve<typename Oracle::point_type>& P,
                       const Curve<typename Oracle::point_type>& Q, const Oracle& oracle,
                       std::size_t budget = default_exact_budget) {
    const std::size_t n = P.size(), m = Q.size();
    if (n == 0 || m == 0) throw std::invalid_argument("curves must be non-empty");
    if (n > budget / m) throw BudgetExceeded(n * m, budget);
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> col(m, inf);
    double pq = 0.0;
    for (std::size_t a = 1; a <= n; ++a) {
        double row = inf;
        for (std::size_t b = 1; b <= m; ++b) {
            double d = oracle(P[a], Q[b]);
            row = std::min(row, d);
            col[b - 1] = std::min(col[b - 1], d);
        }
        pq = std::max(pq, row);
    }
    return std::max(pq, *std::max_element(col.begin(), col.end()));
}

/// A zero of the Hausdorff matrix: column t of P^mu, row b of Q (0-based),
/// with the distance of the nearest vertex that produced it.
struct HausdorffZero {
    std::size_t column;
    std::size_t row;
    double distance;
};

struct HausdorffOutcome {
    Verdict verdict = Verdict::greater;
    bool early_exit = false;  // |P^mu| exceeded 8cm/eps
    double rho_star = 0.0;
    double mu = 0.0;
    std::size_t simplified_vertices = 0;
    std::size_t zeroes = 0;
    std::size_t stack_pushes = 0;
    std::size_t max_row_excess = 0;  // max over rows of pushes - 2 * zeroes
    std::size_t nn_queries = 0;
    std::size_t oracle_calls = 0;
    std::vector<HausdorffZero> zero_cells;  // filled when requested
};

namespace detail {

template <class Index>
HausdorffOutcome hausdorff_decide_impl(const Index& index,
                                       const Curve<typename Index::point_type>& Q, double eps,
                                       double rho_star, double mu, std::size_t i, std::size_t j,
                                       double c, bool keep_zeroes) {
    HausdorffOutcome out;
    out.rho_star = rho_star;
    out.mu = mu;
    const std::size_t m = Q.size();
    SimplificationCursor cur(index.tree(), mu, i, j);
    if (std::isfinite(c)) {
        double cap = 8.0 * c * static_cast<double>(m) / eps;
        cur.fill(static_cast<std::size_t>(std::min(cap, 1e18)) + 1);
        if (static_cast<double>(cur.kept().size()) > cap) {
            out.early_exit = true;
            out.simplified_vertices = cur.kept().size();
            return out;
        }
    }
    cur.fill();
    const std::vector<std::size_t>& K = cur.kept();
    out.simplified_vertices = K.size();

    auto nn = index.nn();
    std::vector<char> alive(K.size(), 1);
    std::size_t remaining = K.size();
    std::vector<std::pair<std::size_t, std::size_t>> stack;

    for (std::size_t b = 0; b < m; ++b) {
        const auto& q = Q[b + 1];
        std::size_t pushes = 1, zeroes = 0;
        stack.assign(1, {i, j});
        while (!stack.empty()) {
            auto [lo, hi] = stack.back();
            stack.pop_back();
            if (lo > hi) continue;
            ++out.nn_queries;
            NnHit hit = nn->nearest(q, lo, hi, &out.oracle_calls);
            if (hit.distance > rho_star) continue;
            // column of the kept vertex at or before the hit
            std::size_t t = static_cast<std::size_t>(
                std::upper_bound(K.begin(), K.end(), hit.index) - K.begin() - 1);
            ++zeroes;
            if (keep_zeroes) out.zero_cells.push_back({t, b, hit.distance});
            if (alive[t]) {
                alive[t] = 0;
                --remaining;
            }
            std::size_t s = K[t];
            std::size_t next = t + 1 < K.size() ? K[t + 1] : j + 1;
            if (s > lo) {
                stack.emplace_back(lo, s - 1);
                ++pushes;
            }
            if (next <= hi) {
                stack.emplace_back(next, hi);
                ++pushes;
            }
        }
        out.zeroes += zeroes;
        out.stack_pushes += pushes;
        if (pushes > 2 * zeroes) out.max_row_excess = std::max(out.max_row_excess, pushes - 2 * zeroes);
        if (zeroes == 0) return out;  // row b has no zero
    }
    out.verdict = remaining == 0 ? Verdict::at_most : Verdict::greater;
    return out;
}

}  // namespace detail

/**
 * Hausdorff A-decision with mu = eps * rho_star: AT_MOST implies
 * D_H <= (1 + eps) rho_star, GREATER implies D_H > rho_star. With a finite
 * packedness constant c, more than 8cm/eps simplified vertices answer
 * GREATER immediately.
 */
template <DistanceOracle Oracle>
HausdorffOutcome hausdorff_decide(const CurveIndex<Oracle>& index,
                                  const Curve<typename Oracle::point_type>& Q, double eps,
                                  double rho_star, std::size_t i = 0, std::size_t j = 0,
                                  double c = std::numeric_limits<double>::infinity()) {
    QueryParams qp{eps, rho_star, i, j};
    qp.check_epsilon();
    qp.check_rho();
    if (Q.size() == 0) throw std::invalid_argument("query curve is empty");
    if (!(c > 0.0)) throw std::invalid_argument("packedness constant must be positive");
    auto [a, b] = qp.range(index.size());
    return detail::hausdorff_decide_impl(index, Q, eps, rho_star, eps * rho_star, a, b, c, false);
}

struct HausdorffValue {
    double nu = 0.0;
    double lambda = 0.0;  // D_H(Q -> P[i, j])
    double lo = 0.0;      // chosen candidate [lo, hi]
    double hi = 0.0;
    double mu = 0.0;
    double extracted = 0.0;  // max over rows and columns of the minimal zero distance
    std::size_t candidates = 0;
    std::size_t decide_calls = 0;
    std::size_t zeroes = 0;  // of the chosen candidate
    std::size_t total_zeroes = 0;
    std::size_t nn_queries = 0;
    std::size_t oracle_calls = 0;
};

/**
 * Hausdorff A-value: binary search over candidates [c/2, 4c] from the 2-D
 * TADD plus [lambda, 2 lambda] for the first one whose decision succeeds
 * with rho* = hi and mu = eps * lo, then read the distance off its zeroes.
 * The result is within mu / 2 of D_H.
 */
template <DistanceOracle Oracle>
HausdorffValue hausdorff_value(const CurveIndex<Oracle>& index,
                               const Curve<typename Oracle::point_type>& Q, double eps,
                               std::size_t i = 0, std::size_t j = 0) {
    QueryParams qp{eps, 0.0, i, j};
    qp.check_epsilon();
    if (Q.size() == 0) throw std::invalid_argument("query curve is empty");
    auto [a, b] = qp.range(index.size());
    const std::size_t m = Q.size();
    HausdorffValue r;

    auto nn = index.nn();
    for (std::size_t k = 1; k <= m; ++k) {
        ++r.nn_queries;
        r.lambda = std::max(r.lambda, nn->nearest(Q[k], a, b, &r.oracle_calls).distance);
    }

    auto cand = scale_for_hausdorff(*index.tadd_2d(), r.lambda);
    std::sort(cand.begin(), cand.end(), [](const ScaledInterval& x, const ScaledInterval& y) {
        return x.hi < y.hi || (x.hi == y.hi && x.lo < y.lo);
    });
    r.candidates = cand.size();
    const auto K = static_cast<std::ptrdiff_t>(cand.size());
    constexpr double inf = std::numeric_limits<double>::infinity();

    auto run = [&](double rho_star, double mu) {
        auto o = detail::hausdorff_decide_impl(index, Q, eps, rho_star, mu, a, b, inf, true);
        ++r.decide_calls;
        r.total_zeroes += o.zeroes;
        r.nn_queries += o.nn_queries;
        r.oracle_calls += o.oracle_calls;
        return o;
    };

    std::ptrdiff_t lo = -1, hi = K;
    HausdorffOutcome best;
    while (hi - lo > 1) {
        std::ptrdiff_t mid = lo + (hi - lo) / 2;
        auto o = run(cand[mid].hi, eps * cand[mid].lo);
        if (o.verdict == Verdict::at_most) {
            hi = mid;
            best = std::move(o);
        } else {
            lo = mid;
        }
    }
    if (hi == K) {
        // unreachable for a valid TADD; every cell is a zero at an infinite threshold
        best = run(inf, 0.0);
        r.lo = r.hi = inf;
    } else {
        r.lo = cand[hi].lo;
        r.hi = cand[hi].hi;
    }
    r.mu = best.mu;
    r.zeroes = best.zeroes;

    std::vector<double> row(m, inf), col(best.simplified_vertices, inf);
    for (const auto& z : best.zero_cells) {
        row[z.row] = std::min(row[z.row], z.distance);
        col[z.column] = std::min(col[z.column], z.distance);
    }
    double e = 0.0;
    for (double v : row) e = std::max(e, v);
    for (double v : col) e = std::max(e, v);
    r.extracted = e;
    r.nu = e + 0.5 * best.mu;
    return r;
}

}  // namespace pfre

#endif  // PFRE_HAUSDORFF_HPP
