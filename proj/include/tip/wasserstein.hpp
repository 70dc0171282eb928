#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "tip/matrix.hpp"
#include "tip/persistence.hpp"
#include "tip/scalar.hpp"

namespace tip {

// Minimum-cost perfect assignment (Jonker-Volgenant style shortest
// augmenting paths with potentials, O(n^3)). Returns row -> column.
inline std::vector<int> hungarian_assignment(const Mat<double>& cost) {
    if (cost.rows() != cost.cols()) throw param_error("hungarian_assignment: matrix not square");
    int n = static_cast<int>(cost.rows());
    if (n == 0) return {};
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0), v(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<int> p(static_cast<std::size_t>(n) + 1, 0), way(static_cast<std::size_t>(n) + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(static_cast<std::size_t>(n) + 1, inf);
        std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
        do {
            used[static_cast<std::size_t>(j0)] = 1;
            int i0 = p[static_cast<std::size_t>(j0)];
            int j1 = -1;
            double delta = inf;
            for (int j = 1; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) continue;
                double cur = cost(static_cast<std::size_t>(i0 - 1), static_cast<std::size_t>(j - 1)) -
                             u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
                if (cur < minv[static_cast<std::size_t>(j)]) {
                    minv[static_cast<std::size_t>(j)] = cur;
                    way[static_cast<std::size_t>(j)] = j0;
                }
                if (minv[static_cast<std::size_t>(j)] < delta) {
                    delta = minv[static_cast<std::size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) {
                    u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
                    v[static_cast<std::size_t>(j)] -= delta;
                } else {
                    minv[static_cast<std::size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (p[static_cast<std::size_t>(j0)] != 0);
        do {
            int j1 = way[static_cast<std::size_t>(j0)];
            p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> result(static_cast<std::size_t>(n), -1);
    for (int j = 1; j <= n; ++j)
        if (p[static_cast<std::size_t>(j)] > 0) result[static_cast<std::size_t>(p[static_cast<std::size_t>(j)] - 1)] = j - 1;
    return result;
}

enum class GroundMetric { linf, l2 };

namespace detail {

inline double point_distance(double b1, double d1, double b2, double d2, GroundMetric m) {
    double dx = std::abs(b1 - b2);
    double dy = std::abs(d1 - d2);
    return m == GroundMetric::linf ? std::max(dx, dy) : std::sqrt(dx * dx + dy * dy);
}

// Distance from (b, d) to its nearest diagonal point ((b+d)/2, (b+d)/2).
inline double diagonal_distance(double b, double d, GroundMetric m) {
    double pers = d - b;
    return m == GroundMetric::linf ? pers / 2.0 : pers / std::sqrt(2.0);
}

template <class S>
std::vector<std::size_t> off_diagonal_indices(const Diagram<S>& d, double tol = 1e-12) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < d.tuples.size(); ++i)
        if (value_of(d.tuples[i].death) - value_of(d.tuples[i].birth) > tol) idx.push_back(i);
    return idx;
}

// Augmented square cost for optimal partial matching: every point may match
// a point of the other diagram or its own diagonal projection; the
// ghost-to-ghost block costs nothing.
template <class S>
Mat<double> matching_cost(const Diagram<S>& a, const Diagram<S>& b,
                          const std::vector<std::size_t>& ia, const std::vector<std::size_t>& ib,
                          GroundMetric m) {
    std::size_t p = ia.size(), q = ib.size();
    return Mat<double>::from_fn(p + q, p + q, [&](std::size_t i, std::size_t j) {
        if (i < p && j < q) {
            const auto& ta = a.tuples[ia[i]];
            const auto& tb = b.tuples[ib[j]];
            return point_distance(value_of(ta.birth), value_of(ta.death), value_of(tb.birth),
                                  value_of(tb.death), m);
        }
        if (i < p) {
            const auto& ta = a.tuples[ia[i]];
            return diagonal_distance(value_of(ta.birth), value_of(ta.death), m);
        }
        if (j < q) {
            const auto& tb = b.tuples[ib[j]];
            return diagonal_distance(value_of(tb.birth), value_of(tb.death), m);
        }
        return 0.0;
    });
}

} // namespace detail

// Exact 1-Wasserstein distance between diagrams: optimal transport where
// unmatched points pay their distance to the diagonal. Diagonal tuples of
// the augmented diagrams cost nothing and are dropped up front.
inline double wasserstein1(const Diagram<double>& a, const Diagram<double>& b,
                           GroundMetric m = GroundMetric::linf) {
    auto ia = detail::off_diagonal_indices(a);
    auto ib = detail::off_diagonal_indices(b);
    if (ia.empty() && ib.empty()) return 0.0;
    Mat<double> cost = detail::matching_cost(a, b, ia, ib, m);
    std::vector<int> assign = hungarian_assignment(cost);
    double total = 0.0;
    for (std::size_t i = 0; i < assign.size(); ++i)
        total += cost(i, static_cast<std::size_t>(assign[i]));
    return total;
}

// Differentiable Wasserstein surrogate: the optimal matching is fixed from
// the current values, then the matched costs are rebuilt on the scalar type
// so gradients flow through point coordinates. The matching itself is a
// recorded discrete decision.
template <class S>
S wasserstein_loss(const Diagram<S>& a, const Diagram<S>& b, GroundMetric m = GroundMetric::linf) {
    const S* ref = nullptr;
    if (!a.tuples.empty()) ref = &a.tuples[0].birth;
    else if (!b.tuples.empty()) ref = &b.tuples[0].birth;
    if (!ref) throw param_error("wasserstein_loss: both diagrams empty");

    auto ia = detail::off_diagonal_indices(a);
    auto ib = detail::off_diagonal_indices(b);
    record_decision(ia.size());
    record_decision(ib.size());
    S total = constant_like(*ref, 0.0);
    if (ia.empty() && ib.empty()) return total;

    Mat<double> cost = detail::matching_cost(a, b, ia, ib, m);
    std::vector<int> assign = hungarian_assignment(cost);
    std::size_t p = ia.size(), q = ib.size();
    auto pair_cost = [&](const DiagramTuple<S>& ta, const DiagramTuple<S>& tb) -> S {
        S dx = sabs(ta.birth - tb.birth);
        S dy = sabs(ta.death - tb.death);
        if (m == GroundMetric::linf) return smax(dx, dy);
        using std::sqrt;
        return sqrt(dx * dx + dy * dy);
    };
    auto diag_cost = [&](const DiagramTuple<S>& t) -> S {
        S pers = t.death - t.birth;
        if (m == GroundMetric::linf) return pers * 0.5;
        return pers * (1.0 / std::sqrt(2.0));
    };
    for (std::size_t i = 0; i < assign.size(); ++i) {
        std::size_t j = static_cast<std::size_t>(assign[i]);
        record_decision(j);
        if (i < p && j < q)
            total = total + pair_cost(a.tuples[ia[i]], b.tuples[ib[j]]);
        else if (i < p)
            total = total + diag_cost(a.tuples[ia[i]]);
        else if (j < q)
            total = total + diag_cost(b.tuples[ib[j]]);
    }
    return total;
}

} // namespace tip
