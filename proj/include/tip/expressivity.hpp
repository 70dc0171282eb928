#pragma once

#include <optional>
#include <vector>

#include "tip/generate.hpp"
#include "tip/persistence.hpp"
#include "tip/wl.hpp"

namespace tip {

enum class DistinguishFiltration { wl_labels, constant };

struct DistinguishVerdict {
    bool wl_distinguishes = false;
    bool ph_distinguishes = false;
    std::optional<int> divergence_iter;
};

namespace detail {

// Isolated vertices contribute nothing to an edge-indexed diagram, so they
// get a self-loop carrying their own filtration value.
inline Graph with_isolated_loops(const Graph& g) {
    std::vector<int> deg = degrees(g);
    std::vector<Edge> edges = g.edges;
    bool changed = false;
    for (int v = 0; v < g.n; ++v)
        if (deg[static_cast<std::size_t>(v)] == 0) {
            edges.push_back(Edge{v, v, 1.0});
            changed = true;
        }
    if (!changed) return g;
    return make_graph(g.n, std::move(edges), g.x, g.label);
}

inline Diagram<double> d1_of(const Graph& g, const std::vector<double>& vertex_values,
                             double essential_death) {
    Graph aug = with_isolated_loops(g);
    Filtration<double> f = edge_filtration(aug, vertex_values);
    return compute_persistence(aug, f, essential_death).d1;
}

} // namespace detail

// Compares two graphs through their augmented dimension-1 diagrams. In
// wl_labels mode the vertex function comes from the colors at the first
// round where the color histograms differ (plus the two lifted witnesses);
// a pair whose histograms never differ has no such round, which is a
// protocol error. In constant mode every vertex gets f = 1 and the verdict
// reduces to comparing cycle structure.
inline DistinguishVerdict ph_distinguish(const Graph& g1, const Graph& g2,
                                         DistinguishFiltration mode) {
    WlPairTrace pair = wl_refine_pair(g1, g2);
    DistinguishVerdict verdict;
    verdict.wl_distinguishes = pair.divergence_iter.has_value();
    verdict.divergence_iter = pair.divergence_iter;

    std::vector<double> values1, values2;
    if (mode == DistinguishFiltration::wl_labels) {
        if (!pair.divergence_iter)
            throw protocol_error("ph_distinguish: color histograms never diverge");
        auto built = wl_theorem_filtration(g1, g2, *pair.divergence_iter);
        values1 = std::move(built.first);
        values2 = std::move(built.second);
    } else {
        values1.assign(static_cast<std::size_t>(g1.n), 1.0);
        values2.assign(static_cast<std::size_t>(g2.n), 1.0);
    }

    double f_max = 0.0;
    for (double v : values1) f_max = std::max(f_max, v);
    for (double v : values2) f_max = std::max(f_max, v);
    double ess = f_max + 1.0;

    Diagram<double> d1 = detail::d1_of(g1, values1, ess);
    Diagram<double> d2 = detail::d1_of(g2, values2, ess);
    verdict.ph_distinguishes = !diagrams_equal(d1, d2, 1e-12);
    return verdict;
}

struct SuitePair {
    Graph a;
    Graph b;
    bool expect_wl_divergent = false;
};

// Benchmark pairs: even slots hold random pairs that color refinement tells
// apart (rejection-sampled to guarantee divergence), odd slots hold
// C_{2k} versus two disjoint C_k. Both members of the odd pairs are
// 2-regular with equal node counts, so refinement sees identical histograms
// forever while the cycle structure differs.
inline std::vector<SuitePair> pair_suite(int count, std::uint64_t seed) {
    if (count < 1) throw param_error("pair_suite: count must be positive");
    std::vector<SuitePair> pairs;
    Rng rng(seed);
    for (int i = 0; i < count; ++i) {
        if (i % 2 == 0) {
            for (int attempt = 0; attempt < 200; ++attempt) {
                int n = rng.uniform_int(6, 12);
                double p = rng.uniform(0.3, 0.6);
                Graph a = er_random(n, p, rng);
                Graph b = er_random(n, p, rng);
                if (wl_refine_pair(a, b).divergence_iter) {
                    pairs.push_back(SuitePair{std::move(a), std::move(b), true});
                    break;
                }
            }
            if (pairs.size() != static_cast<std::size_t>(i) + 1)
                throw protocol_error("pair_suite: failed to sample a divergent pair");
        } else {
            int k = rng.uniform_int(3, 8);
            Graph a = ring(2 * k);
            std::vector<Edge> edges;
            append_cycle(edges, 0, k);
            append_cycle(edges, k, k);
            Graph b = make_graph(2 * k, std::move(edges));
            pairs.push_back(SuitePair{std::move(a), std::move(b), false});
        }
    }
    return pairs;
}

} // namespace tip
