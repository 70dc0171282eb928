#pragma once

#include <cmath>
#include <string>
#include <unordered_set>
#include <vector>

#include "tip/graph.hpp"
#include "tip/rng.hpp"

namespace tip {

inline Mat<double> standard_normal_features(int n, int d, Rng& rng) {
    return Mat<double>::from_fn(static_cast<std::size_t>(n), static_cast<std::size_t>(d),
                                [&](std::size_t, std::size_t) { return rng.gaussian(); });
}

inline Graph with_features(Graph g, Mat<double> x) {
    return make_graph(g.n, std::move(g.edges), std::move(x), g.label);
}

inline Graph ring(int n) {
    if (n < 3) throw param_error("ring: need at least 3 nodes");
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) edges.push_back(Edge{i, (i + 1) % n, 1.0});
    return make_graph(n, std::move(edges));
}

inline Graph path_graph(int n) {
    if (n < 1) throw param_error("path_graph: need at least 1 node");
    std::vector<Edge> edges;
    for (int i = 0; i + 1 < n; ++i) edges.push_back(Edge{i, i + 1, 1.0});
    return make_graph(n, std::move(edges));
}

inline Graph grid2d(int rows, int cols) {
    if (rows < 2 || cols < 2) throw param_error("grid2d: need at least 2x2");
    std::vector<Edge> edges;
    auto id = [cols](int r, int c) { return r * cols + c; };
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) edges.push_back(Edge{id(r, c), id(r, c + 1), 1.0});
            if (r + 1 < rows) edges.push_back(Edge{id(r, c), id(r + 1, c), 1.0});
        }
    return make_graph(rows * cols, std::move(edges));
}

inline Graph torus(int rows, int cols) {
    if (rows < 3 || cols < 3) throw param_error("torus: need at least 3x3");
    std::vector<Edge> edges;
    auto id = [cols](int r, int c) { return r * cols + c; };
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            edges.push_back(Edge{id(r, c), id(r, (c + 1) % cols), 1.0});
            edges.push_back(Edge{id(r, c), id((r + 1) % rows, c), 1.0});
        }
    return make_graph(rows * cols, std::move(edges));
}

// Erdos-Renyi G(n, p) with 3-dimensional standard normal features.
inline Graph er_random(int n, double p, Rng& rng, int feature_dim = 3) {
    if (n < 1) throw param_error("er_random: need at least 1 node");
    if (!(p >= 0.0 && p <= 1.0)) throw param_error("er_random: p outside [0, 1]");
    std::vector<Edge> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (rng.uniform01() < p) edges.push_back(Edge{u, v, 1.0});
    Mat<double> x = standard_normal_features(n, feature_dim, rng);
    return make_graph(n, std::move(edges), std::move(x));
}

// Single cycle on [offset, offset + len).
inline void append_cycle(std::vector<Edge>& edges, int offset, int len) {
    for (int i = 0; i < len; ++i)
        edges.push_back(Edge{offset + i, offset + (i + 1) % len, 1.0});
}

// Binary classification set: class 0 is one cycle, class 1 is two cycles
// sharing a single vertex. Node counts stay in [10, 20]; features are
// 3-dimensional standard normals.
inline LabeledGraphSet cycles_dataset(int count, std::uint64_t seed) {
    if (count < 1) throw param_error("cycles_dataset: count must be positive");
    LabeledGraphSet set;
    Rng rng(seed);
    for (int i = 0; i < count; ++i) {
        int label = i % 2;
        Graph g;
        if (label == 0) {
            int n = rng.uniform_int(10, 20);
            std::vector<Edge> edges;
            append_cycle(edges, 0, n);
            g = make_graph(n, std::move(edges));
        } else {
            // cycles of length a and b glued at vertex 0
            int a = rng.uniform_int(5, 10);
            int b = rng.uniform_int(5, 10);
            std::vector<Edge> edges;
            append_cycle(edges, 0, a);
            edges.push_back(Edge{0, a, 1.0});
            for (int j = 0; j + 1 < b - 1; ++j) edges.push_back(Edge{a + j, a + j + 1, 1.0});
            edges.push_back(Edge{a + b - 2, 0, 1.0});
            g = make_graph(a + b - 1, std::move(edges));
        }
        g.x = standard_normal_features(g.n, 3, rng);
        g.label = label;
        set.graphs.push_back(std::move(g));
    }
    return set;
}

// Class 0 is two disjoint cycles, class 1 the same two cycles joined by a
// bridge. Both classes have two independent cycles, so cycle counting alone
// cannot separate them.
inline LabeledGraphSet two_cycles_dataset(int count, std::uint64_t seed) {
    if (count < 1) throw param_error("two_cycles_dataset: count must be positive");
    LabeledGraphSet set;
    Rng rng(seed);
    for (int i = 0; i < count; ++i) {
        int label = i % 2;
        int a = rng.uniform_int(5, 10);
        int b = rng.uniform_int(5, 10);
        std::vector<Edge> edges;
        append_cycle(edges, 0, a);
        append_cycle(edges, a, b);
        if (label == 1) edges.push_back(Edge{0, a, 1.0});
        Graph g = make_graph(a + b, std::move(edges));
        g.x = standard_normal_features(g.n, 3, rng);
        g.label = label;
        set.graphs.push_back(std::move(g));
    }
    return set;
}

// Random graph with exactly m distinct non-loop edges, used for timing runs
// at fixed edge density.
inline Graph random_with_edge_count(int n, int m, Rng& rng) {
    long long max_edges = static_cast<long long>(n) * (n - 1) / 2;
    if (m < 0 || m > max_edges) throw param_error("random_with_edge_count: m out of range");
    std::unordered_set<long long> seen;
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(m));
    while (static_cast<int>(edges.size()) < m) {
        int u = rng.uniform_int(0, n - 1);
        int v = rng.uniform_int(0, n - 1);
        if (u == v) continue;
        if (u > v) std::swap(u, v);
        long long key = static_cast<long long>(u) * n + v;
        if (seen.insert(key).second) edges.push_back(Edge{u, v, 1.0});
    }
    return make_graph(n, std::move(edges));
}

} // namespace tip
