#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tip/errors.hpp"
#include "tip/matrix.hpp"

namespace tip {

// Undirected weighted edge, stored once with u <= v.
struct Edge {
    int u = 0;
    int v = 0;
    double w = 1.0;
};

inline bool operator==(const Edge& a, const Edge& b) {
    return a.u == b.u && a.v == b.v && a.w == b.w;
}

// Undirected weighted graph with optional node features and class label.
// Invariants (enforced by make_graph): edges sorted by (u, v), u <= v, no
// duplicates, endpoints in range, finite weights, x has one row per node.
struct Graph {
    int n = 0;
    std::vector<Edge> edges;
    Mat<double> x;
    std::optional<int> label;
};

inline Graph make_graph(int n, std::vector<Edge> edges, Mat<double> x = {},
                        std::optional<int> label = {}) {
    if (n < 0) throw param_error("make_graph: negative node count");
    for (Edge& e : edges) {
        if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n)
            throw param_error("make_graph: edge endpoint out of range");
        if (!std::isfinite(e.w)) throw param_error("make_graph: non-finite edge weight");
        if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges.begin(), edges.end(),
              [](const Edge& a, const Edge& b) { return a.u < b.u || (a.u == b.u && a.v < b.v); });
    for (std::size_t i = 1; i < edges.size(); ++i)
        if (edges[i].u == edges[i - 1].u && edges[i].v == edges[i - 1].v)
            throw param_error("make_graph: duplicate edge (" + std::to_string(edges[i].u) + "," +
                              std::to_string(edges[i].v) + ")");
    if (x.size() != 0 && x.rows() != static_cast<std::size_t>(n))
        throw param_error("make_graph: feature row count does not match node count");
    Graph g;
    g.n = n;
    g.edges = std::move(edges);
    g.x = x.size() != 0 ? std::move(x) : Mat<double>(static_cast<std::size_t>(n), 0);
    g.label = label;
    return g;
}

inline bool graphs_equal(const Graph& a, const Graph& b) {
    if (a.n != b.n || a.edges.size() != b.edges.size()) return false;
    for (std::size_t i = 0; i < a.edges.size(); ++i)
        if (!(a.edges[i] == b.edges[i])) return false;
    if (a.x.rows() != b.x.rows() || a.x.cols() != b.x.cols()) return false;
    for (std::size_t i = 0; i < a.x.size(); ++i)
        if (a.x.data()[i] != b.x.data()[i]) return false;
    return a.label == b.label;
}

inline int self_loop_count(const Graph& g) {
    int c = 0;
    for (const Edge& e : g.edges) c += e.u == e.v;
    return c;
}

// Neighbor lists. A self-loop contributes one entry adj[u] = (u, w).
inline std::vector<std::vector<std::pair<int, double>>> adjacency_list(const Graph& g) {
    std::vector<std::vector<std::pair<int, double>>> adj(static_cast<std::size_t>(g.n));
    for (const Edge& e : g.edges) {
        adj[static_cast<std::size_t>(e.u)].emplace_back(e.v, e.w);
        if (e.u != e.v) adj[static_cast<std::size_t>(e.v)].emplace_back(e.u, e.w);
    }
    return adj;
}

// Number of incident edges per vertex; a self-loop counts once.
inline std::vector<int> degrees(const Graph& g) {
    std::vector<int> d(static_cast<std::size_t>(g.n), 0);
    for (const Edge& e : g.edges) {
        ++d[static_cast<std::size_t>(e.u)];
        if (e.u != e.v) ++d[static_cast<std::size_t>(e.v)];
    }
    return d;
}

inline Mat<double> adjacency_matrix(const Graph& g) {
    Mat<double> a(static_cast<std::size_t>(g.n), static_cast<std::size_t>(g.n), 0.0);
    for (const Edge& e : g.edges) {
        a(static_cast<std::size_t>(e.u), static_cast<std::size_t>(e.v)) = e.w;
        a(static_cast<std::size_t>(e.v), static_cast<std::size_t>(e.u)) = e.w;
    }
    return a;
}

// Connected-component ids in [0, k), assigned in order of the smallest
// vertex in each component.
inline std::vector<int> component_labels(const Graph& g) {
    auto adj = adjacency_list(g);
    std::vector<int> comp(static_cast<std::size_t>(g.n), -1);
    int next = 0;
    std::vector<int> stack;
    for (int s = 0; s < g.n; ++s) {
        if (comp[static_cast<std::size_t>(s)] >= 0) continue;
        comp[static_cast<std::size_t>(s)] = next;
        stack.push_back(s);
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (auto [v, w] : adj[static_cast<std::size_t>(u)]) {
                if (comp[static_cast<std::size_t>(v)] < 0) {
                    comp[static_cast<std::size_t>(v)] = next;
                    stack.push_back(v);
                }
            }
        }
        ++next;
    }
    return comp;
}

inline int component_count(const Graph& g) {
    auto comp = component_labels(g);
    int k = 0;
    for (int c : comp) k = std::max(k, c + 1);
    return k;
}

inline Graph permute(const Graph& g, const std::vector<int>& perm) {
    if (perm.size() != static_cast<std::size_t>(g.n)) throw param_error("permute: size mismatch");
    std::vector<bool> seen(static_cast<std::size_t>(g.n), false);
    for (int p : perm) {
        if (p < 0 || p >= g.n || seen[static_cast<std::size_t>(p)])
            throw param_error("permute: not a bijection");
        seen[static_cast<std::size_t>(p)] = true;
    }
    std::vector<Edge> edges;
    edges.reserve(g.edges.size());
    for (const Edge& e : g.edges)
        edges.push_back(Edge{perm[static_cast<std::size_t>(e.u)], perm[static_cast<std::size_t>(e.v)], e.w});
    Mat<double> x(g.x.rows(), g.x.cols());
    for (std::size_t r = 0; r < g.x.rows(); ++r)
        for (std::size_t c = 0; c < g.x.cols(); ++c)
            x(static_cast<std::size_t>(perm[r]), c) = g.x(r, c);
    return make_graph(g.n, std::move(edges), std::move(x), g.label);
}

// Bridge detection via iterative Tarjan lowlink. Self-loops are never
// bridges. Returns one flag per edge, aligned with g.edges.
inline std::vector<bool> bridges(const Graph& g) {
    std::size_t n = static_cast<std::size_t>(g.n);
    // adjacency with edge ids
    std::vector<std::vector<std::pair<int, int>>> adj(n); // (neighbor, edge id)
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        const Edge& e = g.edges[i];
        if (e.u == e.v) continue;
        adj[static_cast<std::size_t>(e.u)].emplace_back(e.v, static_cast<int>(i));
        adj[static_cast<std::size_t>(e.v)].emplace_back(e.u, static_cast<int>(i));
    }
    std::vector<bool> is_bridge(g.edges.size(), false);
    std::vector<int> disc(n, -1), low(n, 0);
    int timer = 0;
    struct Frame {
        int v;
        int parent_edge;
        std::size_t next;
    };
    std::vector<Frame> stack;
    for (int s = 0; s < g.n; ++s) {
        if (disc[static_cast<std::size_t>(s)] >= 0) continue;
        stack.push_back(Frame{s, -1, 0});
        disc[static_cast<std::size_t>(s)] = low[static_cast<std::size_t>(s)] = timer++;
        while (!stack.empty()) {
            Frame& f = stack.back();
            std::size_t uv = static_cast<std::size_t>(f.v);
            if (f.next < adj[uv].size()) {
                auto [to, eid] = adj[uv][f.next++];
                if (eid == f.parent_edge) continue;
                std::size_t tv = static_cast<std::size_t>(to);
                if (disc[tv] >= 0) {
                    low[uv] = std::min(low[uv], disc[tv]);
                } else {
                    disc[tv] = low[tv] = timer++;
                    stack.push_back(Frame{to, eid, 0});
                }
            } else {
                int eid = f.parent_edge;
                std::size_t v = static_cast<std::size_t>(f.v);
                stack.pop_back();
                if (!stack.empty()) {
                    std::size_t pv = static_cast<std::size_t>(stack.back().v);
                    low[pv] = std::min(low[pv], low[v]);
                    if (low[v] > disc[pv]) is_bridge[static_cast<std::size_t>(eid)] = true;
                }
            }
        }
    }
    return is_bridge;
}

// Builds a graph from a symmetric weight matrix; entries with |w| below the
// threshold are dropped, diagonal entries become self-loops.
inline Graph graph_from_matrix(const Mat<double>& a, double threshold = 1e-12,
                               Mat<double> features = {}) {
    if (a.rows() != a.cols()) throw param_error("graph_from_matrix: matrix not square");
    int n = static_cast<int>(a.rows());
    std::vector<Edge> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u; v < n; ++v) {
            double w = a(static_cast<std::size_t>(u), static_cast<std::size_t>(v));
            if (std::abs(w) > threshold) edges.push_back(Edge{u, v, w});
        }
    return make_graph(n, std::move(edges), std::move(features));
}

// Graphs paired with integer class labels (stored on each graph).
struct LabeledGraphSet {
    std::vector<Graph> graphs;
};

inline int label_of(const Graph& g) {
    if (!g.label) throw param_error("label_of: graph has no label");
    return *g.label;
}

} // namespace tip
