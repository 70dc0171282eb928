#pragma once

#include <cmath>
#include <vector>

#include "tip/graph.hpp"
#include "tip/nn.hpp"
#include "tip/scalar.hpp"

namespace tip {

// Sublevel-set function on a graph: one value per vertex and one per edge,
// edge_values parallel to g.edges.
template <class S>
struct Filtration {
    std::vector<S> vertex_values;
    std::vector<S> edge_values;
};

// Extends vertex values to edges by f(u, v) = max(f(u), f(v)); a self-loop
// inherits its vertex value. This keeps the function monotone: no edge
// appears before both endpoints.
template <class S>
Filtration<S> edge_filtration(const Graph& g, std::vector<S> vertex_values) {
    if (vertex_values.size() != static_cast<std::size_t>(g.n))
        throw param_error("edge_filtration: one value per vertex required");
    Filtration<S> f;
    f.edge_values.reserve(g.edges.size());
    for (const Edge& e : g.edges) {
        if (e.u == e.v)
            f.edge_values.push_back(vertex_values[static_cast<std::size_t>(e.u)]);
        else
            f.edge_values.push_back(smax(vertex_values[static_cast<std::size_t>(e.u)],
                                         vertex_values[static_cast<std::size_t>(e.v)]));
    }
    f.vertex_values = std::move(vertex_values);
    return f;
}

inline Filtration<double> constant_filtration(const Graph& g, double c = 1.0) {
    return edge_filtration(g, std::vector<double>(static_cast<std::size_t>(g.n), c));
}

inline Filtration<double> degree_filtration(const Graph& g) {
    std::vector<int> deg = degrees(g);
    std::vector<double> values(deg.begin(), deg.end());
    return edge_filtration(g, std::move(values));
}

// Learnable vertex function: a small MLP with softplus hidden activations
// and a final sigmoid squashing values into (0, 1).
template <class S>
using MlpFiltrationT = std::vector<LinearLayerT<S>>;

using MlpFiltration = MlpFiltrationT<double>;

inline MlpFiltration init_mlp_filtration(int in_dim, int hidden, Rng& rng) {
    MlpFiltration phi;
    phi.push_back(init_linear(in_dim, hidden, Activation::softplus_act, rng));
    phi.push_back(init_linear(hidden, 1, Activation::linear, rng));
    return phi;
}

template <class S>
std::vector<S> mlp_vertex_values(const Mat<S>& x, const MlpFiltrationT<S>& phi) {
    if (phi.empty()) throw param_error("mlp_vertex_values: empty network");
    Mat<S> h = x;
    for (const auto& layer : phi) h = linear_forward(h, layer);
    if (h.cols() != 1) throw param_error("mlp_vertex_values: final layer must have one output");
    std::vector<S> values;
    values.reserve(h.rows());
    for (std::size_t r = 0; r < h.rows(); ++r) values.push_back(sigmoid(h(r, 0)));
    return values;
}

template <class S>
Filtration<S> mlp_filtration(const Graph& g, const Mat<S>& x, const MlpFiltrationT<S>& phi) {
    if (x.rows() != static_cast<std::size_t>(g.n))
        throw param_error("mlp_filtration: feature rows must match node count");
    return edge_filtration(g, mlp_vertex_values(x, phi));
}

// Forman curvature of each edge over positive weights:
//   F(e) = w_e (2 / w_e
//               - sum_{e' ~ u, e' != e} 1 / sqrt(w_e w_{e'})
//               - sum_{e' ~ v, e' != e} 1 / sqrt(w_e w_{e'}))
// On unit weights this reduces to 4 - deg(u) - deg(v).
inline std::vector<double> forman_curvature(const Graph& g) {
    for (const Edge& e : g.edges)
        if (!(e.w > 0.0)) throw param_error("forman_curvature: weights must be positive");
    std::vector<std::vector<int>> incident(static_cast<std::size_t>(g.n));
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        incident[static_cast<std::size_t>(g.edges[i].u)].push_back(static_cast<int>(i));
        if (g.edges[i].u != g.edges[i].v)
            incident[static_cast<std::size_t>(g.edges[i].v)].push_back(static_cast<int>(i));
    }
    std::vector<double> curv;
    curv.reserve(g.edges.size());
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        const Edge& e = g.edges[i];
        double sum = 2.0 / e.w;
        for (int end : {e.u, e.v}) {
            for (int j : incident[static_cast<std::size_t>(end)]) {
                if (j == static_cast<int>(i)) continue;
                sum -= 1.0 / std::sqrt(e.w * g.edges[static_cast<std::size_t>(j)].w);
            }
            if (e.u == e.v) break;
        }
        curv.push_back(e.w * sum);
    }
    return curv;
}

// Curvature-driven filtration: edges carry their Forman curvature, vertices
// the minimum over incident edges (0 when isolated), so every edge still
// appears no earlier than its endpoints.
inline Filtration<double> forman_filtration(const Graph& g) {
    std::vector<double> curv = forman_curvature(g);
    Filtration<double> f;
    f.vertex_values.assign(static_cast<std::size_t>(g.n), 0.0);
    std::vector<bool> touched(static_cast<std::size_t>(g.n), false);
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        for (int end : {g.edges[i].u, g.edges[i].v}) {
            std::size_t u = static_cast<std::size_t>(end);
            if (!touched[u] || curv[i] < f.vertex_values[u]) f.vertex_values[u] = curv[i];
            touched[u] = true;
        }
    }
    f.edge_values = std::move(curv);
    return f;
}

} // namespace tip
