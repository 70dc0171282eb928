#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "tip/filtration.hpp"
#include "tip/graph.hpp"
#include "tip/scalar.hpp"

namespace tip {

// One birth-death pair. edge is the index into g.edges that created the
// pair (-1 for essential dimension-0 classes, which no edge kills).
template <class S>
struct DiagramTuple {
    S birth;
    S death;
    int edge = -1;
};

template <class S>
struct Diagram {
    int dim = 0;
    std::vector<DiagramTuple<S>> tuples;
    double f_max = 0.0;           // largest filtration value seen
    double essential_death = 0.0; // death assigned to never-dying classes
};

template <class S>
struct DiagramPair {
    Diagram<S> d0;
    Diagram<S> d1;
};

namespace detail {

struct UnionFind {
    // one record per node keeps a find/unite touch inside one cache line
    struct Node {
        int parent;
        int size;
        int birth_vertex;
    };
    std::vector<Node> nodes;

    explicit UnionFind(int n) : nodes(static_cast<std::size_t>(n)) {
        for (int v = 0; v < n; ++v) nodes[static_cast<std::size_t>(v)] = Node{v, 1, v};
    }

    int find(int v) {
        int root = v;
        while (nodes[static_cast<std::size_t>(root)].parent != root) root = nodes[static_cast<std::size_t>(root)].parent;
        while (nodes[static_cast<std::size_t>(v)].parent != root) {
            int next = nodes[static_cast<std::size_t>(v)].parent;
            nodes[static_cast<std::size_t>(v)].parent = root;
            v = next;
        }
        return root;
    }

    int birth_of(int root) const { return nodes[static_cast<std::size_t>(root)].birth_vertex; }

    // Merges the two roots, keeping survivor's birth vertex. Returns the new
    // root.
    int unite(int ra, int rb, int surviving_birth) {
        if (nodes[static_cast<std::size_t>(ra)].size < nodes[static_cast<std::size_t>(rb)].size) std::swap(ra, rb);
        nodes[static_cast<std::size_t>(rb)].parent = ra;
        nodes[static_cast<std::size_t>(ra)].size += nodes[static_cast<std::size_t>(rb)].size;
        nodes[static_cast<std::size_t>(ra)].birth_vertex = surviving_birth;
        return ra;
    }
};

} // namespace detail

// Persistence of the sublevel filtration in dimensions 0 and 1 via a single
// union-find sweep over edges in ascending filtration order.
//
// The dimension-1 diagram is the augmented variant with exactly one tuple
// per edge: a cycle-creating edge e yields (f(e), essential_death), every
// other edge yields the diagonal tuple (f(e), f(e)). Dimension 0 pairs each
// merged component's birth with the merging edge value (elder rule: the
// younger component dies; on equal births the one with the larger birth
// vertex dies) plus one essential tuple per surviving component.
//
// essential_death defaults to f_max + 1.0; pass an explicit value to cap it
// (the loss path uses 1.0 so diagrams of different graphs share a scale).
template <class S>
DiagramPair<S> compute_persistence(const Graph& g, const Filtration<S>& f,
                                   std::optional<double> essential_death = {}) {
    if (f.vertex_values.size() != static_cast<std::size_t>(g.n) ||
        f.edge_values.size() != g.edges.size())
        throw param_error("compute_persistence: filtration does not match graph");

    double f_max = 0.0;
    bool any = false;
    for (const S& v : f.vertex_values) {
        double x = value_of(v);
        f_max = any ? std::max(f_max, x) : x;
        any = true;
    }
    for (const S& v : f.edge_values) {
        double x = value_of(v);
        f_max = any ? std::max(f_max, x) : x;
        any = true;
    }
    double ess = essential_death ? *essential_death : f_max + 1.0;

    DiagramPair<S> out;
    out.d0.dim = 0;
    out.d1.dim = 1;
    out.d0.f_max = out.d1.f_max = f_max;
    out.d0.essential_death = out.d1.essential_death = ess;
    if (g.n == 0) return out;

    std::vector<std::size_t> order(g.edges.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return value_of(f.edge_values[a]) < value_of(f.edge_values[b]);
    });

    detail::UnionFind uf(g.n);
    out.d0.tuples.reserve(static_cast<std::size_t>(g.n));
    out.d1.tuples.reserve(g.edges.size());
    for (std::size_t idx : order) {
        record_decision(idx);
        const Edge& e = g.edges[idx];
        const S& fe = f.edge_values[idx];
        if (e.u == e.v) {
            record_decision(2);
            out.d1.tuples.push_back(DiagramTuple<S>{fe, fe, static_cast<int>(idx)});
            continue;
        }
        int ru = uf.find(e.u);
        int rv = uf.find(e.v);
        if (ru == rv) {
            record_decision(1);
            out.d1.tuples.push_back(
                DiagramTuple<S>{fe, constant_like(fe, ess), static_cast<int>(idx)});
            continue;
        }
        record_decision(0);
        int bu = uf.birth_of(ru);
        int bv = uf.birth_of(rv);
        double fu = value_of(f.vertex_values[static_cast<std::size_t>(bu)]);
        double fv = value_of(f.vertex_values[static_cast<std::size_t>(bv)]);
        // elder rule; ties keep the smaller vertex index alive
        int dying = fu > fv ? bu : (fv > fu ? bv : std::max(bu, bv));
        int surviving = dying == bu ? bv : bu;
        record_decision(static_cast<std::uint64_t>(dying));
        out.d0.tuples.push_back(
            DiagramTuple<S>{f.vertex_values[static_cast<std::size_t>(dying)], fe, static_cast<int>(idx)});
        out.d1.tuples.push_back(DiagramTuple<S>{fe, fe, static_cast<int>(idx)});
        uf.unite(ru, rv, surviving);
    }

    // essential components, in order of first vertex
    std::vector<bool> seen(static_cast<std::size_t>(g.n), false);
    for (int v = 0; v < g.n; ++v) {
        int r = uf.find(v);
        if (seen[static_cast<std::size_t>(r)]) continue;
        seen[static_cast<std::size_t>(r)] = true;
        int b = uf.birth_of(r);
        const S& fb = f.vertex_values[static_cast<std::size_t>(b)];
        out.d0.tuples.push_back(DiagramTuple<S>{fb, constant_like(fb, ess), -1});
    }
    return out;
}

// Betti numbers by graph traversal, independent of the union-find sweep:
// beta0 from component count, beta1 = m - n + beta0 over non-loop edges.
struct BettiNumbers {
    int beta0 = 0;
    int beta1 = 0;
};

inline BettiNumbers betti(const Graph& g) {
    BettiNumbers b;
    b.beta0 = component_count(g);
    int m = static_cast<int>(g.edges.size()) - self_loop_count(g);
    b.beta1 = m - g.n + b.beta0;
    return b;
}

// Fraction of tuples strictly off the diagonal.
template <class S>
double persistence_ratio(const Diagram<S>& d, double tol = 1e-12) {
    if (d.tuples.empty()) return 0.0;
    std::size_t off = 0;
    for (const auto& t : d.tuples)
        if (value_of(t.death) - value_of(t.birth) > tol) ++off;
    return static_cast<double>(off) / static_cast<double>(d.tuples.size());
}

// Multiset equality of (birth, death) pairs up to tol, ignoring edge ids.
template <class S>
bool diagrams_equal(const Diagram<S>& a, const Diagram<S>& b, double tol = 1e-12) {
    if (a.tuples.size() != b.tuples.size()) return false;
    auto points = [](const Diagram<S>& d) {
        std::vector<std::pair<double, double>> p;
        p.reserve(d.tuples.size());
        for (const auto& t : d.tuples) p.emplace_back(value_of(t.birth), value_of(t.death));
        std::sort(p.begin(), p.end());
        return p;
    };
    auto pa = points(a);
    auto pb = points(b);
    for (std::size_t i = 0; i < pa.size(); ++i)
        if (std::abs(pa[i].first - pb[i].first) > tol || std::abs(pa[i].second - pb[i].second) > tol)
            return false;
    return true;
}

} // namespace tip
