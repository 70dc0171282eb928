#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "tip/errors.hpp"
#include "tip/graph.hpp"

namespace tip {

// Color-refinement record. labels[k][v] is vertex v's color id after k
// rounds (round 0 colors by degree); histograms[k] counts vertices per
// color. Color ids come from a dictionary shared across all graphs refined
// together, so histograms of different graphs are directly comparable.
struct WlTrace {
    std::vector<std::vector<int>> labels;
    std::vector<std::map<int, int>> histograms;
    int stabilization_iter = 0; // first round whose partition stopped splitting
};

struct WlPairTrace {
    WlTrace a;
    WlTrace b;
    std::optional<int> divergence_iter; // first round with differing histograms
};

namespace detail {

inline std::map<int, int> label_histogram(const std::vector<int>& labels) {
    std::map<int, int> h;
    for (int l : labels) ++h[l];
    return h;
}

// Jointly refines a family of graphs with one shared color dictionary.
// Refinement only ever splits color classes, so the joint partition is
// stable as soon as the number of distinct colors stops growing; that takes
// at most sum(n) rounds.
inline std::vector<WlTrace> wl_refine_joint(const std::vector<const Graph*>& graphs) {
    std::size_t count = graphs.size();
    std::vector<std::vector<std::vector<int>>> adj(count);
    for (std::size_t gi = 0; gi < count; ++gi) {
        auto full = adjacency_list(*graphs[gi]);
        adj[gi].resize(full.size());
        for (std::size_t v = 0; v < full.size(); ++v)
            for (auto [to, w] : full[v]) adj[gi][v].push_back(to);
    }

    std::vector<WlTrace> traces(count);
    std::map<std::vector<int>, int> dict;
    auto intern = [&](const std::vector<int>& sig) {
        auto [it, fresh] = dict.emplace(sig, static_cast<int>(dict.size()));
        (void)fresh;
        return it->second;
    };

    int total_nodes = 0;
    for (std::size_t gi = 0; gi < count; ++gi) total_nodes += graphs[gi]->n;

    auto joint_distinct = [&]() {
        std::vector<int> all;
        for (std::size_t gi = 0; gi < count; ++gi) {
            const auto& lab = traces[gi].labels.back();
            all.insert(all.end(), lab.begin(), lab.end());
        }
        std::sort(all.begin(), all.end());
        all.erase(std::unique(all.begin(), all.end()), all.end());
        return static_cast<int>(all.size());
    };

    // round 0: degree colors
    for (std::size_t gi = 0; gi < count; ++gi) {
        std::vector<int> lab(adj[gi].size());
        for (std::size_t v = 0; v < adj[gi].size(); ++v)
            lab[v] = intern({static_cast<int>(adj[gi][v].size())});
        traces[gi].labels.push_back(std::move(lab));
        traces[gi].histograms.push_back(label_histogram(traces[gi].labels.back()));
    }
    int distinct_prev = joint_distinct();

    for (int round = 1; round <= total_nodes + 1; ++round) {
        std::vector<std::vector<int>> fresh(count);
        for (std::size_t gi = 0; gi < count; ++gi) {
            const std::vector<int>& prev = traces[gi].labels.back();
            std::vector<int> lab(adj[gi].size());
            for (std::size_t v = 0; v < adj[gi].size(); ++v) {
                std::vector<int> sig;
                sig.reserve(adj[gi][v].size() + 1);
                sig.push_back(prev[v]);
                std::vector<int> nb;
                nb.reserve(adj[gi][v].size());
                for (int to : adj[gi][v]) nb.push_back(prev[static_cast<std::size_t>(to)]);
                std::sort(nb.begin(), nb.end());
                sig.insert(sig.end(), nb.begin(), nb.end());
                lab[v] = intern(sig);
            }
            fresh[gi] = std::move(lab);
        }
        for (std::size_t gi = 0; gi < count; ++gi) {
            traces[gi].labels.push_back(std::move(fresh[gi]));
            traces[gi].histograms.push_back(label_histogram(traces[gi].labels.back()));
        }
        int distinct_now = joint_distinct();
        for (std::size_t gi = 0; gi < count; ++gi) traces[gi].stabilization_iter = round;
        // refinement only splits classes, so an unchanged joint color count
        // means the partition (and every later histogram) is frozen
        if (distinct_now == distinct_prev) break;
        distinct_prev = distinct_now;
    }
    return traces;
}

} // namespace detail

inline WlTrace wl_refine(const Graph& g) {
    return detail::wl_refine_joint({&g})[0];
}

inline WlPairTrace wl_refine_pair(const Graph& g1, const Graph& g2) {
    auto traces = detail::wl_refine_joint({&g1, &g2});
    WlPairTrace pair;
    pair.a = std::move(traces[0]);
    pair.b = std::move(traces[1]);
    std::size_t rounds = std::min(pair.a.histograms.size(), pair.b.histograms.size());
    for (std::size_t k = 0; k < rounds; ++k) {
        if (pair.a.histograms[k] != pair.b.histograms[k]) {
            pair.divergence_iter = static_cast<int>(k);
            break;
        }
    }
    return pair;
}

// Vertex filtrations built from the colors at the first round where the two
// label histograms differ. Every vertex gets 1 + the rank of its color
// (ranks over the colors present in either graph at that round); then one
// witness vertex per graph, carrying a color whose multiplicities differ,
// is pushed above everything else with values n + n' + 1 and n + n' + 2.
// Those two values fix where the essential cycle class is born, making the
// dimension-1 diagrams of the pair provably unequal.
inline std::pair<std::vector<double>, std::vector<double>> wl_theorem_filtration(
    const Graph& g1, const Graph& g2, int divergence_iter) {
    if (divergence_iter < 0) throw param_error("wl_theorem_filtration: negative round");
    WlPairTrace pair = wl_refine_pair(g1, g2);
    std::size_t h = static_cast<std::size_t>(divergence_iter);
    if (h >= pair.a.histograms.size() || h >= pair.b.histograms.size())
        throw protocol_error("wl_theorem_filtration: refinement stabilized before the given round");
    const auto& ha = pair.a.histograms[h];
    const auto& hb = pair.b.histograms[h];
    if (ha == hb)
        throw protocol_error("wl_theorem_filtration: label histograms agree at the given round");

    std::vector<int> colors;
    for (const auto& [c, cnt] : ha) colors.push_back(c);
    for (const auto& [c, cnt] : hb) colors.push_back(c);
    std::sort(colors.begin(), colors.end());
    colors.erase(std::unique(colors.begin(), colors.end()), colors.end());
    std::map<int, int> rank;
    for (std::size_t i = 0; i < colors.size(); ++i) rank[colors[i]] = static_cast<int>(i);

    auto count_of = [](const std::map<int, int>& hist, int c) {
        auto it = hist.find(c);
        return it == hist.end() ? 0 : it->second;
    };
    // witness color: smallest-rank color with differing multiplicity that is
    // present in the graph; if the graph holds no such color (possible when
    // n != n'), fall back to its smallest-rank color.
    auto witness_color = [&](const std::map<int, int>& own, const std::map<int, int>& other) {
        if (own.empty()) throw protocol_error("wl_theorem_filtration: empty graph");
        for (int c : colors)
            if (count_of(own, c) > 0 && count_of(own, c) != count_of(other, c)) return c;
        return own.begin()->first;
    };

    auto build = [&](const Graph& g, const WlTrace& trace, int wcolor, double wvalue) {
        std::vector<double> values(static_cast<std::size_t>(g.n));
        const std::vector<int>& lab = trace.labels[h];
        int witness = -1;
        for (int v = 0; v < g.n; ++v) {
            values[static_cast<std::size_t>(v)] = 1.0 + rank[lab[static_cast<std::size_t>(v)]];
            if (witness < 0 && lab[static_cast<std::size_t>(v)] == wcolor) witness = v;
        }
        if (witness < 0) throw protocol_error("wl_theorem_filtration: witness color not found");
        values[static_cast<std::size_t>(witness)] = wvalue;
        return values;
    };

    double base = static_cast<double>(g1.n + g2.n);
    auto values1 = build(g1, pair.a, witness_color(ha, hb), base + 1.0);
    auto values2 = build(g2, pair.b, witness_color(hb, ha), base + 2.0);
    return {std::move(values1), std::move(values2)};
}

} // namespace tip
