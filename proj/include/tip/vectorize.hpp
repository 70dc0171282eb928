#pragma once

#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "tip/persistence.hpp"
#include "tip/scalar.hpp"

namespace tip {

// Fixed vectorization of a persistence tuple (b, d): tent functions sampled
// along the filtration axis, a grid of Gaussian bumps in the (birth, death)
// plane, and affine projections of the point. All pieces are smooth in the
// tuple coordinates, which is what lets gradients reach the filtration.
struct TransformConfig {
    std::vector<double> triangle_samples;
    std::vector<std::pair<double, double>> gaussian_centers;
    double gaussian_sigma = 0.25;
    std::vector<std::array<double, 3>> lines; // rx, ry, bias

    std::size_t dim() const {
        return triangle_samples.size() + gaussian_centers.size() + lines.size();
    }

    // 8 tent samples at interior points of [0, ed], a 3x3 Gaussian grid over
    // the same square with sigma = ed/4, and the two diagonal projections
    // (b+d)/sqrt(2) and (d-b)/sqrt(2). Total dimension 19.
    static TransformConfig defaults(double essential_death = 1.0) {
        if (!(essential_death > 0.0)) throw param_error("TransformConfig: essential_death must be positive");
        TransformConfig cfg;
        double ed = essential_death;
        for (int i = 0; i < 8; ++i)
            cfg.triangle_samples.push_back(ed * static_cast<double>(i + 1) / 9.0);
        for (int i = 1; i <= 3; ++i)
            for (int j = 1; j <= 3; ++j)
                cfg.gaussian_centers.emplace_back(ed * static_cast<double>(i) / 4.0,
                                                  ed * static_cast<double>(j) / 4.0);
        cfg.gaussian_sigma = ed / 4.0;
        double r = 1.0 / std::sqrt(2.0);
        cfg.lines.push_back({r, r, 0.0});
        cfg.lines.push_back({-r, r, 0.0});
        return cfg;
    }
};

// One feature vector per tuple. Tuples on the diagonal produce zero tent
// and near-diagonal Gaussian responses but still count toward the stats;
// that is what makes the augmented diagrams of different graphs comparable.
template <class S>
std::vector<std::vector<S>> vectorize(const Diagram<S>& d, const TransformConfig& cfg) {
    if (cfg.dim() == 0) throw param_error("vectorize: transform has no sample points");
    if (!(cfg.gaussian_sigma > 0.0) && !cfg.gaussian_centers.empty())
        throw param_error("vectorize: gaussian_sigma must be positive");
    using std::exp;
    std::vector<std::vector<S>> out;
    out.reserve(d.tuples.size());
    for (const auto& t : d.tuples) {
        std::vector<S> h;
        h.reserve(cfg.dim());
        for (double s : cfg.triangle_samples) {
            // tent over [b, d] peaking at the midpoint
            h.push_back(smax(smin(s - t.birth, t.death - s), 0.0));
        }
        for (auto [cx, cy] : cfg.gaussian_centers) {
            S db = t.birth - cx;
            S dd = t.death - cy;
            double inv = 1.0 / (2.0 * cfg.gaussian_sigma * cfg.gaussian_sigma);
            h.push_back(exp(-(db * db + dd * dd) * inv));
        }
        for (const auto& line : cfg.lines)
            h.push_back(t.birth * line[0] + t.death * line[1] + line[2]);
        out.push_back(std::move(h));
    }
    return out;
}

// Coordinate-wise first and second moments over the tuple vectors.
template <class S>
struct DiagramStatsT {
    std::vector<S> mean;
    std::vector<S> stddev;
};

using DiagramStats = DiagramStatsT<double>;

template <class S>
DiagramStatsT<S> diagram_stats(const std::vector<std::vector<S>>& vectors) {
    if (vectors.empty()) throw param_error("diagram_stats: empty diagram");
    std::size_t dim = vectors[0].size();
    if (dim == 0) throw param_error("diagram_stats: zero-dimensional vectors");
    for (const auto& v : vectors)
        if (v.size() != dim) throw param_error("diagram_stats: ragged vectors");
    using std::sqrt;
    double inv_m = 1.0 / static_cast<double>(vectors.size());
    DiagramStatsT<S> stats;
    stats.mean.reserve(dim);
    stats.stddev.reserve(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        S sum = vectors[0][i];
        S sq = vectors[0][i] * vectors[0][i];
        for (std::size_t k = 1; k < vectors.size(); ++k) {
            sum = sum + vectors[k][i];
            sq = sq + vectors[k][i] * vectors[k][i];
        }
        S mean = sum * inv_m;
        // clamp shields sqrt from the tiny negative values round-off makes
        S var = smax(sq * inv_m - mean * mean, 0.0);
        stats.mean.push_back(mean);
        stats.stddev.push_back(sqrt(var));
    }
    return stats;
}

template <class S>
DiagramStatsT<S> concat_stats(const DiagramStatsT<S>& a, const DiagramStatsT<S>& b) {
    DiagramStatsT<S> out = a;
    out.mean.insert(out.mean.end(), b.mean.begin(), b.mean.end());
    out.stddev.insert(out.stddev.end(), b.stddev.begin(), b.stddev.end());
    return out;
}

// Mean squared gap between each pooled layer's (mean || stddev) descriptor
// and the descriptor of the original graph, averaged over layers and
// coordinates.
template <class S>
S topo_loss(const std::vector<DiagramStatsT<S>>& layers, const DiagramStatsT<S>& original) {
    if (layers.empty()) throw param_error("topo_loss: no pooled layers");
    std::size_t dim = original.mean.size();
    if (dim == 0 || original.stddev.size() != dim) throw param_error("topo_loss: bad descriptor");
    for (const auto& l : layers)
        if (l.mean.size() != dim || l.stddev.size() != dim)
            throw param_error("topo_loss: descriptor dimensions differ");
    S acc = constant_like(original.mean[0], 0.0);
    for (const auto& l : layers) {
        for (std::size_t i = 0; i < dim; ++i) {
            S dm = l.mean[i] - original.mean[i];
            S ds = l.stddev[i] - original.stddev[i];
            acc = acc + dm * dm + ds * ds;
        }
    }
    double denom = static_cast<double>(layers.size()) * static_cast<double>(2 * dim);
    return acc * (1.0 / denom);
}

} // namespace tip
