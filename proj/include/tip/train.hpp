#pragma once

#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "tip/autodiff.hpp"
#include "tip/filtration.hpp"
#include "tip/pooling.hpp"
#include "tip/spectral.hpp"
#include "tip/wasserstein.hpp"

namespace tip {

template <class S>
Mat<double> value_matrix(const Mat<S>& a) {
    return Mat<double>::from_fn(a.rows(), a.cols(),
                                [&](std::size_t i, std::size_t j) { return value_of(a(i, j)); });
}

// Flat parameter order matches for_each_param; params_from_flat must stay
// in sync with both.
inline std::vector<double> flatten_params(const ModelParams& p) {
    std::vector<double> flat;
    for_each_param(const_cast<ModelParams&>(p),
                   [&](double& v, ParamKind) { flat.push_back(v); });
    return flat;
}

template <class S>
ModelParamsT<S> params_from_flat(const ModelParams& shape, std::span<const S> flat) {
    if (flat.size() != param_count(shape)) throw param_error("params_from_flat: size mismatch");
    std::size_t i = 0;
    return map_params<S>(shape, [&](double) { return flat[i++]; });
}

template <class S>
S topo_objective(const TipForwardResultT<S>& fwd) {
    std::vector<DiagramStatsT<S>> layer_stats;
    layer_stats.reserve(fwd.layers.size());
    for (const auto& l : fwd.layers) layer_stats.push_back(l.stats);
    return topo_loss(layer_stats, fwd.original_stats);
}

// Main loss plus lambda-weighted cluster regularizers. The main term is the
// descriptor loss by default, the pooling method's own reconstruction loss
// when the descriptor loss is switched off, or a matched-transport distance
// between the layer diagrams and the original one.
template <class S>
S training_objective(const TipForwardResultT<S>& fwd, const PoolingConfig& cfg,
                     double lambda_aux = 1.0) {
    if (fwd.layers.empty()) throw param_error("training_objective: no layers");
    S main = constant_like(fwd.layers[0].loss_cluster, 0.0);
    if (cfg.wasserstein_objective) {
        for (const auto& l : fwd.layers)
            main = main + wasserstein_loss(l.diagrams.d1, fwd.original_diagrams.d1);
        main = main * (1.0 / static_cast<double>(fwd.layers.size()));
    } else if (cfg.no_topo_loss) {
        for (const auto& l : fwd.layers) main = main + l.loss_recon;
    } else {
        main = topo_objective(fwd);
    }
    S aux = constant_like(main, 0.0);
    for (const auto& l : fwd.layers) aux = aux + l.loss_cluster;
    return main + aux * lambda_aux;
}

// Forman-curvature descriptor distance between two graphs: both get the
// curvature filtration, and the exact 1-Wasserstein distance is taken
// between their dimension-1 diagrams (essential deaths at each graph's own
// f_max + 1).
inline double evaluate_topology_preservation(const Graph& original, const Graph& coarse,
                                             GroundMetric metric = GroundMetric::linf) {
    auto d1_of = [](const Graph& g) {
        if (g.edges.empty()) return Diagram<double>{1, {}, 0.0, 1.0};
        Filtration<double> f = forman_filtration(g);
        return compute_persistence(g, f).d1;
    };
    return wasserstein1(d1_of(original), d1_of(coarse), metric);
}

inline Graph coarse_graph_from(const Mat<double>& a) { return graph_from_matrix(a, 1e-12); }

// deterministic seed streams
namespace seeds {
inline constexpr std::uint64_t init = 0x1000000000ull;
inline constexpr std::uint64_t eval = 0x2000000000ull;
} // namespace seeds

struct TrainOptions {
    double lambda_aux = 1.0;
    int eval_interval = 10;
    bool use_adam = false;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
};

struct TrainHistory {
    std::vector<double> loss;                        // per step
    std::vector<std::pair<int, double>> wasserstein; // (step, descriptor distance)
};

struct TrainResult {
    ModelParams params;
    TrainHistory history;
    Graph featured; // input graph with the features training actually used
};

// One deterministic forward pass at the given step's noise stream, reduced
// to the coarsest graph it produces.
inline Graph coarse_of_forward(const Graph& g, const ModelParams& params,
                               const PoolingConfig& cfg, std::uint64_t noise_seed) {
    Rng rng(noise_seed);
    auto fwd = tip_forward(g, params, cfg, rng);
    return coarse_graph_from(value_matrix(fwd.layers.back().a_out));
}

// Minimizes the training objective with plain gradient descent (optionally
// Adam) on a single graph. Graphs without features get the leading
// Laplacian eigenvectors attached first. The history records the loss at
// every step and the descriptor distance before training, every
// eval_interval steps, and at the end.
inline TrainResult train_topo_similarity(const Graph& g, const PoolingConfig& cfg, int steps,
                                         double lr, std::uint64_t seed,
                                         const TrainOptions& opts = {}) {
    cfg.validate();
    if (steps < 0) throw param_error("train_topo_similarity: negative step count");
    if (!(lr > 0.0)) throw param_error("train_topo_similarity: learning rate must be positive");
    if (opts.eval_interval < 1) throw param_error("train_topo_similarity: eval interval must be positive");

    TrainResult result;
    result.featured = ensure_features(g);
    const Graph& gf = result.featured;
    Rng init_rng(mix_seed(seed, seeds::init));
    result.params = init_params(static_cast<int>(gf.x.cols()), gf.n, cfg, init_rng);

    auto evaluate_now = [&](int step) {
        Graph coarse = coarse_of_forward(gf, result.params, cfg, mix_seed(seed, seeds::eval + static_cast<std::uint64_t>(step)));
        result.history.wasserstein.emplace_back(step, evaluate_topology_preservation(gf, coarse));
    };
    evaluate_now(0);

    std::size_t n_params = param_count(result.params);
    std::vector<double> adam_m(n_params, 0.0), adam_v(n_params, 0.0);
    ad::Tape tape;
    for (int step = 0; step < steps; ++step) {
        tape.clear();
        ModelParamsT<ad::Var> lifted = lift_params(tape, result.params);
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(step)));
        auto fwd = tip_forward(gf, lifted, cfg, rng);
        ad::Var obj = training_objective(fwd, cfg, opts.lambda_aux);
        if (!std::isfinite(obj.value()))
            throw train_error("non-finite loss at step " + std::to_string(step));
        auto grads = tape.backward(obj);

        std::vector<double> grad_flat;
        grad_flat.reserve(n_params);
        for_each_param(lifted, [&](ad::Var& v, ParamKind) { grad_flat.push_back(grads.at(v)); });

        std::size_t i = 0;
        double t = static_cast<double>(step + 1);
        for_each_param(result.params, [&](double& p, ParamKind kind) {
            double gr = grad_flat[i];
            if (cfg.fixed_filtration && kind == ParamKind::filtration) {
                ++i;
                return;
            }
            if (opts.use_adam) {
                adam_m[i] = opts.adam_beta1 * adam_m[i] + (1.0 - opts.adam_beta1) * gr;
                adam_v[i] = opts.adam_beta2 * adam_v[i] + (1.0 - opts.adam_beta2) * gr * gr;
                double mh = adam_m[i] / (1.0 - std::pow(opts.adam_beta1, t));
                double vh = adam_v[i] / (1.0 - std::pow(opts.adam_beta2, t));
                p -= lr * mh / (std::sqrt(vh) + opts.adam_eps);
            } else {
                p -= lr * gr;
            }
            ++i;
        });

        result.history.loss.push_back(obj.value());
        if ((step + 1) % opts.eval_interval == 0 || step + 1 == steps) evaluate_now(step + 1);
    }
    return result;
}

// Descriptor distance of the untrained base pooling pipeline, seeded the
// same way training would be.
inline double base_pipeline_distance(const Graph& g, const PoolingConfig& cfg, std::uint64_t seed,
                                     GroundMetric metric = GroundMetric::linf) {
    Graph gf = ensure_features(g);
    Rng init_rng(mix_seed(seed, seeds::init));
    ModelParams params = init_params(static_cast<int>(gf.x.cols()), gf.n, cfg, init_rng);
    auto layers = base_forward(gf, params, cfg);
    Graph coarse = coarse_graph_from(value_matrix(layers.back().a_norm));
    return evaluate_topology_preservation(gf, coarse, metric);
}

// Callable for finite-difference validation: rebuilds the model from a flat
// parameter vector and evaluates the descriptor loss through the whole
// pipeline with a frozen noise stream. Works on doubles and tape variables
// alike.
struct TopoLossProbe {
    const Graph* graph = nullptr; // must carry features
    PoolingConfig cfg;
    ModelParams shape;
    std::uint64_t noise_seed = 0;

    template <class S>
    S operator()(std::span<const S> flat) const {
        ModelParamsT<S> params = params_from_flat(shape, flat);
        Rng rng(noise_seed);
        auto fwd = tip_forward(*graph, params, cfg, rng);
        return topo_objective(fwd);
    }
};

} // namespace tip
