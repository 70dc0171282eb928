#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "tip/autodiff.hpp"
#include "tip/filtration.hpp"
#include "tip/graph.hpp"
#include "tip/nn.hpp"
#include "tip/persistence.hpp"
#include "tip/rng.hpp"
#include "tip/vectorize.hpp"

namespace tip {

enum class PoolMethod { diffpool, mincut, dmon };

inline PoolMethod parse_pool_method(const std::string& name) {
    if (name == "diffpool") return PoolMethod::diffpool;
    if (name == "mincut") return PoolMethod::mincut;
    if (name == "dmon") return PoolMethod::dmon;
    throw param_error("unknown pooling method: " + name);
}

inline const char* pool_method_name(PoolMethod m) {
    switch (m) {
        case PoolMethod::diffpool: return "diffpool";
        case PoolMethod::mincut: return "mincut";
        case PoolMethod::dmon: return "dmon";
    }
    return "?";
}

struct PoolingConfig {
    PoolMethod method = PoolMethod::diffpool;
    double ratio = 0.25; // clusters per node, each layer
    int layers = 1;
    double tau = 1.0;    // Gumbel-softmax temperature
    int hidden = 16;     // GNN width
    int phi_hidden = 16; // filtration MLP width
    bool hard_sample = true;
    bool detach_sample = false;           // cut the straight-through gradient
    bool keep_injected_selfloops = false; // bypass the zero-persistence diagonal
    double injection_essential_death = 1.0;

    // ablation switches
    bool no_resample = false;
    bool no_injection = false;
    bool no_topo_loss = false;
    bool use_dim0 = false;
    bool fixed_filtration = false;
    bool wasserstein_objective = false;

    void validate() const {
        if (!(ratio > 0.0 && ratio <= 1.0)) throw param_error("PoolingConfig: ratio must be in (0, 1]");
        if (layers < 1) throw param_error("PoolingConfig: need at least one layer");
        if (!(tau > 0.0)) throw param_error("PoolingConfig: tau must be positive");
        if (hidden < 1 || phi_hidden < 1) throw param_error("PoolingConfig: widths must be positive");
        if (!(injection_essential_death > 0.0))
            throw param_error("PoolingConfig: essential death must be positive");
    }
};

inline int cluster_count(double ratio, int n) {
    return std::max(1, static_cast<int>(std::llround(ratio * n)));
}

template <class S>
using GnnStackT = std::vector<LinearLayerT<S>>;

template <class S>
struct TipLayerParamsT {
    GnnStackT<S> embed;  // empty unless the method uses a separate embedding GNN
    GnnStackT<S> assign; // produces assignment logits (and embeddings for mincut/dmon)
    MlpFiltrationT<S> phi;
};

template <class S>
struct ModelParamsT {
    MlpFiltrationT<S> phi0; // filtration of the input graph
    std::vector<TipLayerParamsT<S>> layers;
};

using ModelParams = ModelParamsT<double>;

enum class ParamKind { gnn, filtration };

template <class S, class Fn>
void for_each_param(ModelParamsT<S>& p, Fn&& fn) {
    auto visit = [&](std::vector<LinearLayerT<S>>& stack, ParamKind kind) {
        for (auto& layer : stack) {
            for (auto& w : layer.w.data()) fn(w, kind);
            for (auto& b : layer.b) fn(b, kind);
        }
    };
    visit(p.phi0, ParamKind::filtration);
    for (auto& l : p.layers) {
        visit(l.embed, ParamKind::gnn);
        visit(l.assign, ParamKind::gnn);
        visit(l.phi, ParamKind::filtration);
    }
}

template <class S>
std::size_t param_count(const ModelParamsT<S>& p) {
    std::size_t n = 0;
    for_each_param(const_cast<ModelParamsT<S>&>(p), [&](const S&, ParamKind) { ++n; });
    return n;
}

// Structure-preserving rebuild of the parameter record with fn applied to
// every scalar (used to lift double parameters onto a tape and to load
// flattened vectors back).
template <class S, class Fn>
ModelParamsT<S> map_params(const ModelParams& p, Fn&& fn) {
    auto conv_stack = [&](const GnnStackT<double>& stack) {
        GnnStackT<S> out;
        out.reserve(stack.size());
        for (const auto& layer : stack) {
            LinearLayerT<S> l;
            l.w = Mat<S>::from_fn(layer.w.rows(), layer.w.cols(),
                                  [&](std::size_t r, std::size_t c) { return fn(layer.w(r, c)); });
            l.b.reserve(layer.b.size());
            for (double b : layer.b) l.b.push_back(fn(b));
            l.act = layer.act;
            out.push_back(std::move(l));
        }
        return out;
    };
    ModelParamsT<S> out;
    out.phi0 = conv_stack(p.phi0);
    for (const auto& l : p.layers) {
        TipLayerParamsT<S> lp;
        lp.embed = conv_stack(l.embed);
        lp.assign = conv_stack(l.assign);
        lp.phi = conv_stack(l.phi);
        out.layers.push_back(std::move(lp));
    }
    return out;
}

inline ModelParamsT<ad::Var> lift_params(ad::Tape& tape, const ModelParams& p) {
    return map_params<ad::Var>(p, [&](double v) { return tape.leaf(v); });
}

inline ModelParams init_params(int in_dim, int n0, const PoolingConfig& cfg, Rng& rng) {
    cfg.validate();
    if (in_dim < 1) throw param_error("init_params: need at least one input feature");
    if (n0 < 1) throw param_error("init_params: empty graph");
    ModelParams p;
    p.phi0 = init_mlp_filtration(in_dim, cfg.phi_hidden, rng);
    int n = n0;
    int feat = in_dim;
    for (int l = 0; l < cfg.layers; ++l) {
        int nl = cluster_count(cfg.ratio, n);
        TipLayerParamsT<double> lp;
        if (cfg.method == PoolMethod::diffpool) {
            lp.embed.push_back(init_linear(feat, cfg.hidden, Activation::tanh_act, rng));
            lp.embed.push_back(init_linear(cfg.hidden, cfg.hidden, Activation::tanh_act, rng));
            lp.assign.push_back(init_linear(feat, cfg.hidden, Activation::tanh_act, rng));
            lp.assign.push_back(init_linear(cfg.hidden, nl, Activation::linear, rng));
            feat = cfg.hidden;
        } else {
            lp.assign.push_back(init_linear(feat, cfg.hidden, Activation::tanh_act, rng));
            lp.assign.push_back(init_linear(cfg.hidden, nl, Activation::linear, rng));
            feat = nl;
        }
        lp.phi = init_mlp_filtration(feat, cfg.phi_hidden, rng);
        p.layers.push_back(std::move(lp));
        n = nl;
    }
    return p;
}

// --- dense pooling primitives ---

// Mean-aggregation propagation matrix: rows of A + I normalized to sum 1.
template <class S>
Mat<S> normalized_adjacency(const Mat<S>& a) {
    if (a.rows() != a.cols()) throw param_error("normalized_adjacency: matrix not square");
    std::vector<S> row_sum;
    row_sum.reserve(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        S row = a(i, 0) + (i == 0 ? 1.0 : 0.0);
        for (std::size_t k = 1; k < a.cols(); ++k) row = row + a(i, k) + (i == k ? 1.0 : 0.0);
        row_sum.push_back(row);
    }
    return Mat<S>::from_fn(a.rows(), a.cols(), [&](std::size_t i, std::size_t j) {
        return (a(i, j) + (i == j ? 1.0 : 0.0)) / row_sum[i];
    });
}

template <class S>
Mat<S> message_pass(const Mat<S>& a, const Mat<S>& x, const GnnStackT<S>& stack) {
    if (stack.empty()) throw param_error("message_pass: empty stack");
    if (a.rows() != x.rows()) throw param_error("message_pass: adjacency and features disagree");
    Mat<S> ahat = normalized_adjacency(a);
    Mat<S> h = x;
    for (const auto& layer : stack) h = linear_forward(matmul(ahat, h), layer);
    return h;
}

template <class S>
Mat<S> softmax_rows(const Mat<S>& logits) {
    if (logits.cols() == 0) throw param_error("softmax_rows: no columns");
    using std::exp;
    std::vector<S> entries;
    entries.reserve(logits.size());
    for (std::size_t i = 0; i < logits.rows(); ++i) {
        double m = value_of(logits(i, 0));
        for (std::size_t j = 1; j < logits.cols(); ++j) m = std::max(m, value_of(logits(i, j)));
        std::vector<S> e;
        e.reserve(logits.cols());
        for (std::size_t j = 0; j < logits.cols(); ++j) e.push_back(exp(logits(i, j) - m));
        S sum = e[0];
        for (std::size_t j = 1; j < e.size(); ++j) sum = sum + e[j];
        for (std::size_t j = 0; j < e.size(); ++j) entries.push_back(e[j] / sum);
    }
    return Mat<S>(logits.rows(), logits.cols(), std::move(entries));
}

template <class S>
Mat<S> assignment(const Mat<S>& a, const Mat<S>& x, const GnnStackT<S>& stack) {
    return softmax_rows(message_pass(a, x, stack));
}

// A_pool = S^T A S, X_pool = S^T X.
template <class S>
std::pair<Mat<S>, Mat<S>> coarsen(const Mat<S>& a, const Mat<S>& x, const Mat<S>& s) {
    if (a.rows() != s.rows() || x.rows() != s.rows()) throw param_error("coarsen: shape mismatch");
    Mat<S> a_pool = matmul_tn(s, matmul(a, s));
    Mat<S> x_pool = matmul_tn(s, x);
    return {std::move(a_pool), std::move(x_pool)};
}

// Self-loops removed, then symmetric degree normalization. This is what
// mincut/dmon pooling applies to the coarsened adjacency before it is
// passed on.
template <class S>
Mat<S> degree_normalize_sym(const Mat<S>& a) {
    if (a.rows() != a.cols()) throw param_error("degree_normalize_sym: matrix not square");
    std::size_t n = a.rows();
    if (n == 0) return a;
    using std::sqrt;
    std::vector<S> inv;
    inv.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        S deg = constant_like(a(0, 0), 0.0);
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) deg = deg + a(i, j);
        if (value_of(deg) > 1e-12) {
            record_decision(1);
            inv.push_back(1.0 / sqrt(deg));
        } else {
            record_decision(0);
            inv.push_back(constant_like(a(0, 0), 0.0));
        }
    }
    return Mat<S>::from_fn(n, n, [&](std::size_t i, std::size_t j) {
        if (i == j) return constant_like(a(0, 0), 0.0);
        return a(i, j) * inv[i] * inv[j];
    });
}

// Reconstruction and cluster losses of the underlying pooling method.
template <class S>
std::pair<S, S> aux_losses(PoolMethod method, const Mat<S>& a, const Mat<S>& s) {
    if (a.rows() != s.rows()) throw param_error("aux_losses: shape mismatch");
    std::size_t n = a.rows();
    std::size_t c = s.cols();
    if (n == 0 || c == 0) throw param_error("aux_losses: empty input");
    using std::exp;
    using std::log;
    using std::sqrt;
    S zero = constant_like(s(0, 0), 0.0);

    if (method == PoolMethod::diffpool) {
        // || A - S S^T ||_F
        S sq = zero;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                S rec = s(i, 0) * s(j, 0);
                for (std::size_t k = 1; k < c; ++k) rec = rec + s(i, k) * s(j, k);
                S diff = a(i, j) - rec;
                sq = sq + diff * diff;
            }
        S l_r = sqrt(sq);
        // mean row entropy of S
        S ent = zero;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < c; ++k) ent = ent - s(i, k) * log(s(i, k) + 1e-300);
        return {l_r, ent * (1.0 / static_cast<double>(n))};
    }

    // shared by mincut and dmon: || S^T S / ||S^T S||_F - I/sqrt(C) ||_F
    Mat<S> sts = matmul_tn(s, s);
    S fro_sq = zero;
    for (std::size_t i = 0; i < c; ++i)
        for (std::size_t j = 0; j < c; ++j) fro_sq = fro_sq + sts(i, j) * sts(i, j);
    S fro = sqrt(fro_sq);
    S ortho_sq = zero;
    double inv_sqrt_c = 1.0 / std::sqrt(static_cast<double>(c));
    for (std::size_t i = 0; i < c; ++i)
        for (std::size_t j = 0; j < c; ++j) {
            S diff = sts(i, j) / fro - (i == j ? inv_sqrt_c : 0.0);
            ortho_sq = ortho_sq + diff * diff;
        }
    S ortho = sqrt(ortho_sq);

    Mat<S> as = matmul(a, s);
    if (method == PoolMethod::mincut) {
        // -Tr(S^T A S) / Tr(S^T D S), D = diag(row sums of A)
        S num = zero;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < c; ++k) num = num + s(i, k) * as(i, k);
        S den = zero;
        for (std::size_t i = 0; i < n; ++i) {
            S deg = a(i, 0);
            for (std::size_t j = 1; j < n; ++j) deg = deg + a(i, j);
            S srow = s(i, 0) * s(i, 0);
            for (std::size_t k = 1; k < c; ++k) srow = srow + s(i, k) * s(i, k);
            den = den + deg * srow;
        }
        S l_r = zero;
        if (std::abs(value_of(den)) > 1e-12) {
            record_decision(1);
            l_r = zero - num / den;
        } else {
            record_decision(0);
        }
        return {l_r, ortho};
    }

    // dmon: -(1/2m) Tr(S^T B S), B = A - d d^T / 2m
    S two_m = zero;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) two_m = two_m + a(i, j);
    S l_r = zero;
    if (value_of(two_m) > 1e-12) {
        record_decision(1);
        S tr_as = zero;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < c; ++k) tr_as = tr_as + s(i, k) * as(i, k);
        std::vector<S> deg;
        deg.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            S d = a(i, 0);
            for (std::size_t j = 1; j < n; ++j) d = d + a(i, j);
            deg.push_back(d);
        }
        // Tr(S^T d d^T S) = sum_k (d^T S_{, k})^2
        S tr_dd = zero;
        for (std::size_t k = 0; k < c; ++k) {
            S proj = deg[0] * s(0, k);
            for (std::size_t i = 1; i < n; ++i) proj = proj + deg[i] * s(i, k);
            tr_dd = tr_dd + proj * proj;
        }
        l_r = zero - (tr_as - tr_dd / two_m) / two_m;
    } else {
        record_decision(0);
    }
    // collapse regularizer: sqrt(C)/n * || sum_i S_i ||_F - 1
    S col_sq = zero;
    for (std::size_t k = 0; k < c; ++k) {
        S colsum = s(0, k);
        for (std::size_t i = 1; i < n; ++i) colsum = colsum + s(i, k);
        col_sq = col_sq + colsum * colsum;
    }
    S collapse = sqrt(col_sq) * (std::sqrt(static_cast<double>(c)) / static_cast<double>(n)) - 1.0;
    return {l_r, ortho + collapse};
}

// Min-max normalizes the matrix to [0, 1] and draws one symmetric binary
// Gumbel-softmax sample per strict-upper-triangle entry; the diagonal is
// set to 1 so every node keeps a self-loop. A flat matrix (max == min)
// yields the all-zero pattern plus the diagonal. Two Gumbel draws are
// consumed per entry regardless of branch so the stream stays aligned
// across evaluations.
template <class S>
Mat<S> resample_adjacency(const Mat<S>& a, double tau, Rng& rng, bool hard = true,
                          bool detach_grad = false) {
    if (a.rows() != a.cols()) throw param_error("resample_adjacency: matrix not square");
    if (!(tau > 0.0)) throw param_error("resample_adjacency: tau must be positive");
    std::size_t n = a.rows();
    if (n == 0) return a;

    std::size_t arg_lo = 0, arg_hi = 0;
    for (std::size_t i = 0; i < n * n; ++i) {
        if (value_of(a.data()[i]) < value_of(a.data()[arg_lo])) arg_lo = i;
        if (value_of(a.data()[i]) > value_of(a.data()[arg_hi])) arg_hi = i;
    }
    record_decision(arg_lo);
    record_decision(arg_hi);
    const S& lo = a.data()[arg_lo];
    const S& hi = a.data()[arg_hi];
    S zero = constant_like(lo, 0.0);
    S one = constant_like(lo, 1.0);

    bool degenerate = !(value_of(hi) - value_of(lo) > 1e-15);
    record_decision(degenerate ? 1 : 0);

    Mat<S> out(n, n, zero);
    for (std::size_t i = 0; i < n; ++i) out(i, i) = one;
    if (degenerate) {
        // stream alignment: consume the draws this call would have used
        for (std::size_t i = 0; i < n * (n - 1) / 2; ++i) {
            rng.gumbel();
            rng.gumbel();
        }
        return out;
    }

    S span = hi - lo;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double g1 = rng.gumbel();
            double g0 = rng.gumbel();
            S p = (a(i, j) - lo) / span;
            double pv = value_of(p);
            S y = zero;
            if (pv <= 0.0) {
                record_decision(2);
                y = zero;
            } else if (pv >= 1.0) {
                record_decision(3);
                y = one;
            } else {
                record_decision(4);
                using std::log;
                S logit = (log(p) - log(1.0 - p) + (g1 - g0)) * (1.0 / tau);
                S soft = sigmoid(logit);
                if (hard) {
                    bool bit = value_of(soft) > 0.5;
                    record_decision(bit ? 1 : 0);
                    y = straight_through(soft, bit ? 1.0 : 0.0, detach_grad);
                } else {
                    y = soft;
                }
            }
            out(i, j) = y;
            out(j, i) = y;
        }
    }
    return out;
}

// Edge weights replaced by the persistence of the tuple each edge created
// (zero for edges that close no cycle), scaled by the incoming weight. The
// diagrams are those of the incoming matrix under the phi filtration and
// are returned alongside so the caller can reuse them for the loss.
template <class S>
struct InjectionResultT {
    Mat<S> a;
    Graph topology; // edges extracted from the incoming matrix
    DiagramPair<S> diagrams;
};

template <class S>
InjectionResultT<S> persistence_injection(const Mat<S>& a, const Mat<S>& x,
                                          const MlpFiltrationT<S>& phi,
                                          double essential_death = 1.0,
                                          bool keep_selfloops = false, bool apply = true) {
    if (a.rows() != a.cols()) throw param_error("persistence_injection: matrix not square");
    if (x.rows() != a.rows()) throw param_error("persistence_injection: feature rows disagree");
    std::size_t n = a.rows();
    if (n == 0) throw param_error("persistence_injection: empty matrix");

    std::vector<Edge> edges;
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u; v < n; ++v)
            if (value_of(a(u, v)) > 1e-12) {
                edges.push_back(Edge{static_cast<int>(u), static_cast<int>(v), value_of(a(u, v))});
                record_decision(u * n + v);
            }
    InjectionResultT<S> out;
    out.topology = make_graph(static_cast<int>(n), std::move(edges));

    std::vector<S> vertex_values = mlp_vertex_values(x, phi);
    Filtration<S> f = edge_filtration(out.topology, std::move(vertex_values));
    out.diagrams = compute_persistence(out.topology, f, essential_death);

    if (!apply) {
        out.a = a;
        return out;
    }
    S zero = constant_like(a(0, 0), 0.0);
    out.a = Mat<S>(n, n, zero);
    for (const auto& t : out.diagrams.d1.tuples) {
        const Edge& e = out.topology.edges[static_cast<std::size_t>(t.edge)];
        std::size_t u = static_cast<std::size_t>(e.u), v = static_cast<std::size_t>(e.v);
        if (u == v) continue; // rewritten below from the keep flag
        S w = a(u, v) * (t.death - t.birth);
        out.a(u, v) = w;
        out.a(v, u) = w;
    }
    if (keep_selfloops)
        for (std::size_t i = 0; i < n; ++i) out.a(i, i) = a(i, i);
    return out;
}

// --- full pipeline ---

template <class S>
struct PoolLayerOutputT {
    Mat<S> s;
    Mat<S> a_pool;      // S^T A S
    Mat<S> x_pool;      // S^T X_embed
    Mat<S> a_norm;      // after the method's native normalization
    Mat<S> a_resampled; // binary sample (or a_norm when resampling is off)
    Mat<S> a_out;       // after injection; input to the next layer
    S loss_recon;
    S loss_cluster;
    DiagramPair<S> diagrams; // of the resampled graph
    DiagramStatsT<S> stats;
};

template <class S>
struct TipForwardResultT {
    DiagramPair<S> original_diagrams;
    DiagramStatsT<S> original_stats;
    std::vector<PoolLayerOutputT<S>> layers;
};

namespace detail {

template <class S>
struct PoolCoreOutput {
    Mat<S> s, a_pool, x_pool, a_norm;
    S loss_recon, loss_cluster;
};

template <class S>
PoolCoreOutput<S> pool_core(const Mat<S>& a, const Mat<S>& x, const TipLayerParamsT<S>& lp,
                            PoolMethod method) {
    Mat<S> x_embed, logits;
    if (method == PoolMethod::diffpool) {
        x_embed = message_pass(a, x, lp.embed);
        logits = message_pass(a, x, lp.assign);
    } else {
        logits = message_pass(a, x, lp.assign);
        x_embed = logits;
    }
    Mat<S> s = softmax_rows(logits);
    auto [l_r, l_c] = aux_losses(method, a, s);
    auto [a_pool, x_pool] = coarsen(a, x_embed, s);
    Mat<S> a_norm = method == PoolMethod::diffpool ? a_pool : degree_normalize_sym(a_pool);
    return PoolCoreOutput<S>{std::move(s), std::move(a_pool), std::move(x_pool), std::move(a_norm),
                             std::move(l_r), std::move(l_c)};
}

template <class S>
DiagramStatsT<S> stats_of(const DiagramPair<S>& diagrams, const TransformConfig& tf, bool use_dim0) {
    DiagramStatsT<S> st;
    if (diagrams.d1.tuples.empty() && !diagrams.d0.tuples.empty()) {
        // an edgeless layer (resampling can zero every off-diagonal entry)
        // contributes flat statistics instead of aborting the forward pass
        S zero = constant_like(diagrams.d0.tuples.front().birth, 0.0);
        st.mean.assign(tf.dim(), zero);
        st.stddev.assign(tf.dim(), zero);
    } else {
        st = diagram_stats(vectorize(diagrams.d1, tf));
    }
    if (use_dim0) st = concat_stats(st, diagram_stats(vectorize(diagrams.d0, tf)));
    return st;
}

} // namespace detail

// Runs the pooling stack on a graph. Each layer coarsens, resamples the
// coarse adjacency into a binary graph, computes its persistence under the
// layer's filtration MLP and injects the persistence back into the edge
// weights. The returned layer records carry everything the losses need.
template <class S>
TipForwardResultT<S> tip_forward(const Graph& g, const ModelParamsT<S>& params,
                                 const PoolingConfig& cfg, Rng& rng) {
    cfg.validate();
    if (g.n < 1) throw param_error("tip_forward: empty graph");
    if (g.x.cols() < 1) throw param_error("tip_forward: graph has no node features");
    if (params.layers.size() != static_cast<std::size_t>(cfg.layers))
        throw param_error("tip_forward: parameter record has wrong layer count");
    if (params.phi0.empty() || params.phi0.front().w.rows() != g.x.cols())
        throw param_error("tip_forward: filtration input width does not match features");

    const S& ref = params.phi0.front().w(0, 0);
    TransformConfig tf = TransformConfig::defaults(cfg.injection_essential_death);

    Mat<double> a0 = adjacency_matrix(g);
    Mat<S> a = Mat<S>::from_fn(a0.rows(), a0.cols(),
                               [&](std::size_t i, std::size_t j) { return constant_like(ref, a0(i, j)); });
    Mat<S> x = Mat<S>::from_fn(g.x.rows(), g.x.cols(),
                               [&](std::size_t i, std::size_t j) { return constant_like(ref, g.x(i, j)); });

    TipForwardResultT<S> out;
    {
        Filtration<S> f0 = mlp_filtration(g, x, params.phi0);
        out.original_diagrams = compute_persistence(g, f0, cfg.injection_essential_death);
        out.original_stats = detail::stats_of(out.original_diagrams, tf, cfg.use_dim0);
    }

    for (std::size_t l = 0; l < params.layers.size(); ++l) {
        const auto& lp = params.layers[l];
        auto core = detail::pool_core(a, x, lp, cfg.method);
        PoolLayerOutputT<S> layer;
        layer.s = std::move(core.s);
        layer.a_pool = std::move(core.a_pool);
        layer.x_pool = std::move(core.x_pool);
        layer.a_norm = std::move(core.a_norm);
        layer.loss_recon = std::move(core.loss_recon);
        layer.loss_cluster = std::move(core.loss_cluster);
        layer.a_resampled = cfg.no_resample
                                ? layer.a_norm
                                : resample_adjacency(layer.a_norm, cfg.tau, rng, cfg.hard_sample,
                                                     cfg.detach_sample);
        auto inj = persistence_injection(layer.a_resampled, layer.x_pool, lp.phi,
                                         cfg.injection_essential_death, cfg.keep_injected_selfloops,
                                         /*apply=*/!cfg.no_injection);
        layer.a_out = std::move(inj.a);
        layer.diagrams = std::move(inj.diagrams);
        layer.stats = detail::stats_of(layer.diagrams, tf, cfg.use_dim0);
        a = layer.a_out;
        x = layer.x_pool;
        out.layers.push_back(std::move(layer));
    }
    return out;
}

// The unmodified pooling method: identical coarsening path (bit for bit),
// no resampling, no persistence, no injection.
template <class S>
struct BaseLayerOutputT {
    Mat<S> s, a_pool, x_pool, a_norm;
    S loss_recon, loss_cluster;
};

template <class S>
std::vector<BaseLayerOutputT<S>> base_forward(const Graph& g, const ModelParamsT<S>& params,
                                              const PoolingConfig& cfg) {
    cfg.validate();
    if (g.n < 1) throw param_error("base_forward: empty graph");
    if (g.x.cols() < 1) throw param_error("base_forward: graph has no node features");
    if (params.layers.size() != static_cast<std::size_t>(cfg.layers))
        throw param_error("base_forward: parameter record has wrong layer count");

    const S& ref = params.phi0.front().w(0, 0);
    Mat<double> a0 = adjacency_matrix(g);
    Mat<S> a = Mat<S>::from_fn(a0.rows(), a0.cols(),
                               [&](std::size_t i, std::size_t j) { return constant_like(ref, a0(i, j)); });
    Mat<S> x = Mat<S>::from_fn(g.x.rows(), g.x.cols(),
                               [&](std::size_t i, std::size_t j) { return constant_like(ref, g.x(i, j)); });

    std::vector<BaseLayerOutputT<S>> out;
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
        auto core = detail::pool_core(a, x, params.layers[l], cfg.method);
        BaseLayerOutputT<S> layer{std::move(core.s), std::move(core.a_pool), std::move(core.x_pool),
                                  std::move(core.a_norm), std::move(core.loss_recon),
                                  std::move(core.loss_cluster)};
        a = layer.a_norm;
        x = layer.x_pool;
        out.push_back(std::move(layer));
    }
    return out;
}

} // namespace tip
