#pragma once

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tip/errors.hpp"
#include "tip/expressivity.hpp"
#include "tip/export.hpp"
#include "tip/generate.hpp"
#include "tip/graph_json.hpp"
#include "tip/pooling.hpp"
#include "tip/train.hpp"

namespace tip::cli {

namespace detail {

inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw param_error("cannot open " + path + " for writing");
    return out;
}

inline int square_side(int n, const char* kind) {
    int side = static_cast<int>(std::llround(std::sqrt(static_cast<double>(n))));
    if (side * side != n)
        throw param_error(std::string(kind) + ": --n must be a perfect square, got " +
                          std::to_string(n));
    return side;
}

inline Graph structured_graph(const std::string& kind, int n, double p, std::uint64_t seed) {
    if (kind == "ring") return ring(n);
    if (kind == "grid2d") {
        int side = square_side(n, "grid2d");
        return grid2d(side, side);
    }
    if (kind == "torus") {
        int side = square_side(n, "torus");
        return torus(side, side);
    }
    if (kind == "random") {
        Rng rng(seed);
        return er_random(n, p, rng);
    }
    throw param_error("unknown graph kind: " + kind);
}

inline Graph resolve_graph(const std::string& in, const std::string& kind, int n, double p,
                           std::uint64_t seed) {
    if (!in.empty() && !kind.empty()) throw param_error("--in and --kind are mutually exclusive");
    if (!in.empty()) return load_graph(in);
    if (!kind.empty()) return structured_graph(kind, n, p, seed);
    throw param_error("either --in or --kind is required");
}

inline void apply_ablation(PoolingConfig& cfg, const std::string& list) {
    if (list.empty()) return;
    std::stringstream ss(list);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok == "no_resample") cfg.no_resample = true;
        else if (tok == "no_injection") cfg.no_injection = true;
        else if (tok == "no_topo_loss") cfg.no_topo_loss = true;
        else if (tok == "use_dim0") cfg.use_dim0 = true;
        else if (tok == "fixed_filtration") cfg.fixed_filtration = true;
        else if (tok == "wasserstein") cfg.wasserstein_objective = true;
        else if (!tok.empty()) throw param_error("unknown ablation toggle: " + tok);
    }
}

struct CommonPoolArgs {
    std::string method = "diffpool";
    double ratio = 0.25;
    int layers = 1;
    double tau = 1.0;
    std::string ablate;

    void attach(CLI::App* cmd) {
        cmd->add_option("--method", method, "pooling method: diffpool|mincut|dmon");
        cmd->add_option("--ratio", ratio, "clusters per node in (0, 1]");
        cmd->add_option("--layers", layers, "number of pooling layers");
        cmd->add_option("--tau", tau, "Gumbel-softmax temperature");
        cmd->add_option("--ablate", ablate,
                        "comma list: no_resample,no_injection,no_topo_loss,use_dim0,"
                        "fixed_filtration,wasserstein");
    }

    PoolingConfig config() const {
        PoolingConfig cfg;
        cfg.method = parse_pool_method(method);
        cfg.ratio = ratio;
        cfg.layers = layers;
        cfg.tau = tau;
        apply_ablation(cfg, ablate);
        cfg.validate();
        return cfg;
    }
};

inline int run_impl(const std::vector<std::string>& args) {
    CLI::App app{"topology-preserving graph pooling toolkit"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a graph or dataset as JSON");
    std::string gen_kind = "ring", gen_out;
    int gen_n = 64, gen_count = 100;
    double gen_p = 0.3;
    std::uint64_t gen_seed = 0;
    gen->add_option("--kind", gen_kind, "ring|grid2d|torus|random|cycles|two_cycles")->required();
    gen->add_option("--n", gen_n, "node count (structured kinds)");
    gen->add_option("--count", gen_count, "graph count (dataset kinds)");
    gen->add_option("--p", gen_p, "edge probability (random kind)");
    gen->add_option("--seed", gen_seed, "random seed");
    gen->add_option("--out", gen_out, "output path")->required();

    // ph
    auto* ph = app.add_subcommand("ph", "persistence diagram of a graph");
    std::string ph_in, ph_out, ph_svg, ph_filtration = "constant";
    std::uint64_t ph_seed = 0;
    ph->add_option("--in", ph_in, "graph JSON")->required();
    ph->add_option("--filtration", ph_filtration, "constant|degree|forman|mlp");
    ph->add_option("--seed", ph_seed, "seed for the mlp filtration init");
    ph->add_option("--out", ph_out, "diagram CSV path")->required();
    ph->add_option("--svg", ph_svg, "optional scatter plot path");

    // pool
    auto* pool = app.add_subcommand("pool", "run the pooling pipeline once (untrained)");
    std::string pool_in, pool_kind, pool_out, pool_dot;
    int pool_n = 64;
    double pool_cut = 0.05, pool_p = 0.3;
    std::uint64_t pool_seed = 0;
    CommonPoolArgs pool_args;
    pool->add_option("--in", pool_in, "graph JSON");
    pool->add_option("--kind", pool_kind, "generate input on the fly");
    pool->add_option("--n", pool_n, "node count for --kind");
    pool->add_option("--p", pool_p, "edge probability for --kind random");
    pool->add_option("--seed", pool_seed, "random seed");
    pool_args.attach(pool);
    pool->add_option("--out", pool_out, "coarse graph JSON path")->required();
    pool->add_option("--dot", pool_dot, "DOT drawing path");
    pool->add_option("--cut", pool_cut, "edge weight cut for the DOT drawing");

    // train-topo
    auto* train = app.add_subcommand("train-topo", "train the pipeline on one graph");
    std::string train_in, train_kind, train_out;
    int train_n = 64, train_steps = 300;
    double train_lr = 0.05, train_p = 0.3;
    std::uint64_t train_seed = 0;
    CommonPoolArgs train_args;
    bool train_adam = false;
    train->add_option("--in", train_in, "graph JSON");
    train->add_option("--kind", train_kind, "generate input on the fly");
    train->add_option("--n", train_n, "node count for --kind");
    train->add_option("--p", train_p, "edge probability for --kind random");
    train->add_option("--seed", train_seed, "random seed");
    train->add_option("--steps", train_steps, "gradient steps");
    train->add_option("--lr", train_lr, "learning rate");
    train->add_flag("--adam", train_adam, "use Adam instead of plain gradient descent");
    train_args.attach(train);
    train->add_option("--out", train_out, "history CSV path")->required();

    // eval-topo
    auto* ev = app.add_subcommand("eval-topo", "untrained base vs trained pipeline distances");
    std::string ev_in, ev_kind, ev_out;
    int ev_n = 64, ev_steps = 300;
    double ev_lr = 0.05, ev_p = 0.3;
    std::uint64_t ev_seed = 0;
    bool ev_adam = false;
    CommonPoolArgs ev_args;
    ev->add_option("--in", ev_in, "graph JSON");
    ev->add_option("--kind", ev_kind, "generate input on the fly");
    ev->add_option("--n", ev_n, "node count for --kind");
    ev->add_option("--p", ev_p, "edge probability for --kind random");
    ev->add_option("--seed", ev_seed, "random seed");
    ev->add_option("--steps", ev_steps, "gradient steps");
    ev->add_option("--lr", ev_lr, "learning rate");
    ev->add_flag("--adam", ev_adam, "use Adam instead of plain gradient descent");
    ev_args.attach(ev);
    ev->add_option("--out", ev_out, "optional CSV path");

    // expressivity
    auto* ex = app.add_subcommand("expressivity", "color refinement vs persistence verdicts");
    int ex_count = 20;
    std::uint64_t ex_seed = 0;
    std::string ex_out;
    ex->add_option("--count", ex_count, "number of graph pairs");
    ex->add_option("--seed", ex_seed, "random seed");
    ex->add_option("--out", ex_out, "verdict CSV path")->required();

    // ablate
    auto* ab = app.add_subcommand("ablate", "train every ablation variant on one graph");
    std::string ab_in, ab_kind, ab_out;
    int ab_n = 64, ab_steps = 100;
    double ab_lr = 0.05, ab_p = 0.3;
    std::uint64_t ab_seed = 0;
    bool ab_adam = false;
    CommonPoolArgs ab_args;
    ab->add_option("--in", ab_in, "graph JSON");
    ab->add_option("--kind", ab_kind, "generate input on the fly");
    ab->add_option("--n", ab_n, "node count for --kind");
    ab->add_option("--p", ab_p, "edge probability for --kind random");
    ab->add_option("--seed", ab_seed, "random seed");
    ab->add_option("--steps", ab_steps, "gradient steps per variant");
    ab->add_option("--lr", ab_lr, "learning rate");
    ab->add_flag("--adam", ab_adam, "use Adam instead of plain gradient descent");
    ab_args.attach(ab);
    ab->add_option("--out", ab_out, "result CSV path")->required();

    std::vector<const char*> argv;
    argv.push_back("tip");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    }

    if (gen->parsed()) {
        if (gen_kind == "cycles" || gen_kind == "two_cycles") {
            LabeledGraphSet set = gen_kind == "cycles" ? cycles_dataset(gen_count, gen_seed)
                                                       : two_cycles_dataset(gen_count, gen_seed);
            save_dataset(set, gen_out);
            std::cout << "wrote " << set.graphs.size() << " graphs to " << gen_out << "\n";
        } else {
            Graph g = structured_graph(gen_kind, gen_n, gen_p, gen_seed);
            save_graph(g, gen_out);
            std::cout << "wrote graph (n=" << g.n << ", m=" << g.edges.size() << ") to " << gen_out
                      << "\n";
        }
        return 0;
    }

    if (ph->parsed()) {
        Graph g = load_graph(ph_in);
        Filtration<double> f;
        if (ph_filtration == "constant") {
            f = constant_filtration(g);
        } else if (ph_filtration == "degree") {
            f = degree_filtration(g);
        } else if (ph_filtration == "forman") {
            f = forman_filtration(g);
        } else if (ph_filtration == "mlp") {
            Graph gf = ensure_features(g);
            Rng rng(ph_seed);
            MlpFiltration phi = init_mlp_filtration(static_cast<int>(gf.x.cols()), 16, rng);
            f = mlp_filtration(gf, gf.x, phi);
        } else {
            throw param_error("unknown filtration: " + ph_filtration);
        }
        DiagramPair<double> dd = compute_persistence(g, f);
        auto out = open_out(ph_out);
        write_diagram_csv(out, g, dd);
        if (!ph_svg.empty()) {
            auto svg = open_out(ph_svg);
            write_diagram_svg(svg, dd);
        }
        std::cout << "wrote " << dd.d0.tuples.size() + dd.d1.tuples.size() << " tuples to "
                  << ph_out << "\n";
        return 0;
    }

    if (pool->parsed()) {
        Graph g = resolve_graph(pool_in, pool_kind, pool_n, pool_p, mix_seed(pool_seed, 7));
        Graph gf = ensure_features(g);
        PoolingConfig cfg = pool_args.config();
        Rng init_rng(mix_seed(pool_seed, seeds::init));
        ModelParams params = init_params(static_cast<int>(gf.x.cols()), gf.n, cfg, init_rng);
        Rng rng(mix_seed(pool_seed, 0));
        auto fwd = tip_forward(gf, params, cfg, rng);
        Graph coarse = coarse_graph_from(value_matrix(fwd.layers.back().a_out));
        save_graph(coarse, pool_out);
        if (!pool_dot.empty()) {
            auto dot = open_out(pool_dot);
            write_dot(dot, coarse, pool_cut);
        }
        std::cout << "wrote coarse graph (n=" << coarse.n << ", m=" << coarse.edges.size() << ") to "
                  << pool_out << "\n";
        return 0;
    }

    if (train->parsed()) {
        Graph g = resolve_graph(train_in, train_kind, train_n, train_p, mix_seed(train_seed, 7));
        PoolingConfig cfg = train_args.config();
        TrainOptions opts;
        opts.use_adam = train_adam;
        TrainResult res = train_topo_similarity(g, cfg, train_steps, train_lr, train_seed, opts);
        auto out = open_out(train_out);
        write_history_csv(out, res.history);
        std::cout << "trained " << train_steps << " steps; final distance "
                  << format_double(res.history.wasserstein.back().second) << "; history in "
                  << train_out << "\n";
        return 0;
    }

    if (ev->parsed()) {
        Graph g = resolve_graph(ev_in, ev_kind, ev_n, ev_p, mix_seed(ev_seed, 7));
        PoolingConfig cfg = ev_args.config();
        TrainOptions opts;
        opts.use_adam = ev_adam;
        double base = base_pipeline_distance(g, cfg, ev_seed);
        TrainResult res = train_topo_similarity(g, cfg, ev_steps, ev_lr, ev_seed, opts);
        double trained = res.history.wasserstein.back().second;
        std::cout << "method=" << pool_method_name(cfg.method) << " base=" << format_double(base)
                  << " trained=" << format_double(trained) << "\n";
        if (!ev_out.empty()) {
            auto out = open_out(ev_out);
            out << "method,base,trained\n"
                << pool_method_name(cfg.method) << ',' << format_double(base) << ','
                << format_double(trained) << '\n';
        }
        return 0;
    }

    if (ex->parsed()) {
        auto pairs = pair_suite(ex_count, ex_seed);
        auto out = open_out(ex_out);
        out << "pair_id,wl,ph,divergence_iter\n";
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            auto mode = wl_refine_pair(pairs[i].a, pairs[i].b).divergence_iter
                            ? DistinguishFiltration::wl_labels
                            : DistinguishFiltration::constant;
            DistinguishVerdict v = ph_distinguish(pairs[i].a, pairs[i].b, mode);
            out << i << ',' << (v.wl_distinguishes ? 1 : 0) << ',' << (v.ph_distinguishes ? 1 : 0)
                << ',';
            if (v.divergence_iter) out << *v.divergence_iter;
            out << '\n';
        }
        std::cout << "wrote " << pairs.size() << " verdicts to " << ex_out << "\n";
        return 0;
    }

    if (ab->parsed()) {
        Graph g = resolve_graph(ab_in, ab_kind, ab_n, ab_p, mix_seed(ab_seed, 7));
        TrainOptions opts;
        opts.use_adam = ab_adam;
        struct Variant {
            const char* name;
            const char* toggles;
        };
        const Variant variants[] = {{"full", ""},
                                    {"no_resample", "no_resample"},
                                    {"no_injection", "no_injection"},
                                    {"no_topo_loss", "no_topo_loss"},
                                    {"use_dim0", "use_dim0"},
                                    {"fixed_filtration", "fixed_filtration"},
                                    {"wasserstein", "wasserstein"}};
        auto out = open_out(ab_out);
        out << "variant,final_loss,distance\n";
        for (const auto& v : variants) {
            PoolingConfig cfg = ab_args.config();
            apply_ablation(cfg, v.toggles);
            TrainResult res = train_topo_similarity(g, cfg, ab_steps, ab_lr, ab_seed, opts);
            double final_loss = res.history.loss.empty() ? 0.0 : res.history.loss.back();
            out << v.name << ',' << format_double(final_loss) << ','
                << format_double(res.history.wasserstein.back().second) << '\n';
            std::cout << v.name << ": distance "
                      << format_double(res.history.wasserstein.back().second) << "\n";
        }
        return 0;
    }

    return 0;
}

} // namespace detail

// Exit codes: 0 success, 2 bad arguments or configuration, 1 runtime
// failure (unreadable input, non-finite loss, ...).
inline int run(const std::vector<std::string>& args) {
    try {
        return detail::run_impl(args);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const param_error& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

inline int run(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args);
}

} // namespace tip::cli
