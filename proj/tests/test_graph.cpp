#include <catch2/catch_amalgamated.hpp>

#include <filesystem>

#include "tip/generate.hpp"
#include "tip/graph.hpp"
#include "tip/graph_json.hpp"
#include "tip/persistence.hpp"
#include "tip/spectral.hpp"

using namespace tip;

TEST_CASE("make_graph canonicalizes and validates", "[graph]") {
    Graph g = make_graph(4, {{2, 0, 1.5}, {1, 0, 1.0}, {3, 3, 2.0}});
    REQUIRE(g.edges.size() == 3);
    CHECK(g.edges[0].u == 0);
    CHECK(g.edges[0].v == 1);
    CHECK(g.edges[1].u == 0);
    CHECK(g.edges[1].v == 2);
    CHECK(g.edges[1].w == 1.5);
    CHECK(g.edges[2].u == 3);
    CHECK(g.edges[2].v == 3);

    CHECK_THROWS_AS(make_graph(2, {{0, 2, 1.0}}), param_error);
    CHECK_THROWS_AS(make_graph(2, {{0, 1, 1.0}, {1, 0, 2.0}}), param_error);
    CHECK_THROWS_AS(make_graph(-1, {}), param_error);
    CHECK_THROWS_AS(make_graph(2, {{0, 1, std::nan("")}}), param_error);
    CHECK_THROWS_AS(make_graph(2, {}, Mat<double>(3, 1)), param_error);
}

TEST_CASE("structured generators have the expected shape", "[graph]") {
    Graph r = ring(64);
    CHECK(r.n == 64);
    CHECK(r.edges.size() == 64);
    for (int d : degrees(r)) CHECK(d == 2);

    Graph g = grid2d(8, 8);
    CHECK(g.n == 64);
    CHECK(g.edges.size() == 112);

    Graph t = torus(8, 8);
    CHECK(t.n == 64);
    CHECK(t.edges.size() == 128);
    for (int d : degrees(t)) CHECK(d == 4);

    CHECK_THROWS_AS(ring(2), param_error);
    CHECK_THROWS_AS(grid2d(1, 5), param_error);
    CHECK_THROWS_AS(torus(2, 3), param_error);
}

TEST_CASE("generator determinism", "[graph]") {
    Rng a(42), b(42);
    Graph g1 = er_random(10, 0.4, a);
    Graph g2 = er_random(10, 0.4, b);
    CHECK(graphs_equal(g1, g2));

    LabeledGraphSet s1 = cycles_dataset(8, 7);
    LabeledGraphSet s2 = cycles_dataset(8, 7);
    REQUIRE(s1.graphs.size() == s2.graphs.size());
    for (std::size_t i = 0; i < s1.graphs.size(); ++i)
        CHECK(graphs_equal(s1.graphs[i], s2.graphs[i]));
}

TEST_CASE("cycle datasets carry the advertised structure", "[graph]") {
    LabeledGraphSet cy = cycles_dataset(20, 3);
    for (std::size_t i = 0; i < cy.graphs.size(); ++i) {
        const Graph& g = cy.graphs[i];
        REQUIRE(g.label.has_value());
        CHECK(*g.label == static_cast<int>(i % 2));
        CHECK(g.x.cols() == 3);
        BettiNumbers b = betti(g);
        CHECK(b.beta0 == 1);
        CHECK(b.beta1 == (*g.label == 0 ? 1 : 2));
        CHECK(g.n >= 9);
        CHECK(g.n <= 20);
    }

    LabeledGraphSet tc = two_cycles_dataset(20, 3);
    for (const Graph& g : tc.graphs) {
        BettiNumbers b = betti(g);
        CHECK(b.beta1 == 2); // both classes: cycle counting cannot separate them
        CHECK(b.beta0 == (label_of(g) == 0 ? 2 : 1));
    }
}

TEST_CASE("permute is a relabeling", "[graph]") {
    Graph r = ring(6);
    std::vector<int> rot = {1, 2, 3, 4, 5, 0};
    Graph p = permute(r, rot);
    CHECK(graphs_equal(r, p)); // rotation maps the edge set onto itself

    Graph g = make_graph(3, {{0, 1, 1.0}, {1, 2, 2.0}},
                         Mat<double>(3, 1, std::vector<double>{10, 20, 30}));
    Graph q = permute(g, {2, 0, 1});
    CHECK(q.x(2, 0) == 10);
    CHECK(q.x(0, 0) == 20);
    CHECK(q.edges[0].u == 0);
    CHECK(q.edges[0].v == 1);
    CHECK(q.edges[0].w == 2.0);
    CHECK(q.edges[1].u == 0);
    CHECK(q.edges[1].v == 2);
    CHECK(q.edges[1].w == 1.0);

    CHECK_THROWS_AS(permute(r, {0, 1, 2}), param_error);
    CHECK_THROWS_AS(permute(r, {0, 0, 1, 2, 3, 4}), param_error);
}

TEST_CASE("components and betti traversal", "[graph]") {
    std::vector<Edge> edges;
    append_cycle(edges, 0, 3);
    append_cycle(edges, 3, 3);
    Graph g = make_graph(6, std::move(edges));
    auto comp = component_labels(g);
    CHECK(comp == std::vector<int>{0, 0, 0, 1, 1, 1});
    BettiNumbers b = betti(g);
    CHECK(b.beta0 == 2);
    CHECK(b.beta1 == 2);

    // self-loops do not create independent cycles here
    Graph loops = make_graph(2, {{0, 0, 1.0}, {0, 1, 1.0}});
    BettiNumbers bl = betti(loops);
    CHECK(bl.beta0 == 1);
    CHECK(bl.beta1 == 0);
}

TEST_CASE("bridge detection", "[graph]") {
    Graph path = path_graph(5);
    auto pb = bridges(path);
    for (bool b : pb) CHECK(b);

    Graph r = ring(6);
    for (bool b : bridges(r)) CHECK_FALSE(b);

    // two triangles joined by a bridge
    std::vector<Edge> edges;
    append_cycle(edges, 0, 3);
    append_cycle(edges, 3, 3);
    edges.push_back(Edge{0, 3, 1.0});
    Graph g = make_graph(6, std::move(edges));
    auto eb = bridges(g);
    REQUIRE(eb.size() == g.edges.size());
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        bool is_the_bridge = g.edges[i].u == 0 && g.edges[i].v == 3;
        CHECK(eb[i] == is_the_bridge);
    }
}

TEST_CASE("json round trip is byte stable", "[graph][io]") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "tip_graph_io";
    fs::create_directories(dir);

    Rng rng(11);
    Graph g = er_random(9, 0.5, rng);
    g.label = 1;
    fs::path p1 = dir / "g1.json";
    save_graph(g, p1.string());
    Graph back = load_graph(p1.string());
    CHECK(graphs_equal(g, back));
    fs::path p2 = dir / "g2.json";
    save_graph(back, p2.string());
    CHECK(read_text_file(p1.string()) == read_text_file(p2.string()));

    LabeledGraphSet set = cycles_dataset(4, 5);
    fs::path pd = dir / "set.json";
    save_dataset(set, pd.string());
    LabeledGraphSet sback = load_dataset(pd.string());
    REQUIRE(sback.graphs.size() == set.graphs.size());
    for (std::size_t i = 0; i < set.graphs.size(); ++i)
        CHECK(graphs_equal(set.graphs[i], sback.graphs[i]));
}

TEST_CASE("json loader reports line context and schema problems", "[graph][io]") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "tip_graph_io";
    fs::create_directories(dir);
    fs::path bad = dir / "bad.json";
    write_text_file(bad.string(), "{\n  \"n\": 3,\n  \"edges\": [[0, 1,\n}\n");
    try {
        load_graph(bad.string());
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(std::string(e.what()).find(":4:") != std::string::npos);
    }

    write_text_file(bad.string(), "{\"n\": 2, \"edges\": [[0, 5, 1.0]]}");
    CHECK_THROWS_AS(load_graph(bad.string()), parse_error);
    write_text_file(bad.string(), "{\"edges\": []}");
    CHECK_THROWS_AS(load_graph(bad.string()), parse_error);
    write_text_file(bad.string(), "{\"n\": 2, \"edges\": [[0, 1]]}");
    CHECK_THROWS_AS(load_graph(bad.string()), parse_error);
}

TEST_CASE("laplacian eigensolver matches known spectra", "[graph][spectral]") {
    // path on 3 nodes: eigenvalues 0, 1, 3
    Graph p3 = path_graph(3);
    EigenDecomposition dec = jacobi_eigensymm(laplacian_matrix(p3));
    REQUIRE(dec.values.size() == 3);
    CHECK_THAT(dec.values[0], Catch::Matchers::WithinAbs(0.0, 1e-8));
    CHECK_THAT(dec.values[1], Catch::Matchers::WithinAbs(1.0, 1e-8));
    CHECK_THAT(dec.values[2], Catch::Matchers::WithinAbs(3.0, 1e-8));

    // residual || L v - lambda v || small on a random graph
    Rng rng(2);
    Graph g = er_random(12, 0.4, rng);
    Mat<double> l = laplacian_matrix(g);
    EigenDecomposition d2 = jacobi_eigensymm(l);
    for (std::size_t k = 0; k < d2.values.size(); ++k) {
        double resid = 0.0;
        for (std::size_t i = 0; i < l.rows(); ++i) {
            double lv = 0.0;
            for (std::size_t j = 0; j < l.cols(); ++j) lv += l(i, j) * d2.vectors(j, k);
            resid = std::max(resid, std::abs(lv - d2.values[k] * d2.vectors(i, k)));
        }
        CHECK(resid < 1e-7);
    }
}

TEST_CASE("laplacian features", "[graph][spectral]") {
    Graph r = ring(8);
    Mat<double> x = laplacian_features(r, 3);
    CHECK(x.rows() == 8);
    CHECK(x.cols() == 3);
    // first eigenvector of a connected graph is constant, sign-fixed positive
    for (std::size_t i = 0; i < 8; ++i)
        CHECK_THAT(x(i, 0), Catch::Matchers::WithinAbs(1.0 / std::sqrt(8.0), 1e-8));

    CHECK_THROWS_AS(laplacian_features(r, 0), param_error);
    CHECK_THROWS_AS(laplacian_features(r, 9), param_error);

    Graph with = ensure_features(ring(12));
    CHECK(with.x.cols() == 10);
    Graph small = ensure_features(ring(5));
    CHECK(small.x.cols() == 5);
    // graphs that already carry features are untouched
    Rng rng(3);
    Graph keep = er_random(6, 0.5, rng);
    CHECK(graphs_equal(keep, ensure_features(keep)));
}
