#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <sstream>

#include "tip/cli.hpp"

using namespace tip;
namespace fs = std::filesystem;

namespace {

fs::path work_dir() {
    fs::path dir = fs::temp_directory_path() / "tip_cli_tests";
    fs::create_directories(dir);
    return dir;
}

int run_cli(std::vector<std::string> args) { return tip::cli::run(args); }

std::vector<std::string> lines_of(const std::string& path) {
    std::stringstream ss(read_text_file(path));
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(ss, line)) lines.push_back(line);
    return lines;
}

} // namespace

TEST_CASE("gen writes structured graphs and datasets", "[cli]") {
    fs::path dir = work_dir();
    std::string ring_path = (dir / "ring.json").string();
    CHECK(run_cli({"gen", "--kind", "ring", "--n", "12", "--out", ring_path}) == 0);
    Graph g = load_graph(ring_path);
    CHECK(g.n == 12);
    CHECK(g.edges.size() == 12);

    std::string grid_path = (dir / "grid.json").string();
    CHECK(run_cli({"gen", "--kind", "grid2d", "--n", "16", "--out", grid_path}) == 0);
    CHECK(load_graph(grid_path).edges.size() == 24);
    CHECK(run_cli({"gen", "--kind", "grid2d", "--n", "15", "--out", grid_path}) == 2);

    std::string set_path = (dir / "cycles.json").string();
    CHECK(run_cli({"gen", "--kind", "cycles", "--count", "4", "--seed", "3", "--out", set_path}) == 0);
    CHECK(load_dataset(set_path).graphs.size() == 4);

    CHECK(run_cli({"gen", "--kind", "nonsense", "--out", ring_path}) == 2);
    CHECK(run_cli({"gen", "--kind", "ring"}) == 2); // --out is required
    CHECK(run_cli({}) == 2);                        // a subcommand is required
}

TEST_CASE("ph writes diagram csv and svg", "[cli]") {
    fs::path dir = work_dir();
    std::string gpath = (dir / "tri.json").string();
    save_graph(ring(3), gpath);
    std::string csv = (dir / "tri.csv").string();
    std::string svg = (dir / "tri.svg").string();
    CHECK(run_cli({"ph", "--in", gpath, "--filtration", "degree", "--out", csv, "--svg", svg}) == 0);
    auto lines = lines_of(csv);
    REQUIRE(lines.size() == 7); // header + 3 vertex tuples + 3 edge tuples
    CHECK(lines[0] == "dim,birth,death,edge_u,edge_v");
    CHECK(read_text_file(svg).find("<svg") != std::string::npos);

    CHECK(run_cli({"ph", "--in", gpath, "--filtration", "unknown", "--out", csv}) == 2);
    CHECK(run_cli({"ph", "--in", (dir / "missing.json").string(), "--out", csv}) == 1);

    // every named filtration runs
    for (const char* f : {"constant", "forman", "mlp"})
        CHECK(run_cli({"ph", "--in", gpath, "--filtration", f, "--out", csv}) == 0);
}

TEST_CASE("pool produces a coarse graph", "[cli]") {
    fs::path dir = work_dir();
    std::string out = (dir / "coarse.json").string();
    std::string dot = (dir / "coarse.dot").string();
    CHECK(run_cli({"pool", "--kind", "ring", "--n", "16", "--seed", "4", "--method", "mincut",
                   "--ratio", "0.25", "--out", out, "--dot", dot, "--cut", "0.01"}) == 0);
    Graph coarse = load_graph(out);
    CHECK(coarse.n == 4);
    CHECK(read_text_file(dot).find("graph coarse {") == 0);

    std::string in = (dir / "in.json").string();
    save_graph(ring(8), in);
    CHECK(run_cli({"pool", "--in", in, "--kind", "ring", "--out", out}) == 2); // exclusive
    CHECK(run_cli({"pool", "--out", out}) == 2);
    CHECK(run_cli({"pool", "--kind", "ring", "--n", "8", "--ratio", "2.0", "--out", out}) == 2);
    CHECK(run_cli({"pool", "--kind", "ring", "--n", "8", "--method", "nope", "--out", out}) == 2);
}

TEST_CASE("train-topo records a loss history", "[cli]") {
    fs::path dir = work_dir();
    std::string out = (dir / "history.csv").string();
    CHECK(run_cli({"train-topo", "--kind", "ring", "--n", "8", "--steps", "2", "--lr", "0.05",
                   "--seed", "1", "--ratio", "0.25", "--out", out}) == 0);
    auto lines = lines_of(out);
    REQUIRE(lines.size() == 4); // header + step 0 + two steps
    CHECK(lines[0] == "step,loss,wasserstein");
    CHECK(lines[1].substr(0, 3) == "0,,");
    CHECK(lines[1].size() > 3);    // distance recorded before training
    CHECK(lines[2].back() == ','); // interior step: loss but no distance
    CHECK(lines[3].back() != ','); // final step carries a distance again

    CHECK(run_cli({"train-topo", "--kind", "ring", "--n", "8", "--steps", "1", "--ablate",
                   "bogus", "--out", out}) == 2);
    CHECK(run_cli({"train-topo", "--kind", "ring", "--n", "8", "--steps", "1", "--ablate",
                   "no_resample,use_dim0", "--out", out}) == 0);
}

TEST_CASE("eval-topo and expressivity and ablate", "[cli]") {
    fs::path dir = work_dir();
    std::string out = (dir / "eval.csv").string();
    CHECK(run_cli({"eval-topo", "--kind", "ring", "--n", "8", "--steps", "1", "--seed", "2",
                   "--out", out}) == 0);
    auto lines = lines_of(out);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "method,base,trained");
    CHECK(lines[1].substr(0, 9) == "diffpool,");

    std::string ex = (dir / "expr.csv").string();
    CHECK(run_cli({"expressivity", "--count", "4", "--seed", "11", "--out", ex}) == 0);
    auto exl = lines_of(ex);
    REQUIRE(exl.size() == 5);
    CHECK(exl[0] == "pair_id,wl,ph,divergence_iter");
    for (std::size_t i = 1; i < exl.size(); ++i) {
        auto second_comma = exl[i].find(',', exl[i].find(',') + 1);
        CHECK(exl[i][second_comma + 1] == '1'); // persistence separated every pair
    }

    std::string ab = (dir / "ablate.csv").string();
    CHECK(run_cli({"ablate", "--kind", "ring", "--n", "8", "--steps", "1", "--seed", "3", "--out",
                   ab}) == 0);
    auto abl = lines_of(ab);
    REQUIRE(abl.size() == 8); // header + seven variants
    CHECK(abl[0] == "variant,final_loss,distance");
    CHECK(abl[1].substr(0, 5) == "full,");
    CHECK(abl[7].substr(0, 12) == "wasserstein,");
}

TEST_CASE("help returns success", "[cli]") {
    CHECK(run_cli({"--help"}) == 0);
    CHECK(run_cli({"gen", "--help"}) == 0);
}

TEST_CASE("csv and dot formatting", "[cli]") {
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(-0.25) == "-0.25");

    TrainHistory h;
    h.loss = {0.5, 0.25};
    h.wasserstein = {{0, 2.0}, {2, 1.0}};
    std::ostringstream out;
    write_history_csv(out, h);
    CHECK(out.str() == "step,loss,wasserstein\n0,,2\n1,0.5,\n2,0.25,1\n");

    Graph g = make_graph(3, {{0, 1, 0.5}, {1, 2, 0.01}});
    std::ostringstream dot;
    write_dot(dot, g, 0.05);
    std::string text = dot.str();
    CHECK(text.find("n0 -- n1") != std::string::npos);
    CHECK(text.find("n1 -- n2") == std::string::npos);
    CHECK(text.find("n2;") == std::string::npos); // stranded node dropped

    std::ostringstream filt;
    write_filtration_csv(filt, g, degree_filtration(g));
    CHECK(filt.str().find("node,value\n0,1\n") != std::string::npos);
}
