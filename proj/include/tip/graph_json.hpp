#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "tip/errors.hpp"
#include "tip/graph.hpp"

namespace tip {

// On-disk schema:
//   {"n": 5, "edges": [[0, 1, 1.0], ...], "x": [[...], ...], "label": 0}
// "x" is omitted when the graph has no features, "label" when unlabeled.
// Edges are written in canonical order; loading re-canonicalizes, so a
// save/load round trip reproduces the graph bit for bit.

inline nlohmann::json graph_to_json(const Graph& g) {
    nlohmann::json j;
    j["n"] = g.n;
    nlohmann::json edges = nlohmann::json::array();
    for (const Edge& e : g.edges) edges.push_back({e.u, e.v, e.w});
    j["edges"] = std::move(edges);
    if (g.x.cols() > 0) {
        nlohmann::json x = nlohmann::json::array();
        for (std::size_t r = 0; r < g.x.rows(); ++r) {
            nlohmann::json row = nlohmann::json::array();
            for (std::size_t c = 0; c < g.x.cols(); ++c) row.push_back(g.x(r, c));
            x.push_back(std::move(row));
        }
        j["x"] = std::move(x);
    }
    if (g.label) j["label"] = *g.label;
    return j;
}

inline Graph graph_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("edges"))
        throw parse_error("graph json: expected object with \"n\" and \"edges\"");
    if (!j["n"].is_number_integer()) throw parse_error("graph json: \"n\" must be an integer");
    int n = j["n"].get<int>();
    std::vector<Edge> edges;
    for (const auto& row : j["edges"]) {
        if (!row.is_array() || row.size() != 3)
            throw parse_error("graph json: each edge must be [u, v, w]");
        if (!row[0].is_number_integer() || !row[1].is_number_integer() || !row[2].is_number())
            throw parse_error("graph json: edge entries must be [int, int, number]");
        edges.push_back(Edge{row[0].get<int>(), row[1].get<int>(), row[2].get<double>()});
    }
    Mat<double> x;
    if (j.contains("x") && !j["x"].is_null()) {
        const auto& jx = j["x"];
        if (!jx.is_array() || jx.size() != static_cast<std::size_t>(n))
            throw parse_error("graph json: \"x\" must have one row per node");
        std::size_t cols = jx.empty() ? 0 : jx[0].size();
        x = Mat<double>(static_cast<std::size_t>(n), cols);
        for (std::size_t r = 0; r < jx.size(); ++r) {
            if (!jx[r].is_array() || jx[r].size() != cols)
                throw parse_error("graph json: ragged feature rows");
            for (std::size_t c = 0; c < cols; ++c) {
                if (!jx[r][c].is_number()) throw parse_error("graph json: feature must be a number");
                x(r, c) = jx[r][c].get<double>();
            }
        }
    }
    std::optional<int> label;
    if (j.contains("label") && !j["label"].is_null()) {
        if (!j["label"].is_number_integer()) throw parse_error("graph json: \"label\" must be an integer");
        label = j["label"].get<int>();
    }
    try {
        return make_graph(n, std::move(edges), std::move(x), label);
    } catch (const param_error& e) {
        throw parse_error(std::string("graph json: ") + e.what());
    }
}

inline nlohmann::json dataset_to_json(const LabeledGraphSet& set) {
    nlohmann::json j;
    nlohmann::json graphs = nlohmann::json::array();
    for (const Graph& g : set.graphs) graphs.push_back(graph_to_json(g));
    j["graphs"] = std::move(graphs);
    return j;
}

inline LabeledGraphSet dataset_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("graphs") || !j["graphs"].is_array())
        throw parse_error("dataset json: expected object with \"graphs\" array");
    LabeledGraphSet set;
    for (const auto& item : j["graphs"]) set.graphs.push_back(graph_from_json(item));
    return set;
}

// Parses JSON text, converting nlohmann's byte offsets into line/column
// context for error messages.
inline nlohmann::json parse_json_text(const std::string& text, const std::string& origin) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
        byte = std::min(byte, text.size());
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i < byte; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::ostringstream msg;
        msg << origin << ":" << line << ":" << col << ": " << e.what();
        throw parse_error(msg.str());
    }
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw parse_error("cannot open " + path + " for writing");
    out << text;
}

inline Graph load_graph(const std::string& path) {
    return graph_from_json(parse_json_text(read_text_file(path), path));
}

inline void save_graph(const Graph& g, const std::string& path) {
    write_text_file(path, graph_to_json(g).dump(2) + "\n");
}

inline LabeledGraphSet load_dataset(const std::string& path) {
    return dataset_from_json(parse_json_text(read_text_file(path), path));
}

inline void save_dataset(const LabeledGraphSet& set, const std::string& path) {
    write_text_file(path, dataset_to_json(set).dump(2) + "\n");
}

// Accepts either a single-graph file or a dataset file.
inline LabeledGraphSet load_graph_or_dataset(const std::string& path) {
    nlohmann::json j = parse_json_text(read_text_file(path), path);
    if (j.is_object() && j.contains("graphs")) return dataset_from_json(j);
    LabeledGraphSet set;
    set.graphs.push_back(graph_from_json(j));
    return set;
}

} // namespace tip
