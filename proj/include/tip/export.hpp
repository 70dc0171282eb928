#pragma once

#include <charconv>
#include <ostream>
#include <string>
#include <vector>

#include "tip/errors.hpp"
#include "tip/graph.hpp"
#include "tip/persistence.hpp"
#include "tip/train.hpp"

namespace tip {

// Shortest round-trip decimal form; keeps emitted files byte-stable across
// runs and platforms.
inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// CSV layout: dim,birth,death,edge_u,edge_v with edge columns empty for
// essential dimension-0 classes.
inline void write_diagram_csv(std::ostream& out, const Graph& g, const DiagramPair<double>& dd) {
    out << "dim,birth,death,edge_u,edge_v\n";
    auto rows = [&](const Diagram<double>& d) {
        for (const auto& t : d.tuples) {
            out << d.dim << ',' << format_double(t.birth) << ',' << format_double(t.death) << ',';
            if (t.edge >= 0) {
                const Edge& e = g.edges[static_cast<std::size_t>(t.edge)];
                out << e.u << ',' << e.v;
            } else {
                out << ',';
            }
            out << '\n';
        }
    };
    rows(dd.d0);
    rows(dd.d1);
}

inline void write_filtration_csv(std::ostream& out, const Graph& g, const Filtration<double>& f) {
    out << "node,value\n";
    for (std::size_t v = 0; v < f.vertex_values.size(); ++v)
        out << v << ',' << format_double(f.vertex_values[v]) << '\n';
    out << "u,v,value\n";
    for (std::size_t i = 0; i < f.edge_values.size(); ++i)
        out << g.edges[i].u << ',' << g.edges[i].v << ',' << format_double(f.edge_values[i]) << '\n';
}

inline void write_history_csv(std::ostream& out, const TrainHistory& h) {
    out << "step,loss,wasserstein\n";
    std::size_t wi = 0;
    auto w_at = [&](int step) -> std::string {
        if (wi < h.wasserstein.size() && h.wasserstein[wi].first == step)
            return format_double(h.wasserstein[wi++].second);
        return "";
    };
    out << 0 << ",," << w_at(0) << '\n';
    for (std::size_t s = 0; s < h.loss.size(); ++s)
        out << s + 1 << ',' << format_double(h.loss[s]) << ',' << w_at(static_cast<int>(s) + 1)
            << '\n';
}

// Undirected DOT drawing; edges below the weight cut and the nodes they
// strand are left out.
inline void write_dot(std::ostream& out, const Graph& g, double cut = 0.05) {
    out << "graph coarse {\n";
    std::vector<bool> keep(static_cast<std::size_t>(g.n), false);
    for (const Edge& e : g.edges)
        if (e.w >= cut) {
            keep[static_cast<std::size_t>(e.u)] = true;
            keep[static_cast<std::size_t>(e.v)] = true;
        }
    for (int v = 0; v < g.n; ++v)
        if (keep[static_cast<std::size_t>(v)]) out << "  n" << v << ";\n";
    for (const Edge& e : g.edges)
        if (e.w >= cut)
            out << "  n" << e.u << " -- n" << e.v << " [label=\"" << format_double(e.w) << "\"];\n";
    out << "}\n";
}

// Birth/death scatter of both diagrams with the diagonal for reference.
inline void write_diagram_svg(std::ostream& out, const DiagramPair<double>& dd) {
    double hi = 1.0;
    for (const auto* d : {&dd.d0, &dd.d1})
        for (const auto& t : d->tuples) {
            hi = std::max(hi, t.birth);
            hi = std::max(hi, t.death);
        }
    const double size = 480.0, margin = 40.0;
    double scale = (size - 2.0 * margin) / hi;
    auto sx = [&](double v) { return margin + v * scale; };
    auto sy = [&](double v) { return size - margin - v * scale; };
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" height=\"480\" "
           "viewBox=\"0 0 480 480\">\n";
    out << "  <rect width=\"480\" height=\"480\" fill=\"white\"/>\n";
    out << "  <line x1=\"" << format_double(sx(0)) << "\" y1=\"" << format_double(sy(0))
        << "\" x2=\"" << format_double(sx(hi)) << "\" y2=\"" << format_double(sy(hi))
        << "\" stroke=\"#999999\"/>\n";
    auto points = [&](const Diagram<double>& d, const char* color) {
        for (const auto& t : d.tuples)
            out << "  <circle cx=\"" << format_double(sx(t.birth)) << "\" cy=\""
                << format_double(sy(t.death)) << "\" r=\"4\" fill=\"" << color
                << "\" fill-opacity=\"0.6\"/>\n";
    };
    points(dd.d0, "#1f77b4");
    points(dd.d1, "#d62728");
    out << "</svg>\n";
}

} // namespace tip
