#ifndef TSS_TSS_FORMAT_HPP
#define TSS_TSS_FORMAT_HPP

#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "tss/errors.hpp"
#include "tss/graph.hpp"

// Reader and writer for the .tss instance format:
//
//   c <comment>
//   p tss <n> <m>
//   n <id> <thr>      one per vertex, ids 1..n
//   e <u> <v>         one per edge, u != v

namespace tss {

struct Instance {
    Graph graph;
    ThresholdMap thresholds;
};

inline Instance parse_tss(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    bool have_header = false;
    long long n = 0, m = 0;
    std::vector<int> thr;
    std::vector<bool> seen;
    std::vector<Edge> edges;

    auto fail = [&](const std::string& msg) -> void { throw ParseError(msg, line_no, 1); };

    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag == "c") continue;
        if (tag == "p") {
            std::string kind;
            if (have_header) fail("duplicate problem line");
            if (!(ls >> kind >> n >> m) || kind != "tss" || n < 0 || m < 0) fail("malformed problem line");
            have_header = true;
            thr.assign(static_cast<std::size_t>(n), 0);
            seen.assign(static_cast<std::size_t>(n), false);
        } else if (tag == "n") {
            long long id, t;
            if (!have_header) fail("vertex line before problem line");
            if (!(ls >> id >> t) || id < 1 || id > n) fail("malformed vertex line");
            if (t < 0 || t > 255) fail("threshold out of range");
            if (seen[static_cast<std::size_t>(id - 1)]) fail("duplicate vertex " + std::to_string(id));
            seen[static_cast<std::size_t>(id - 1)] = true;
            thr[static_cast<std::size_t>(id - 1)] = static_cast<int>(t);
        } else if (tag == "e") {
            long long u, v;
            if (!have_header) fail("edge line before problem line");
            if (!(ls >> u >> v) || u < 1 || v < 1 || u > n || v > n) fail("malformed edge line");
            if (u == v) fail("self-loop on vertex " + std::to_string(u));
            edges.emplace_back(from_external(u), from_external(v));
        } else {
            fail("unknown line type '" + tag + "'");
        }
        std::string rest;
        if (ls >> rest) fail("trailing tokens");
    }
    if (!have_header) throw ParseError("missing problem line", line_no, 1);
    for (std::size_t v = 0; v < seen.size(); ++v)
        if (!seen[v]) throw InputError("vertex " + std::to_string(v + 1) + " has no threshold line");
    if (static_cast<long long>(edges.size()) != m)
        throw InputError("header announces " + std::to_string(m) + " edges, found " + std::to_string(edges.size()));
    Graph g(static_cast<std::size_t>(n));
    for (auto [u, v] : edges) g.add_edge(u, v);
    return {std::move(g), ThresholdMap(std::move(thr))};
}

inline std::string write_tss(const Graph& g, const ThresholdMap& thr, std::string_view comment = {}) {
    std::ostringstream out;
    if (!comment.empty()) out << "c " << comment << '\n';
    out << "p tss " << g.vertex_count() << ' ' << g.edge_count() << '\n';
    for (Vertex v = 0; v < g.vertex_count(); ++v) out << "n " << to_external(v) << ' ' << thr[v] << '\n';
    for (auto [u, v] : g.edges()) out << "e " << to_external(u) << ' ' << to_external(v) << '\n';
    return out.str();
}

}  // namespace tss

#endif
