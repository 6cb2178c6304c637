#ifndef TSS_CORPUS_HPP
#define TSS_CORPUS_HPP

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "tss/cwexpr.hpp"
#include "tss/graph.hpp"

// Random instance generators shared by the test suites and the selftest command.

namespace tss {

struct CorpusCase {
    std::string name;
    CwExpr expr;
    ThresholdMap thresholds;
};

inline int uniform(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline Graph random_graph(std::mt19937_64& rng, int n, double edge_probability) {
    Graph g(static_cast<std::size_t>(n));
    std::bernoulli_distribution coin(edge_probability);
    for (Vertex u = 0; u < static_cast<Vertex>(n); ++u)
        for (Vertex v = u + 1; v < static_cast<Vertex>(n); ++v)
            if (coin(rng)) g.add_edge(u, v);
    return g;
}

inline ThresholdMap random_thresholds(std::mt19937_64& rng, std::size_t n, int t_max) {
    std::vector<int> thr(n);
    for (auto& t : thr) t = uniform(rng, 0, t_max);
    return ThresholdMap(std::move(thr), t_max);
}

/// Random irredundant expression on vertices 1..n over `labels` label names.
/// Subexpressions are merged pairwise at random; after each union a few joins
/// and relabels are applied, skipping joins whose classes already share an edge.
inline CwExpr random_expression(std::mt19937_64& rng, int n, int labels, int ops_per_union = 2) {
    auto name = [](int l) { return std::string(1, static_cast<char>('a' + l)); };
    struct Part {
        CwExpr expr;
        std::vector<Vertex> vertices;
    };
    Graph g(static_cast<std::size_t>(n));
    std::vector<int> label(static_cast<std::size_t>(n));
    std::vector<Part> parts;
    for (int i = 0; i < n; ++i) {
        label[static_cast<std::size_t>(i)] = uniform(rng, 0, labels - 1);
        parts.push_back({CwExpr::vertex(i + 1, name(label[static_cast<std::size_t>(i)])), {static_cast<Vertex>(i)}});
    }
    auto decorate = [&](Part& p, int ops) {
        for (int k = 0; k < ops && labels >= 2; ++k) {
            int a = uniform(rng, 0, labels - 1);
            int b = uniform(rng, 0, labels - 2);
            if (b >= a) ++b;
            if (uniform(rng, 0, 2) > 0) {
                std::vector<Vertex> xs, ys;
                for (Vertex v : p.vertices) {
                    if (label[v] == a) xs.push_back(v);
                    if (label[v] == b) ys.push_back(v);
                }
                bool clean = true;
                for (Vertex x : xs)
                    for (Vertex y : ys) clean = clean && !g.has_edge(x, y);
                if (!clean) continue;
                for (Vertex x : xs)
                    for (Vertex y : ys) g.add_edge(x, y);
                p.expr = CwExpr::join(name(a), name(b), p.expr);
            } else {
                for (Vertex v : p.vertices)
                    if (label[v] == a) label[v] = b;
                p.expr = CwExpr::relabel(name(a), name(b), p.expr);
            }
        }
    };
    while (parts.size() > 1) {
        std::size_t i = static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(parts.size()) - 1));
        Part x = std::move(parts[i]);
        parts.erase(parts.begin() + static_cast<std::ptrdiff_t>(i));
        std::size_t j = static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(parts.size()) - 1));
        Part y = std::move(parts[j]);
        parts.erase(parts.begin() + static_cast<std::ptrdiff_t>(j));
        Part merged{CwExpr::unite(x.expr, y.expr), x.vertices};
        merged.vertices.insert(merged.vertices.end(), y.vertices.begin(), y.vertices.end());
        decorate(merged, uniform(rng, 0, ops_per_union));
        parts.push_back(std::move(merged));
    }
    decorate(parts.front(), ops_per_union);
    return parts.front().expr;
}

/// Random permutation of 0..n-1.
inline GlobalOrdering random_ordering(std::mt19937_64& rng, std::size_t n) {
    std::vector<Vertex> seq(n);
    for (std::size_t i = 0; i < n; ++i) seq[i] = static_cast<Vertex>(i);
    std::shuffle(seq.begin(), seq.end(), rng);
    return GlobalOrdering(std::move(seq));
}

/// All labeled graphs on n vertices, indexed by the bitmask over pairs (u < v).
inline Graph graph_from_mask(int n, unsigned mask) {
    Graph g(static_cast<std::size_t>(n));
    unsigned bit = 0;
    for (Vertex u = 0; u < static_cast<Vertex>(n); ++u)
        for (Vertex v = u + 1; v < static_cast<Vertex>(n); ++v, ++bit)
            if ((mask >> bit) & 1U) g.add_edge(u, v);
    return g;
}

}  // namespace tss

#endif
