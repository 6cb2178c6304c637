#ifndef TSS_GRAPH_HPP
#define TSS_GRAPH_HPP

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tss/errors.hpp"

namespace tss {

/// Internal vertex index, 0-based. External ids (files, CLI, expressions) are index + 1.
using Vertex = std::uint32_t;

constexpr Vertex from_external(long long id) { return static_cast<Vertex>(id - 1); }
constexpr long long to_external(Vertex v) { return static_cast<long long>(v) + 1; }

using Edge = std::pair<Vertex, Vertex>;

/// Simple undirected graph with sorted adjacency lists.
class Graph {
public:
    Graph() = default;
    explicit Graph(std::size_t vertex_count) : adjacency_(vertex_count) {}

    Graph(std::size_t vertex_count, std::span<const Edge> edges) : adjacency_(vertex_count) {
        for (auto [u, v] : edges) add_edge(u, v);
    }

    std::size_t vertex_count() const noexcept { return adjacency_.size(); }
    std::size_t edge_count() const noexcept { return edge_count_; }

    /// Throws on self-loops, duplicates and unknown endpoints.
    void add_edge(Vertex u, Vertex v) {
        check_vertex(u);
        check_vertex(v);
        if (u == v) throw InputError("self-loop on vertex " + std::to_string(to_external(u)));
        if (has_edge(u, v))
            throw InputError("duplicate edge " + std::to_string(to_external(u)) + " " +
                             std::to_string(to_external(v)));
        insert_sorted(adjacency_[u], v);
        insert_sorted(adjacency_[v], u);
        ++edge_count_;
    }

    bool has_edge(Vertex u, Vertex v) const {
        const auto& nu = adjacency_.at(u);
        return std::binary_search(nu.begin(), nu.end(), v);
    }

    std::span<const Vertex> neighbors(Vertex v) const {
        check_vertex(v);
        return adjacency_[v];
    }

    std::size_t degree(Vertex v) const { return neighbors(v).size(); }

    /// Edges with u < v, sorted lexicographically.
    std::vector<Edge> edges() const {
        std::vector<Edge> out;
        out.reserve(edge_count_);
        for (Vertex u = 0; u < adjacency_.size(); ++u)
            for (Vertex v : adjacency_[u])
                if (u < v) out.emplace_back(u, v);
        return out;
    }

    void check_vertex(Vertex v) const {
        if (v >= adjacency_.size())
            throw InputError("unknown vertex id " + std::to_string(to_external(v)));
    }

    friend bool operator==(const Graph&, const Graph&) = default;

private:
    static void insert_sorted(std::vector<Vertex>& list, Vertex v) {
        list.insert(std::lower_bound(list.begin(), list.end(), v), v);
    }

    std::vector<std::vector<Vertex>> adjacency_;
    std::size_t edge_count_ = 0;
};

/// Per-vertex thresholds in [0, t_max].
class ThresholdMap {
public:
    ThresholdMap() = default;

    /// t_max is the largest given threshold.
    explicit ThresholdMap(std::vector<int> thr) : thr_(std::move(thr)) {
        for (int t : thr_) t_max_ = std::max(t_max_, t);
        validate();
    }

    ThresholdMap(std::vector<int> thr, int t_max) : thr_(std::move(thr)), t_max_(t_max) { validate(); }

    int operator[](Vertex v) const {
        if (v >= thr_.size()) throw InputError("no threshold for vertex " + std::to_string(to_external(v)));
        return thr_[v];
    }

    int t_max() const noexcept { return t_max_; }
    std::size_t size() const noexcept { return thr_.size(); }
    std::span<const int> values() const noexcept { return thr_; }

    friend bool operator==(const ThresholdMap&, const ThresholdMap&) = default;

private:
    void validate() const {
        if (t_max_ < 0) throw InputError("t_max must be non-negative");
        for (std::size_t v = 0; v < thr_.size(); ++v)
            if (thr_[v] < 0 || thr_[v] > t_max_)
                throw InputError("threshold of vertex " + std::to_string(v + 1) + " outside [0, t_max]");
    }

    std::vector<int> thr_;
    int t_max_ = 0;
};

/// A permutation of the vertices, read as an activation order.
class GlobalOrdering {
public:
    GlobalOrdering() = default;

    /// `sequence[i]` is the vertex activated at (0-based) step i.
    explicit GlobalOrdering(std::vector<Vertex> sequence)
        : sequence_(std::move(sequence)), position_(sequence_.size(), kUnset) {
        for (std::size_t i = 0; i < sequence_.size(); ++i) {
            Vertex v = sequence_[i];
            if (v >= sequence_.size() || position_[v] != kUnset)
                throw InputError("ordering is not a permutation");
            position_[v] = static_cast<std::uint32_t>(i);
        }
    }

    static GlobalOrdering identity(std::size_t n) {
        std::vector<Vertex> seq(n);
        for (std::size_t i = 0; i < n; ++i) seq[i] = static_cast<Vertex>(i);
        return GlobalOrdering(std::move(seq));
    }

    std::size_t size() const noexcept { return sequence_.size(); }
    std::uint32_t position(Vertex v) const {
        if (v >= position_.size()) throw InputError("unknown vertex id " + std::to_string(to_external(v)));
        return position_[v];
    }
    Vertex at(std::size_t i) const { return sequence_.at(i); }
    std::span<const Vertex> sequence() const noexcept { return sequence_; }

    friend bool operator==(const GlobalOrdering& a, const GlobalOrdering& b) { return a.sequence_ == b.sequence_; }

private:
    static constexpr std::uint32_t kUnset = ~std::uint32_t{0};
    std::vector<Vertex> sequence_;
    std::vector<std::uint32_t> position_;
};

/// Number of neighbors of v ordered before v.
inline std::size_t incoming_count(const Graph& g, const GlobalOrdering& sigma, Vertex v) {
    g.check_vertex(v);
    if (sigma.size() != g.vertex_count()) throw InputError("ordering does not cover the graph");
    const auto pv = sigma.position(v);
    return static_cast<std::size_t>(
        std::count_if(g.neighbors(v).begin(), g.neighbors(v).end(),
                      [&](Vertex u) { return sigma.position(u) < pv; }));
}

/// Vertices whose earlier neighbors fall short of their threshold, ascending.
/// sigma is k-activating exactly when this set has at most k elements.
inline std::vector<Vertex> deficiency(const Graph& g, const ThresholdMap& thr, const GlobalOrdering& sigma) {
    if (thr.size() != g.vertex_count()) throw InputError("threshold map does not cover the graph");
    std::vector<Vertex> out;
    for (Vertex v = 0; v < g.vertex_count(); ++v)
        if (static_cast<int>(incoming_count(g, sigma, v)) < thr[v]) out.push_back(v);
    return out;
}

}  // namespace tss

#endif
