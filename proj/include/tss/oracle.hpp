#ifndef TSS_ORACLE_HPP
#define TSS_ORACLE_HPP

#include <algorithm>
#include <deque>
#include <numeric>
#include <optional>
#include <vector>

#include "tss/cwexpr.hpp"
#include "tss/graph.hpp"
#include "tss/local_ordering.hpp"

// Ground-truth semantics used to validate the dynamic program: round-based
// activation, exhaustive minimum target sets, and the ordering utilities
// (condense, deact, niceness, niceness repair).

namespace tss {

/// Least fixpoint of: active <- S + {v : |N(v) & active| >= thr(v)}.
inline std::vector<bool> simulate_activation(const Graph& g, const ThresholdMap& thr, std::span<const Vertex> seeds) {
    const std::size_t n = g.vertex_count();
    if (thr.size() != n) throw InputError("threshold map does not cover the graph");
    std::vector<bool> active(n, false);
    std::vector<int> hits(n, 0);
    std::deque<Vertex> queue;
    auto activate = [&](Vertex v) {
        if (active[v]) return;
        active[v] = true;
        queue.push_back(v);
    };
    for (Vertex s : seeds) {
        g.check_vertex(s);
        activate(s);
    }
    for (Vertex v = 0; v < n; ++v)
        if (thr[v] == 0) activate(v);
    while (!queue.empty()) {
        Vertex u = queue.front();
        queue.pop_front();
        for (Vertex w : g.neighbors(u))
            if (!active[w] && ++hits[w] >= thr[w]) activate(w);
    }
    return active;
}

inline bool is_target_set(const Graph& g, const ThresholdMap& thr, std::span<const Vertex> seeds) {
    auto active = simulate_activation(g, thr, seeds);
    return std::all_of(active.begin(), active.end(), [](bool b) { return b; });
}

struct OracleLimits {
    std::size_t subsets = 20;
    std::size_t orderings = 8;
};

struct OracleResult {
    int k;
    std::vector<Vertex> witness;  ///< ascending
};

/// Smallest target set by exhaustive search, sizes ascending and subsets in
/// lexicographic order within a size; the first hit is returned.
inline OracleResult brute_force_min_target(const Graph& g, const ThresholdMap& thr, OracleLimits limits = {}) {
    const std::size_t n = g.vertex_count();
    if (n > limits.subsets)
        throw ResourceError("subset oracle limited to " + std::to_string(limits.subsets) + " vertices, got " +
                            std::to_string(n));
    for (std::size_t k = 0; k <= n; ++k) {
        std::vector<Vertex> pick(k);
        std::iota(pick.begin(), pick.end(), Vertex{0});
        while (true) {
            if (is_target_set(g, thr, pick)) return {static_cast<int>(k), pick};
            // next k-combination of [0, n) in lexicographic order
            std::size_t i = k;
            while (i > 0 && pick[i - 1] == n - k + i - 1) --i;
            if (i == 0) break;
            ++pick[i - 1];
            for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
        }
    }
    return {static_cast<int>(n), {}};  // unreachable: V itself is a target set
}

/// Minimum over all permutations of the deficient-set size.
inline int min_target_via_orderings(const Graph& g, const ThresholdMap& thr, OracleLimits limits = {}) {
    const std::size_t n = g.vertex_count();
    if (n > limits.orderings)
        throw ResourceError("ordering oracle limited to " + std::to_string(limits.orderings) + " vertices, got " +
                            std::to_string(n));
    std::vector<Vertex> seq(n);
    std::iota(seq.begin(), seq.end(), Vertex{0});
    int best = static_cast<int>(n);
    do {
        best = std::min(best, static_cast<int>(deficiency(g, thr, GlobalOrdering(seq)).size()));
    } while (best > 0 && std::next_permutation(seq.begin(), seq.end()));
    return best;
}

/// Vertices kept by condense, in activation order, with the kept count per label.
struct CondensedList {
    std::vector<Vertex> vertices;
    std::vector<int> kept;
};

/// Sorts each class by sigma in place.
inline void sort_classes(std::vector<std::vector<Vertex>>& classes, const GlobalOrdering& sigma) {
    for (auto& c : classes)
        std::sort(c.begin(), c.end(), [&](Vertex x, Vertex y) { return sigma.position(x) < sigma.position(y); });
}

/// Keeps, per label, the sigma-first caps[l] vertices of that class, merged in sigma order.
inline CondensedList condense(const GlobalOrdering& sigma, std::vector<std::vector<Vertex>> classes,
                              std::span<const int> caps) {
    if (caps.size() != classes.size()) throw InputError("one cap per label required");
    sort_classes(classes, sigma);
    CondensedList out;
    for (std::size_t l = 0; l < classes.size(); ++l) {
        if (caps[l] < 0 || static_cast<std::size_t>(caps[l]) > classes[l].size())
            throw InputError("cap exceeds class size for label " + std::to_string(l));
        out.vertices.insert(out.vertices.end(), classes[l].begin(), classes[l].begin() + caps[l]);
        out.kept.push_back(caps[l]);
    }
    std::sort(out.vertices.begin(), out.vertices.end(),
              [&](Vertex x, Vertex y) { return sigma.position(x) < sigma.position(y); });
    return out;
}

/// condense(sigma) for G(node): caps are the tamount values.
inline CondensedList condense_at(const GlobalOrdering& sigma, const IndexedExpr& ix, NodeId node,
                                 const NodeStats& stats) {
    std::vector<int> caps(ix.label_count());
    for (LabelId l = 0; l < caps.size(); ++l) caps[l] = stats.tamount(node, l);
    return condense(sigma, ix.classes_at(node), caps);
}

/// Tuples of a condensed list.
inline LocalOrdering tuples_of(const CondensedList& c, const IndexedExpr& ix, NodeId node, const ThresholdMap& thr) {
    LocalOrdering a;
    for (Vertex v : c.vertices) a.tuples.push_back({ix.label_at(v, node), static_cast<std::uint8_t>(thr[v])});
    return a;
}

/// Position of v in condense(sigma, A), or its label if v is not kept.
inline AfoKey deact(const CondensedList& c, Vertex v, LabelId label_of_v) {
    auto it = std::find(c.vertices.begin(), c.vertices.end(), v);
    if (it != c.vertices.end()) return AfoKey::position(static_cast<std::uint32_t>(it - c.vertices.begin()));
    return AfoKey::label(label_of_v);
}

namespace detail {

/// Eta nodes in pre-order (outermost first, left subtree before right).
inline std::vector<NodeId> eta_nodes_preorder(const IndexedExpr& ix) {
    std::vector<NodeId> out;
    std::vector<NodeId> stack{ix.root()};
    while (!stack.empty()) {
        NodeId i = stack.back();
        stack.pop_back();
        const ExprNode& n = ix[i];
        if (n.kind == ExprKind::Eta) out.push_back(i);
        if (n.kind == ExprKind::Union) {
            stack.push_back(n.right);
            stack.push_back(n.left);
        } else if (n.kind != ExprKind::Vertex) {
            stack.push_back(n.left);
        }
    }
    return out;
}

/// 1-based k-th member of a sigma-sorted class, if present.
inline std::optional<Vertex> kth(const std::vector<Vertex>& cls, int k) {
    if (k < 1 || static_cast<std::size_t>(k) > cls.size()) return std::nullopt;
    return cls[static_cast<std::size_t>(k) - 1];
}

}  // namespace detail

/// Niceness of sigma to an eta node: within G(node), the (t_max+1)-st vertex of
/// each joined label comes after the that()-th vertex of the other. Non-eta nodes
/// are vacuously nice.
inline bool is_nice_global(const GlobalOrdering& sigma, const IndexedExpr& ix, NodeId node, int t_max) {
    const ExprNode& n = ix[node];
    if (n.kind != ExprKind::Eta) return true;
    auto classes = ix.classes_at(node);
    sort_classes(classes, sigma);
    auto clause = [&](LabelId x, LabelId y) {
        auto late = detail::kth(classes[x], t_max + 1);
        auto early = detail::kth(classes[y], std::min<int>(t_max, static_cast<int>(classes[y].size())));
        return !late || !early || sigma.position(*late) > sigma.position(*early);
    };
    return clause(n.a, n.b) && clause(n.b, n.a);
}

inline bool is_nice_everywhere(const GlobalOrdering& sigma, const IndexedExpr& ix, int t_max) {
    for (NodeId i = 0; i < ix.size(); ++i)
        if (!is_nice_global(sigma, ix, i, t_max)) return false;
    return true;
}

/// Repairs sigma so it is nice to every eta node, visiting them outermost first.
/// On a violation at position i, the not-yet-activated members among the first
/// that() vertices of the other label move to positions i, i+1, ... and every
/// later vertex is delayed. The deficient set never grows.
inline GlobalOrdering niceify(const GlobalOrdering& sigma, const IndexedExpr& ix, int t_max) {
    std::vector<Vertex> seq(sigma.sequence().begin(), sigma.sequence().end());
    for (NodeId node : detail::eta_nodes_preorder(ix)) {
        const ExprNode& n = ix[node];
        bool changed = true;
        while (changed) {
            changed = false;
            GlobalOrdering cur(seq);
            auto classes = ix.classes_at(node);
            sort_classes(classes, cur);
            for (auto [x, y] : {std::pair{n.a, n.b}, std::pair{n.b, n.a}}) {
                auto late = detail::kth(classes[x], t_max + 1);
                const int that_y = std::min<int>(t_max, static_cast<int>(classes[y].size()));
                auto early = detail::kth(classes[y], that_y);
                if (!late || !early || cur.position(*late) > cur.position(*early)) continue;
                const auto i = cur.position(*late);
                std::vector<Vertex> movers;
                for (int k = 1; k <= that_y; ++k)
                    if (cur.position(classes[y][k - 1]) > i) movers.push_back(classes[y][k - 1]);
                std::vector<Vertex> next(seq.begin(), seq.begin() + i);
                next.insert(next.end(), movers.begin(), movers.end());
                for (std::size_t p = i; p < seq.size(); ++p)
                    if (std::find(movers.begin(), movers.end(), seq[p]) == movers.end()) next.push_back(seq[p]);
                seq = std::move(next);
                changed = true;
                break;
            }
        }
    }
    return GlobalOrdering(std::move(seq));
}

/// Earlier vertices across the joined pair: for v of label alpha, the number of
/// sigma-earlier beta vertices in G(node), and symmetrically.
inline int adde(const GlobalOrdering& sigma, const IndexedExpr& ix, NodeId node, Vertex v) {
    const ExprNode& n = ix[node];
    if (n.kind != ExprKind::Eta) return 0;
    const LabelId lv = ix.label_at(v, node);
    LabelId other;
    if (lv == n.a) other = n.b;
    else if (lv == n.b) other = n.a;
    else return 0;
    const auto classes = ix.classes_at(node);
    int count = 0;
    for (Vertex u : classes[other])
        if (sigma.position(u) < sigma.position(v)) ++count;
    return count;
}

}  // namespace tss

#endif
