#ifndef TSS_SOLVER_HPP
#define TSS_SOLVER_HPP

#include <algorithm>
#include <compare>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "tss/completion.hpp"
#include "tss/cwexpr.hpp"
#include "tss/errors.hpp"
#include "tss/local_ordering.hpp"

namespace tss {

/// Target-set size with an absorbing infinity.
class Cost {
public:
    constexpr Cost() = default;
    constexpr explicit Cost(std::uint32_t v) : value_(v), finite_(true) {}

    static constexpr Cost infinite() {
        Cost c;
        c.finite_ = false;
        return c;
    }

    constexpr bool is_finite() const noexcept { return finite_; }
    std::uint32_t value() const {
        if (!finite_) throw NoSolutionError("cost is infinite");
        return value_;
    }

    friend constexpr Cost operator+(Cost a, Cost b) {
        if (!a.finite_ || !b.finite_) return infinite();
        return Cost(a.value_ + b.value_);
    }
    friend constexpr bool operator==(Cost a, Cost b) {
        return a.finite_ == b.finite_ && (!a.finite_ || a.value_ == b.value_);
    }
    friend constexpr std::strong_ordering operator<=>(Cost a, Cost b) {
        if (a.finite_ != b.finite_) return a.finite_ ? std::strong_ordering::less : std::strong_ordering::greater;
        if (!a.finite_) return std::strong_ordering::equal;
        return a.value_ <=> b.value_;
    }

    std::string to_string() const { return finite_ ? std::to_string(value_) : "inf"; }

private:
    std::uint32_t value_ = 0;
    bool finite_ = true;
};

struct SolverOptions {
    std::size_t max_states = 50'000'000;
    bool memoize = true;
    /// Appended tuples follow the parent's last tuple of their class (see README).
    bool anchored_completions = true;
    /// Test hook: recurse into non-nice orderings at eta nodes instead of discarding them.
    bool explore_non_nice = false;
};

struct Solution {
    Cost size;
    std::vector<Vertex> target_set;  ///< ascending
};

/// Dynamic program over an irredundant clique-width expression.
///
/// A state of a subexpression is a complete local ordering plus the activation
/// from outside; its value is the least number of target vertices any nice,
/// extending activation order needs. Values are computed top-down on demand and
/// memoized per node, both for complete states and for the incomplete states
/// that union and relabel hand to their children.
class Solver {
public:
    Solver(const CwExpr& e, const ThresholdMap& thr, SolverOptions options = {})
        : ix_(e), thr_(thr), stats_(ix_, thr), options_(options),
          complete_memo_(ix_.size()), partial_memo_(ix_.size()) {
        if (thr.size() != ix_.vertex_count())
            throw InputError("threshold map has " + std::to_string(thr.size()) + " vertices, expression has " +
                             std::to_string(ix_.vertex_count()));
        if (thr.t_max() > 0xFF) throw InputError("t_max above 255 is not supported");
        auto redundant = check_irredundant(e);
        if (!redundant.empty())
            throw UnsupportedExpression("expression is not irredundant; first redundant join at " +
                                        redundant.front().path);
    }

    const IndexedExpr& expr() const noexcept { return ix_; }
    const NodeStats& stats() const noexcept { return stats_; }
    int t_max() const noexcept { return thr_.t_max(); }
    std::size_t states_expanded() const noexcept { return states_; }

    /// Minimum target-set size: the best complete ordering of G(root) with zero credit.
    Cost solve() { return solve_partial(ix_.root(), root_partial()); }

    /// Minimum target set, read back from the argmin choices in the memo.
    Solution reconstruct() {
        if (!options_.memoize) throw InvalidStateError("reconstruction needs the memo");
        Cost k = solve();
        if (!k.is_finite()) throw NoSolutionError("no finite target set");
        Solution out{k, {}};
        collect_partial(ix_.root(), root_partial(), out.target_set);
        std::sort(out.target_set.begin(), out.target_set.end());
        return out;
    }

    /// Value of a complete state at `node`.
    Cost solve_node(NodeId node, const State& state) {
        State s = state;
        normalize(node, s.order, s.afo);
        std::string key;
        if (options_.memoize) {
            key = s.encode();
            auto& memo = complete_memo_[node];
            if (auto it = memo.find(key); it != memo.end()) return it->second.cost;
        }
        charge(node);
        Entry e = compute_complete(node, s);
        if (options_.memoize) complete_memo_[node].emplace(std::move(key), e);
        return e.cost;
    }

    /// Minimum over all completions of a possibly incomplete state at `node`.
    Cost solve_partial(NodeId node, const PartialState& partial) {
        PartialState p = partial;
        normalize(node, p.order, p.afo);
        effective_anchors(node, p);
        std::string key;
        if (options_.memoize) {
            key = State{p.order, p.afo}.encode();
            key.append(p.anchor.begin(), p.anchor.end());
            auto& memo = partial_memo_[node];
            if (auto it = memo.find(key); it != memo.end()) return it->second.cost;
        }
        charge(node);
        Entry best{Cost::infinite(), 0};
        std::uint64_t ordinal = 0;
        for_each_completion(p, node, stats_, [&](const State& c) {
            Cost v = solve_node(node, c);
            if (v < best.cost) best = {v, ordinal};
            ++ordinal;
        });
        if (options_.memoize) partial_memo_[node].emplace(std::move(key), best);
        return best.cost;
    }

private:
    struct Entry {
        Cost cost;
        std::uint64_t choice;
    };

    PartialState root_partial() const {
        return PartialState{{}, Afo::zero(0, ix_.label_count()), std::vector<std::uint8_t>(ix_.label_count(), 0)};
    }

    void charge(NodeId node) {
        if (states_ >= options_.max_states)
            throw ResourceError("state budget of " + std::to_string(options_.max_states) + " exhausted at node " +
                                ix_.path(node));
        ++states_;
    }

    /// Credits only matter up to the threshold they are compared against: a
    /// position is capped at its tuple's threshold, a label at the largest
    /// threshold in its class. Labels whose class is fully listed carry no credit.
    void normalize(NodeId node, const LocalOrdering& order, Afo& afo) const {
        for (std::size_t x = 0; x < order.size(); ++x)
            afo.by_position[x] = std::min(afo.by_position[x], order[x].thr);
        for (LabelId l = 0; l < afo.by_label.size(); ++l) {
            if (static_cast<std::uint32_t>(order.count(l)) >= stats_.count(node, l))
                afo.by_label[l] = 0;
            else
                afo.by_label[l] =
                    std::min<std::uint8_t>(afo.by_label[l], static_cast<std::uint8_t>(stats_.max_threshold(node, l)));
        }
    }

    /// Anchors only constrain labels that still need tuples, and never lie before
    /// the label's own last tuple.
    void effective_anchors(NodeId node, PartialState& p) const {
        p.anchor.resize(ix_.label_count(), 0);
        for (LabelId l = 0; l < ix_.label_count(); ++l) {
            const int have = p.order.count(l);
            if (have >= stats_.tamount(node, l)) {
                p.anchor[l] = 0;
                continue;
            }
            const int own = have == 0 ? 0 : p.order.nth_position(l, have) + 1;
            p.anchor[l] = static_cast<std::uint8_t>(std::max<int>(p.anchor[l], own));
        }
    }

    Entry compute_complete(NodeId node, const State& s) {
        if (!fits_thresholds(s.order, node, stats_) || !is_complete(s.order, node, stats_))
            return {Cost::infinite(), 0};
        const ExprNode& n = ix_[node];
        switch (n.kind) {
            case ExprKind::Vertex: {
                const int thr = thr_[n.vertex];
                if (s.order.size() != 1 || s.order[0] != Tuple{n.a, static_cast<std::uint8_t>(thr)})
                    return {Cost::infinite(), 0};
                return {Cost(s.afo.by_position[0] >= thr ? 0 : 1), 0};
            }
            case ExprKind::Eta: {
                if (!options_.explore_non_nice && !is_nice_local(s.order, n.a, n.b, node, stats_))
                    return {Cost::infinite(), 0};
                return {solve_node(n.left, State{s.order, eta_transform_afo(s.order, s.afo, n.a, n.b, t_max())}), 0};
            }
            case ExprKind::Union: {
                Entry best{Cost::infinite(), 0};
                for_each_union_split(s, ix_, node, stats_, options_.anchored_completions,
                                     [&](const PartialState& l, const PartialState& r, std::uint64_t mask) {
                                         Cost left = solve_partial(n.left, l);
                                         if (!(left < best.cost)) return;
                                         Cost total = left + solve_partial(n.right, r);
                                         if (total < best.cost) best = {total, mask};
                                     });
                return best;
            }
            case ExprKind::Rho: {
                Entry best{Cost::infinite(), 0};
                for_each_relabel_choice(s, ix_, node, stats_, options_.anchored_completions,
                                        [&](const PartialState& p, std::uint64_t mask) {
                                            Cost v = solve_partial(n.left, p);
                                            if (v < best.cost) best = {v, mask};
                                        });
                return best;
            }
        }
        return {Cost::infinite(), 0};
    }

    const Entry& entry_complete(NodeId node, const State& s) {
        solve_node(node, s);
        return complete_memo_[node].at(s.encode());
    }

    void collect_complete(NodeId node, State s, std::vector<Vertex>& out) {
        normalize(node, s.order, s.afo);
        const Entry& e = entry_complete(node, s);
        const ExprNode& n = ix_[node];
        switch (n.kind) {
            case ExprKind::Vertex:
                if (e.cost == Cost(1)) out.push_back(n.vertex);
                return;
            case ExprKind::Eta:
                collect_complete(n.left, State{s.order, eta_transform_afo(s.order, s.afo, n.a, n.b, t_max())}, out);
                return;
            case ExprKind::Union: {
                const std::uint64_t choice = e.choice;
                for_each_union_split(s, ix_, node, stats_, options_.anchored_completions,
                                     [&](const PartialState& l, const PartialState& r, std::uint64_t mask) {
                                         if (mask != choice) return;
                                         collect_partial(n.left, l, out);
                                         collect_partial(n.right, r, out);
                                     });
                return;
            }
            case ExprKind::Rho: {
                const std::uint64_t choice = e.choice;
                for_each_relabel_choice(s, ix_, node, stats_, options_.anchored_completions,
                                        [&](const PartialState& p, std::uint64_t mask) {
                                            if (mask == choice) collect_partial(n.left, p, out);
                                        });
                return;
            }
        }
    }

    void collect_partial(NodeId node, PartialState p, std::vector<Vertex>& out) {
        normalize(node, p.order, p.afo);
        effective_anchors(node, p);
        solve_partial(node, p);
        std::string key = State{p.order, p.afo}.encode();
        key.append(p.anchor.begin(), p.anchor.end());
        const std::uint64_t choice = partial_memo_[node].at(key).choice;
        std::uint64_t ordinal = 0;
        bool found = false;
        for_each_completion(p, node, stats_, [&](const State& c) {
            if (!found && ordinal == choice) {
                found = true;
                collect_complete(node, c, out);
            }
            ++ordinal;
        });
    }

    IndexedExpr ix_;
    ThresholdMap thr_;
    NodeStats stats_;
    SolverOptions options_;
    std::vector<std::unordered_map<std::string, Entry>> complete_memo_;
    std::vector<std::unordered_map<std::string, Entry>> partial_memo_;
    std::size_t states_ = 0;
};

/// Convenience wrapper: minimum target-set size of G(e).
inline Cost solve(const CwExpr& e, const ThresholdMap& thr, SolverOptions options = {}) {
    return Solver(e, thr, options).solve();
}

inline Solution reconstruct_target_set(const CwExpr& e, const ThresholdMap& thr, SolverOptions options = {}) {
    return Solver(e, thr, options).reconstruct();
}

}  // namespace tss

#endif
