#ifndef TSS_COMPLETION_HPP
#define TSS_COMPLETION_HPP

#include <bit>
#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "tss/cwexpr.hpp"
#include "tss/local_ordering.hpp"

// State families for the union and relabel transfers. A parent state is mapped
// to possibly incomplete child states, which are then completed by appending,
// per label, the tuples of later vertices that the parent could not see.

namespace tss {

/// Possibly incomplete state. anchor[l] is the number of leading tuples of the
/// ordering that every appended tuple of label l must follow (on top of
/// following the existing tuples of l).
struct PartialState {
    LocalOrdering order;
    Afo afo;
    std::vector<std::uint8_t> anchor;
};

namespace detail {

template <class Visit>
class CompletionWalker {
public:
    CompletionWalker(const PartialState& p, NodeId node, const NodeStats& stats, Visit& visit)
        : p_(p), node_(node), stats_(stats), visit_(visit), labels_(stats.label_count()),
          bins_(static_cast<std::size_t>(stats.t_max()) + 1), need_(labels_, 0), floor_(labels_, 0),
          used_(labels_ * bins_, 0) {}

    void run() {
        if (!fits_thresholds(p_.order, node_, stats_)) return;
        for (LabelId l = 0; l < labels_; ++l) {
            need_[l] = stats_.tamount(node_, l) - p_.order.count(l);
            floor_[l] = l < p_.anchor.size() ? p_.anchor[l] : 0;
        }
        for (std::size_t i = 0; i < p_.order.size(); ++i) {
            const Tuple& t = p_.order[i];
            floor_[t.label] = std::max(floor_[t.label], i + 1);
            ++used_[t.label * bins_ + t.thr];
        }
        out_.order.tuples.reserve(p_.order.size() + 8);
        out_.afo.by_label = p_.afo.by_label;
        step(0);
    }

private:
    void step(std::size_t i) {
        bool done = i == p_.order.size();
        for (LabelId l = 0; l < labels_ && done; ++l) done = need_[l] == 0;
        if (done) {
            visit_(static_cast<const State&>(out_));
            return;
        }
        if (i < p_.order.size()) {
            push(p_.order[i], p_.afo.by_position[i]);
            step(i + 1);
            pop();
        }
        for (LabelId l = 0; l < labels_; ++l) {
            if (need_[l] == 0 || i < floor_[l]) continue;
            for (std::size_t t = 0; t < bins_; ++t) {
                auto& u = used_[l * bins_ + t];
                if (u >= stats_.threshold_count(node_, l, static_cast<int>(t))) continue;
                ++u;
                --need_[l];
                push(Tuple{l, static_cast<std::uint8_t>(t)}, p_.afo.by_label.at(l));
                step(i);
                pop();
                ++need_[l];
                --u;
            }
        }
    }

    void push(Tuple t, std::uint8_t credit) {
        out_.order.tuples.push_back(t);
        out_.afo.by_position.push_back(credit);
    }
    void pop() {
        out_.order.tuples.pop_back();
        out_.afo.by_position.pop_back();
    }

    const PartialState& p_;
    NodeId node_;
    const NodeStats& stats_;
    Visit& visit_;
    std::size_t labels_;
    std::size_t bins_;
    std::vector<int> need_;
    std::vector<std::size_t> floor_;
    std::vector<std::uint32_t> used_;
    State out_;
};

}  // namespace detail

/// Calls visit(const State&) for every complete state of G(node) that completes p.
/// Appended tuples of label l follow every tuple of l in p and the first
/// anchor[l] tuples; their thresholds range over what the class still offers, and
/// their credit is p's label credit. The enumeration order is deterministic.
template <class Visit>
void for_each_completion(const PartialState& p, NodeId node, const NodeStats& stats, Visit&& visit) {
    detail::CompletionWalker<std::remove_reference_t<Visit>> walker(p, node, stats, visit);
    walker.run();
}

inline std::vector<State> enumerate_completions(const PartialState& p, NodeId node, const NodeStats& stats) {
    std::vector<State> out;
    for_each_completion(p, node, stats, [&](const State& s) { out.push_back(s); });
    return out;
}

inline std::vector<State> enumerate_completions(const LocalOrdering& a, const Afo& afo, NodeId node,
                                                const NodeStats& stats) {
    return enumerate_completions(PartialState{a, afo, {}}, node, stats);
}

namespace detail {

/// Number of tuples with parent index <= the last tuple of `label` when the
/// parent already holds t_max+1 tuples of it; later vertices of that class are
/// activated after that tuple. Zero otherwise.
inline std::uint8_t anchor_for(const LocalOrdering& parent, LabelId label, int t_max,
                               const std::vector<bool>* keep) {
    if (parent.count(label) != t_max + 1) return 0;
    int last = parent.nth_position(label, t_max + 1);
    int n = 0;
    for (int j = 0; j <= last; ++j)
        if (!keep || (*keep)[static_cast<std::size_t>(j)]) ++n;
    return static_cast<std::uint8_t>(n);
}

}  // namespace detail

/// Calls visit(const PartialState& left, const PartialState& right, std::uint64_t mask)
/// for every order-preserving assignment of the positions of s.order to the two
/// operands of the union at `node` (bit j of mask set: position j goes right)
/// that keeps each side within its tamount and threshold multiset.
template <class Visit>
void for_each_union_split(const State& s, const IndexedExpr& ix, NodeId node, const NodeStats& stats,
                          bool anchored, Visit&& visit) {
    const ExprNode& n = ix[node];
    if (n.kind != ExprKind::Union) throw InvalidStateError("union split requested on a non-union node");
    const std::size_t m = s.order.size();
    if (m > 64) throw ResourceError("local ordering longer than 64 tuples");
    const std::size_t labels = stats.label_count();
    const std::size_t bins = static_cast<std::size_t>(stats.t_max()) + 1;
    const NodeId side_node[2] = {n.left, n.right};
    std::vector<std::uint32_t> used[2] = {std::vector<std::uint32_t>(labels * bins, 0),
                                          std::vector<std::uint32_t>(labels * bins, 0)};
    std::vector<int> count[2] = {std::vector<int>(labels, 0), std::vector<int>(labels, 0)};
    std::uint64_t mask = 0;

    auto emit = [&] {
        PartialState side[2];
        std::vector<bool> on_side[2] = {std::vector<bool>(m), std::vector<bool>(m)};
        for (std::size_t j = 0; j < m; ++j) {
            const int k = (mask >> j) & 1U;
            on_side[k][j] = true;
            side[k].order.tuples.push_back(s.order[j]);
            side[k].afo.by_position.push_back(s.afo.by_position[j]);
        }
        for (int k = 0; k < 2; ++k) {
            side[k].afo.by_label = s.afo.by_label;
            side[k].anchor.assign(labels, 0);
            if (anchored)
                for (LabelId l = 0; l < labels; ++l)
                    side[k].anchor[l] = detail::anchor_for(s.order, l, stats.t_max(), &on_side[k]);
        }
        visit(static_cast<const PartialState&>(side[0]), static_cast<const PartialState&>(side[1]), mask);
    };

    auto place = [&](auto&& self, std::size_t j) -> void {
        if (j == m) {
            emit();
            return;
        }
        const Tuple& t = s.order[j];
        for (int k = 0; k < 2; ++k) {
            const NodeId side = side_node[k];
            auto& u = used[k][t.label * bins + t.thr];
            if (count[k][t.label] >= stats.tamount(side, t.label)) continue;
            if (u >= stats.threshold_count(side, t.label, t.thr)) continue;
            ++u;
            ++count[k][t.label];
            if (k == 1) mask |= std::uint64_t{1} << j;
            self(self, j + 1);
            mask &= ~(std::uint64_t{1} << j);
            --count[k][t.label];
            --u;
        }
    };
    place(place, 0);
}

/// All pairs of complete child states for a union node.
inline std::vector<std::pair<State, State>> enumerate_union_splits(const State& s, const IndexedExpr& ix, NodeId node,
                                                                   const NodeStats& stats, bool anchored = true) {
    std::vector<std::pair<State, State>> out;
    for_each_union_split(s, ix, node, stats, anchored,
                         [&](const PartialState& l, const PartialState& r, std::uint64_t) {
                             auto ls = enumerate_completions(l, ix[node].left, stats);
                             auto rs = enumerate_completions(r, ix[node].right, stats);
                             for (const auto& a : ls)
                                 for (const auto& b : rs) out.emplace_back(a, b);
                         });
    return out;
}

/// Calls visit(const PartialState&, std::uint64_t mask) for every choice of the
/// target-label positions that carried the source label before the relabel at
/// `node` (bit j of mask: position j is relabeled back), keeping both child
/// classes within their tamount.
template <class Visit>
void for_each_relabel_choice(const State& s, const IndexedExpr& ix, NodeId node, const NodeStats& stats,
                             bool anchored, Visit&& visit) {
    const ExprNode& n = ix[node];
    if (n.kind != ExprKind::Rho) throw InvalidStateError("relabel states requested on a non-relabel node");
    const LabelId from = n.a;
    const LabelId to = n.b;
    const NodeId child = n.left;
    if (s.order.count(from) > 0)
        throw InvalidStateError("state holds tuples of label " + ix.label_name(from) + " above its relabel");
    std::vector<std::size_t> targets;
    for (std::size_t j = 0; j < s.order.size(); ++j)
        if (s.order[j].label == to) targets.push_back(j);
    if (targets.size() > 63) throw ResourceError("too many tuples of one label");

    std::uint8_t anchor = anchored ? detail::anchor_for(s.order, to, stats.t_max(), nullptr) : 0;
    const int cap_from = stats.tamount(child, from);
    const int cap_to = stats.tamount(child, to);
    const std::uint64_t limit = std::uint64_t{1} << targets.size();
    for (std::uint64_t choice = 0; choice < limit; ++choice) {
        const int moved = std::popcount(choice);
        if (moved > cap_from || static_cast<int>(targets.size()) - moved > cap_to) continue;
        PartialState p{s.order, s.afo, std::vector<std::uint8_t>(stats.label_count(), 0)};
        std::uint64_t mask = 0;
        for (std::size_t b = 0; b < targets.size(); ++b)
            if ((choice >> b) & 1U) {
                p.order.tuples[targets[b]].label = from;
                mask |= std::uint64_t{1} << targets[b];
            }
        p.afo.by_label.at(from) = s.afo.by_label.at(to);
        p.anchor[from] = anchor;
        p.anchor[to] = anchor;
        visit(static_cast<const PartialState&>(p), mask);
    }
}

/// Deduplicated complete child states for a relabel node.
inline std::vector<State> enumerate_relabel_states(const State& s, const IndexedExpr& ix, NodeId node,
                                                   const NodeStats& stats, bool anchored = true) {
    std::vector<State> out;
    std::set<std::string> seen;
    for_each_relabel_choice(s, ix, node, stats, anchored, [&](const PartialState& p, std::uint64_t) {
        for_each_completion(p, ix[node].left, stats, [&](const State& c) {
            if (seen.insert(c.encode()).second) out.push_back(c);
        });
    });
    return out;
}

}  // namespace tss

#endif
