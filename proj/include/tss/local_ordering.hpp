#ifndef TSS_LOCAL_ORDERING_HPP
#define TSS_LOCAL_ORDERING_HPP

#include <algorithm>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "tss/cwexpr.hpp"

namespace tss {

/// A (label, threshold) pair standing in for one early vertex of that label.
struct Tuple {
    LabelId label;
    std::uint8_t thr;

    friend auto operator<=>(const Tuple&, const Tuple&) = default;
};

/// Limited view on an activation order: per label, the earliest vertices in
/// activation order, identified only by label and threshold.
struct LocalOrdering {
    std::vector<Tuple> tuples;

    std::size_t size() const noexcept { return tuples.size(); }
    bool empty() const noexcept { return tuples.empty(); }
    const Tuple& operator[](std::size_t i) const { return tuples[i]; }

    int count(LabelId l) const {
        return static_cast<int>(std::count_if(tuples.begin(), tuples.end(), [l](const Tuple& t) { return t.label == l; }));
    }

    /// 0-based position of the k-th (1-based) tuple with label l, or -1.
    int nth_position(LabelId l, int k) const {
        if (k <= 0) return -1;
        for (std::size_t i = 0; i < tuples.size(); ++i)
            if (tuples[i].label == l && --k == 0) return static_cast<int>(i);
        return -1;
    }

    friend bool operator==(const LocalOrdering&, const LocalOrdering&) = default;
};

/// Activation from outside: credit per position of A and per label.
struct Afo {
    std::vector<std::uint8_t> by_position;
    std::vector<std::uint8_t> by_label;

    static Afo zero(std::size_t positions, std::size_t labels) {
        return Afo{std::vector<std::uint8_t>(positions, 0), std::vector<std::uint8_t>(labels, 0)};
    }

    friend bool operator==(const Afo&, const Afo&) = default;
};

/// Address of a vertex inside a state: a position of A or its label.
struct AfoKey {
    enum class Kind : std::uint8_t { Position, Label };
    Kind kind;
    std::uint32_t index;  ///< 0-based position or LabelId

    static AfoKey position(std::uint32_t i) { return {Kind::Position, i}; }
    static AfoKey label(LabelId l) { return {Kind::Label, l}; }

    friend bool operator==(const AfoKey&, const AfoKey&) = default;
};

inline int afo_at(const Afo& afo, AfoKey key) {
    return key.kind == AfoKey::Kind::Position ? afo.by_position.at(key.index) : afo.by_label.at(key.index);
}

struct State {
    LocalOrdering order;
    Afo afo;

    /// Injective byte encoding: |A|, tuples, position credits, label credits.
    std::string encode() const {
        std::string out;
        out.reserve(1 + order.size() * 4 + afo.by_label.size());
        out.push_back(static_cast<char>(order.size()));
        for (const Tuple& t : order.tuples) {
            out.push_back(static_cast<char>(t.label & 0xFF));
            out.push_back(static_cast<char>(t.label >> 8));
            out.push_back(static_cast<char>(t.thr));
        }
        for (auto v : afo.by_position) out.push_back(static_cast<char>(v));
        for (auto v : afo.by_label) out.push_back(static_cast<char>(v));
        return out;
    }

    friend bool operator==(const State&, const State&) = default;
};

/// True when every label holds exactly tamount tuples at `node`.
inline bool is_complete(const LocalOrdering& a, NodeId node, const NodeStats& stats) {
    std::vector<int> seen(stats.label_count(), 0);
    for (const Tuple& t : a.tuples) ++seen.at(t.label);
    for (LabelId l = 0; l < stats.label_count(); ++l)
        if (seen[l] != stats.tamount(node, l)) return false;
    return true;
}

/// Per label, the tuple thresholds form a sub-multiset of the vertex thresholds
/// of that label in G(node), and no label exceeds its tamount.
inline bool fits_thresholds(const LocalOrdering& a, NodeId node, const NodeStats& stats) {
    const std::size_t bins = static_cast<std::size_t>(stats.t_max()) + 1;
    std::vector<std::uint32_t> used(stats.label_count() * bins, 0);
    std::vector<int> per_label(stats.label_count(), 0);
    for (const Tuple& t : a.tuples) {
        if (t.label >= stats.label_count() || t.thr > stats.t_max()) return false;
        if (++per_label[t.label] > stats.tamount(node, t.label)) return false;
        if (++used[t.label * bins + t.thr] > stats.threshold_count(node, t.label, t.thr)) return false;
    }
    return true;
}

/// Niceness of a complete local ordering to the join of labels alpha and beta at
/// `node`: a (t_max+1)-st tuple of one label must come after the that()-th tuple
/// of the other. Missing tuples satisfy their clause.
inline bool is_nice_local(const LocalOrdering& a, LabelId alpha, LabelId beta, NodeId node, const NodeStats& stats) {
    auto clause = [&](LabelId x, LabelId y) {
        int late = a.nth_position(x, stats.t_max() + 1);
        int early = a.nth_position(y, stats.that(node, y));
        return late < 0 || early < 0 || late > early;
    };
    return clause(alpha, beta) && clause(beta, alpha);
}

/// Credit update for joining alpha and beta: every key gains the number of
/// positions of the opposite label before it (labels count as later than every
/// position), capped at t_max.
inline Afo eta_transform_afo(const LocalOrdering& a, const Afo& afo, LabelId alpha, LabelId beta, int t_max) {
    Afo out = afo;
    int seen_alpha = 0;
    int seen_beta = 0;
    auto bump = [t_max](std::uint8_t& v, int add) { v = static_cast<std::uint8_t>(std::min(t_max, v + add)); };
    for (std::size_t x = 0; x < a.size(); ++x) {
        const LabelId l = a[x].label;
        if (l == alpha) {
            bump(out.by_position[x], seen_beta);
            ++seen_alpha;
        } else if (l == beta) {
            bump(out.by_position[x], seen_alpha);
            ++seen_beta;
        }
    }
    if (alpha < out.by_label.size()) bump(out.by_label[alpha], seen_beta);
    if (beta < out.by_label.size()) bump(out.by_label[beta], seen_alpha);
    return out;
}

}  // namespace tss

#endif
