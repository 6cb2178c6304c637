#ifndef TSS_SELFTEST_HPP
#define TSS_SELFTEST_HPP

#include <algorithm>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tss/corpus.hpp"
#include "tss/oracle.hpp"
#include "tss/solver.hpp"
#include "tss/tss_format.hpp"

namespace tss {

/// Checks, at eta node `node`, that for every vertex v of G(node)
///   min(t_max, afo(deact(v)) + adde(v)) == (eta afo)(deact(v))
/// where A is the tuple list of condense(sigma) at the node. Returns the number
/// of vertices where the two sides differ.
inline int eta_identity_violations(const IndexedExpr& ix, const NodeStats& stats, const ThresholdMap& thr,
                                   const GlobalOrdering& sigma, NodeId node, const Afo& afo) {
    const ExprNode& n = ix[node];
    if (n.kind != ExprKind::Eta) return 0;
    const CondensedList c = condense_at(sigma, ix, node, stats);
    const LocalOrdering a = tuples_of(c, ix, node, thr);
    const Afo moved = eta_transform_afo(a, afo, n.a, n.b, stats.t_max());
    int bad = 0;
    for (Vertex v : ix.subtree_vertices(node)) {
        const AfoKey key = deact(c, v, ix.label_at(v, node));
        const int lhs = std::min(stats.t_max(), afo_at(afo, key) + adde(sigma, ix, node, v));
        if (lhs != afo_at(moved, key)) ++bad;
    }
    return bad;
}

inline Afo random_afo(std::mt19937_64& rng, std::size_t positions, std::size_t labels, int t_max) {
    Afo afo = Afo::zero(positions, labels);
    for (auto& x : afo.by_position) x = static_cast<std::uint8_t>(uniform(rng, 0, t_max));
    for (auto& x : afo.by_label) x = static_cast<std::uint8_t>(uniform(rng, 0, t_max));
    return afo;
}

struct SelftestOptions {
    std::uint64_t seed = 1;
    int cases = 50;
    /// Harness check: report every DP value off by one so mismatches surface.
    bool inject_fault = false;
};

struct SelftestReport {
    int cases = 0;
    int failures = 0;
    std::string log;  ///< one line per case plus counterexample dumps

    bool passed() const noexcept { return failures == 0; }
};

/// Generates instance number i of the selftest corpus.
inline CorpusCase selftest_case(std::mt19937_64& rng, int i) {
    const int t_max = uniform(rng, 1, 2);
    switch (i % 5) {
        case 0: {
            int n = uniform(rng, 1, 5);
            Graph g = random_graph(rng, n, 0.5);
            return {"naive-n" + std::to_string(n), build_naive(g), random_thresholds(rng, g.vertex_count(), t_max)};
        }
        case 1: {
            int n = uniform(rng, 1, 8);
            return {"path-" + std::to_string(n), build_path(n), random_thresholds(rng, static_cast<std::size_t>(n), t_max)};
        }
        case 2: {
            int n = uniform(rng, 1, 6);
            return {"clique-" + std::to_string(n), build_clique(n),
                    random_thresholds(rng, static_cast<std::size_t>(n), t_max)};
        }
        case 3: {
            int a = uniform(rng, 1, 3), b = uniform(rng, 1, 3);
            return {"biclique-" + std::to_string(a) + "x" + std::to_string(b), build_complete_bipartite(a, b),
                    random_thresholds(rng, static_cast<std::size_t>(a + b), t_max)};
        }
        default: {
            int n = uniform(rng, 1, 7);
            int labels = uniform(rng, 1, 4);
            return {"random-n" + std::to_string(n) + "-l" + std::to_string(labels),
                    random_expression(rng, n, labels, 3), random_thresholds(rng, static_cast<std::size_t>(n), t_max)};
        }
    }
}

/// Cross-checks the dynamic program against the exhaustive oracles, and the
/// niceness repair and the eta credit identity on random orderings.
inline SelftestReport run_selftest(const SelftestOptions& options) {
    std::mt19937_64 rng(options.seed);
    SelftestReport report;
    std::ostringstream log;
    for (int i = 0; i < options.cases; ++i) {
        CorpusCase c = selftest_case(rng, i);
        const LabeledGraph lg = evaluate(c.expr);
        std::vector<std::string> problems;

        Solver solver(c.expr, c.thresholds);
        Solution sol = solver.reconstruct();
        Cost dp = options.inject_fault ? sol.size + Cost(1) : sol.size;
        const OracleResult oracle = brute_force_min_target(lg.graph, c.thresholds);
        if (!(dp == Cost(static_cast<std::uint32_t>(oracle.k))))
            problems.push_back("dp " + dp.to_string() + " != oracle " + std::to_string(oracle.k));
        if (sol.target_set.size() != sol.size.value() || !is_target_set(lg.graph, c.thresholds, sol.target_set))
            problems.push_back("reconstructed set is not a minimum target set");
        if (lg.graph.vertex_count() <= 6) {
            int by_orderings = min_target_via_orderings(lg.graph, c.thresholds);
            if (by_orderings != oracle.k)
                problems.push_back("ordering oracle " + std::to_string(by_orderings) + " != subset oracle " +
                                   std::to_string(oracle.k));
        }

        const IndexedExpr& ix = solver.expr();
        const GlobalOrdering sigma = random_ordering(rng, lg.graph.vertex_count());
        const GlobalOrdering nice = niceify(sigma, ix, c.thresholds.t_max());
        if (!is_nice_everywhere(nice, ix, c.thresholds.t_max())) problems.push_back("niceify output is not nice");
        auto before = deficiency(lg.graph, c.thresholds, sigma);
        auto after = deficiency(lg.graph, c.thresholds, nice);
        if (!std::includes(before.begin(), before.end(), after.begin(), after.end()))
            problems.push_back("niceify grew the deficient set");
        for (NodeId node = 0; node < ix.size(); ++node) {
            if (ix[node].kind != ExprKind::Eta) continue;
            const std::size_t positions = condense_at(nice, ix, node, solver.stats()).vertices.size();
            Afo afo = random_afo(rng, positions, ix.label_count(), c.thresholds.t_max());
            if (int bad = eta_identity_violations(ix, solver.stats(), c.thresholds, nice, node, afo); bad > 0)
                problems.push_back("eta credit identity fails for " + std::to_string(bad) + " vertices at " +
                                   ix.path(node));
        }

        ++report.cases;
        log << "case " << i << " " << c.name << ": " << (problems.empty() ? "ok" : "FAIL") << '\n';
        if (!problems.empty()) {
            ++report.failures;
            for (const auto& p : problems) log << "  " << p << '\n';
            log << "--- counterexample .tss ---\n"
                << write_tss(lg.graph, c.thresholds, "selftest case " + std::to_string(i))
                << "--- counterexample .cwe ---\n"
                << serialize(c.expr, true) << '\n'
                << "--- end counterexample ---\n";
        }
    }
    report.log = log.str();
    return report;
}

}  // namespace tss

#endif
