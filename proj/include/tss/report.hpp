#ifndef TSS_REPORT_HPP
#define TSS_REPORT_HPP

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tss/cwexpr.hpp"
#include "tss/oracle.hpp"
#include "tss/solver.hpp"
#include "tss/tss_format.hpp"

// Command-level plumbing shared by the CLI and its tests: run reports, graph
// cross-validation and the solve/oracle drivers.

namespace tss {

struct InstanceInfo {
    std::size_t n = 0;
    std::size_t m = 0;
    int t_max = 0;
    std::optional<std::size_t> width;  ///< labels of the expression; none for oracle runs
};

struct RunReport {
    std::optional<std::uint32_t> min_target_size;
    std::optional<std::vector<long long>> target_set;  ///< external ids, ascending
    std::string method;                                ///< dp, oracle-subsets or oracle-orderings
    std::size_t states_expanded = 0;
    long long elapsed_ms = 0;
    InstanceInfo instance;
};

inline nlohmann::ordered_json to_json(const RunReport& r) {
    nlohmann::ordered_json j;
    j["min_target_size"] = r.min_target_size ? nlohmann::ordered_json(*r.min_target_size) : nullptr;
    j["target_set"] = r.target_set ? nlohmann::ordered_json(*r.target_set) : nullptr;
    j["method"] = r.method;
    j["states_expanded"] = r.states_expanded;
    j["elapsed_ms"] = r.elapsed_ms;
    nlohmann::ordered_json inst;
    inst["n"] = r.instance.n;
    inst["m"] = r.instance.m;
    inst["t_max"] = r.instance.t_max;
    inst["width"] = r.instance.width ? nlohmann::ordered_json(*r.instance.width) : nullptr;
    j["instance"] = std::move(inst);
    return j;
}

inline std::string to_text(const RunReport& r) {
    std::string out = "method: " + r.method + "\n";
    out += "min_target_size: " + (r.min_target_size ? std::to_string(*r.min_target_size) : std::string("none")) + "\n";
    if (r.target_set) {
        out += "target_set:";
        for (long long v : *r.target_set) out += " " + std::to_string(v);
        out += "\n";
    }
    out += "states_expanded: " + std::to_string(r.states_expanded) + "\n";
    out += "elapsed_ms: " + std::to_string(r.elapsed_ms) + "\n";
    out += "instance: n=" + std::to_string(r.instance.n) + " m=" + std::to_string(r.instance.m) +
           " t_max=" + std::to_string(r.instance.t_max);
    if (r.instance.width) out += " width=" + std::to_string(*r.instance.width);
    return out + "\n";
}

/// Describes the first difference between the graph file and the evaluated
/// expression, or nothing when they agree.
inline std::optional<std::string> graph_mismatch(const Graph& file, const Graph& expr) {
    if (file.vertex_count() != expr.vertex_count())
        return "graph file has " + std::to_string(file.vertex_count()) + " vertices, expression has " +
               std::to_string(expr.vertex_count());
    const auto a = file.edges();
    const auto b = expr.edges();
    std::size_t i = 0;
    while (i < a.size() && i < b.size() && a[i] == b[i]) ++i;
    auto show = [](Edge e) { return std::to_string(to_external(e.first)) + " " + std::to_string(to_external(e.second)); };
    if (i < a.size() && (i == b.size() || a[i] < b[i])) return "edge " + show(a[i]) + " is missing from the expression";
    if (i < b.size()) return "edge " + show(b[i]) + " is missing from the graph file";
    return std::nullopt;
}

struct SolveFlags {
    bool reconstruct = false;
    bool stable = false;
    std::size_t max_states = SolverOptions{}.max_states;
};

namespace detail {

inline long long elapsed_since(std::chrono::steady_clock::time_point start, bool stable) {
    if (stable) return 0;
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
}

inline std::vector<long long> external_ids(const std::vector<Vertex>& vs) {
    std::vector<long long> out;
    for (Vertex v : vs) out.push_back(to_external(v));
    return out;
}

}  // namespace detail

/// Cross-validates the instance against the expression, drops fully redundant
/// joins and runs the dynamic program. Throws InputError on a mismatch and
/// ResourceError when the state budget runs out.
inline RunReport run_solve(const Instance& inst, const CwExpr& expr, const SolveFlags& flags) {
    const auto start = std::chrono::steady_clock::now();
    const LabeledGraph lg = evaluate(expr);
    if (auto diff = graph_mismatch(inst.graph, lg.graph)) throw InputError("graph/expression mismatch: " + *diff);
    const CwExpr e = normalize(expr);

    SolverOptions options;
    options.max_states = flags.max_states;
    Solver solver(e, inst.thresholds, options);
    RunReport r;
    r.method = "dp";
    if (flags.reconstruct) {
        Solution s = solver.reconstruct();
        r.min_target_size = s.size.value();
        r.target_set = detail::external_ids(s.target_set);
    } else {
        r.min_target_size = solver.solve().value();
    }
    r.states_expanded = solver.states_expanded();
    r.elapsed_ms = detail::elapsed_since(start, flags.stable);
    r.instance = {inst.graph.vertex_count(), inst.graph.edge_count(), inst.thresholds.t_max(),
                  solver.expr().label_count()};
    return r;
}

/// Exhaustive oracle run; `method` is "subsets" or "orderings".
inline RunReport run_oracle(const Instance& inst, const std::string& method, bool stable) {
    const auto start = std::chrono::steady_clock::now();
    RunReport r;
    if (method == "subsets") {
        OracleResult res = brute_force_min_target(inst.graph, inst.thresholds);
        r.method = "oracle-subsets";
        r.min_target_size = static_cast<std::uint32_t>(res.k);
        r.target_set = detail::external_ids(res.witness);
    } else if (method == "orderings") {
        r.method = "oracle-orderings";
        r.min_target_size = static_cast<std::uint32_t>(min_target_via_orderings(inst.graph, inst.thresholds));
    } else {
        throw InputError("unknown oracle method '" + method + "'");
    }
    r.elapsed_ms = detail::elapsed_since(start, stable);
    r.instance = {inst.graph.vertex_count(), inst.graph.edge_count(), inst.thresholds.t_max(), std::nullopt};
    return r;
}

}  // namespace tss

#endif
