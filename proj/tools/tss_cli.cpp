// tss: command-line front end for the target set selection solver.
//
//   tss solve <graph.tss> <expr.cwe> [--reconstruct] [--json] [--stable] [--max-states N]
//   tss oracle <graph.tss> [--method subsets|orderings] [--json] [--stable]
//   tss expr validate|normalize|eval <expr.cwe>
//   tss expr build naive <graph.tss> | path N | clique N | biclique A B
//   tss selftest [--seed S] [--cases N]
//
// Exit codes: 0 ok, 1 test failure, 2 input or validation error, 3 resource limit.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "tss/report.hpp"
#include "tss/selftest.hpp"

namespace {

enum Exit { kOk = 0, kTestFailure = 1, kInputError = 2, kResourceLimit = 3 };

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw tss::InputError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

tss::Instance load_instance(const std::string& path) {
    try {
        return tss::parse_tss(read_file(path));
    } catch (const tss::ParseError& e) {
        throw tss::InputError(path + ": " + e.what());
    }
}

tss::CwExpr load_expr(const std::string& path) {
    try {
        return tss::parse_expr(read_file(path));
    } catch (const tss::ParseError& e) {
        throw tss::InputError(path + ": " + e.what());
    }
}

void print_report(const tss::RunReport& r, bool json) {
    if (json)
        std::cout << tss::to_json(r).dump(2) << '\n';
    else
        std::cout << tss::to_text(r);
}

std::string labeled_tss(const tss::LabeledGraph& lg) {
    // thresholds are not part of an expression; they are written as 0
    std::string out = tss::write_tss(lg.graph, tss::ThresholdMap(std::vector<int>(lg.graph.vertex_count(), 0)),
                                     "evaluated expression, thresholds set to 0");
    for (tss::Vertex v = 0; v < lg.graph.vertex_count(); ++v)
        out += "c label " + std::to_string(tss::to_external(v)) + " " + lg.label_names[lg.label[v]] + "\n";
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact target set selection over clique-width expressions"};
    app.require_subcommand(1);

    std::string graph_path, expr_path, method = "subsets";
    bool json = false, stable = false, reconstruct = false, inject_fault = false;
    std::size_t max_states = tss::SolverOptions{}.max_states;
    std::uint64_t seed = 1;
    int cases = 50;

    auto* solve = app.add_subcommand("solve", "minimum target set via the clique-width dynamic program");
    solve->add_option("graph", graph_path, ".tss graph with thresholds")->required();
    solve->add_option("expr", expr_path, ".cwe expression building the same graph")->required();
    solve->add_flag("--reconstruct", reconstruct, "also report a minimum target set");
    solve->add_flag("--json", json, "print the report as JSON");
    solve->add_flag("--stable", stable, "report elapsed_ms as 0 for byte-comparable output");
    solve->add_option("--max-states", max_states, "state budget before giving up (exit 3)");

    auto* oracle = app.add_subcommand("oracle", "minimum target set by exhaustive search");
    oracle->add_option("graph", graph_path, ".tss graph with thresholds")->required();
    oracle->add_option("--method", method, "subsets or orderings")
        ->check(CLI::IsMember({"subsets", "orderings"}));
    oracle->add_flag("--json", json, "print the report as JSON");
    oracle->add_flag("--stable", stable, "report elapsed_ms as 0");

    auto* expr = app.add_subcommand("expr", "inspect and build expressions");
    expr->require_subcommand(1);
    auto* validate = expr->add_subcommand("validate", "report joins that add existing edges");
    validate->add_option("expr", expr_path)->required();
    auto* normalize = expr->add_subcommand("normalize", "drop fully redundant joins");
    normalize->add_option("expr", expr_path)->required();
    auto* eval = expr->add_subcommand("eval", "print the generated graph as .tss with labels");
    eval->add_option("expr", expr_path)->required();
    auto* build = expr->add_subcommand("build", "emit a .cwe for a standard family");
    build->require_subcommand(1);
    auto* build_naive = build->add_subcommand("naive", "one label per vertex");
    build_naive->add_option("graph", graph_path)->required();
    int n = 0, a = 0, b = 0;
    auto* build_path = build->add_subcommand("path", "path on N vertices");
    build_path->add_option("n", n)->required();
    auto* build_clique = build->add_subcommand("clique", "complete graph on N vertices");
    build_clique->add_option("n", n)->required();
    auto* build_biclique = build->add_subcommand("biclique", "complete bipartite graph");
    build_biclique->add_option("a", a)->required();
    build_biclique->add_option("b", b)->required();

    auto* selftest = app.add_subcommand("selftest", "cross-check the solver against the oracles");
    selftest->add_option("--seed", seed, "random seed");
    selftest->add_option("--cases", cases, "number of instances")->check(CLI::NonNegativeNumber);
    selftest->add_flag("--inject-fault", inject_fault)->group("");  // harness check

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (*solve) {
            tss::SolveFlags flags{reconstruct, stable, max_states};
            print_report(tss::run_solve(load_instance(graph_path), load_expr(expr_path), flags), json);
        } else if (*oracle) {
            print_report(tss::run_oracle(load_instance(graph_path), method, stable), json);
        } else if (*validate) {
            auto redundant = tss::check_irredundant(load_expr(expr_path));
            if (redundant.empty()) {
                std::cout << "irredundant\n";
                return kOk;
            }
            for (const auto& r : redundant)
                std::cout << "redundant join at " << r.path << ": " << r.existing_edges << " of " << r.possible_edges
                          << " edges already present" << (r.total() ? "" : " (partial)") << '\n';
            return kInputError;
        } else if (*normalize) {
            std::cout << tss::serialize(tss::normalize(load_expr(expr_path)), true) << '\n';
        } else if (*eval) {
            std::cout << labeled_tss(tss::evaluate(load_expr(expr_path)));
        } else if (*build) {
            tss::CwExpr e = *build_naive  ? tss::build_naive(load_instance(graph_path).graph)
                            : *build_path ? tss::build_path(n)
                            : *build_clique
                                ? tss::build_clique(n)
                                : tss::build_complete_bipartite(a, b);
            std::cout << tss::serialize(e, true) << '\n';
        } else if (*selftest) {
            auto report = tss::run_selftest({seed, cases, inject_fault});
            std::cout << report.log << report.cases - report.failures << "/" << report.cases << " cases passed\n";
            return report.passed() ? kOk : kTestFailure;
        }
    } catch (const tss::ResourceError& e) {
        std::cerr << "resource limit: " << e.what() << '\n';
        return kResourceLimit;
    } catch (const tss::InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const tss::NoSolutionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kTestFailure;
    }
    return kOk;
}
