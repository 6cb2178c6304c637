#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "fixtures.hpp"
#include "tss/report.hpp"

using namespace tss;
using tss::testing::data_path;

namespace {

struct CliRun {
    int code;
    std::string out;
};

CliRun run_cli(const std::string& args) {
    std::string cmd = std::string(TSS_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {-1, {}};
    std::string out;
    char buf[4096];
    while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
    int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string scratch(const std::string& name, const std::string& content) {
    std::string path = std::string(TSS_SCRATCH_DIR) + "/" + name;
    std::ofstream(path) << content;
    return path;
}

std::string golden_args() { return data_path("golden.tss") + " " + data_path("golden.cwe"); }

}  // namespace

// --- .tss format ---------------------------------------------------------------

TEST(TssFormat, RoundTrip) {
    auto inst = tss::testing::golden_instance();
    auto back = parse_tss(write_tss(inst.graph, inst.thresholds, "again"));
    EXPECT_EQ(back.graph, inst.graph);
    EXPECT_EQ(back.thresholds, inst.thresholds);
    EXPECT_EQ(inst.thresholds.t_max(), 2);
}

TEST(TssFormat, Errors) {
    EXPECT_THROW(parse_tss("n 1 1\n"), ParseError);
    EXPECT_THROW(parse_tss("p tss 2 1\nn 1 1\nn 2 1\ne 1 1\n"), ParseError);
    EXPECT_THROW(parse_tss("p tss 2 1\nn 1 1\ne 1 2\n"), InputError);
    EXPECT_THROW(parse_tss("p tss 2 2\nn 1 1\nn 2 1\ne 1 2\ne 2 1\n"), InputError);
    EXPECT_THROW(parse_tss("p tss 1 0\nn 1 1\nx\n"), ParseError);
    try {
        parse_tss("c hi\np tss 2 0\nn 1 1\nn 3 1\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 4);
    }
}

// --- reports ---------------------------------------------------------------------

TEST(Report, KeysInFixedOrder) {
    RunReport r;
    r.min_target_size = 1;
    r.target_set = std::vector<long long>{1};
    r.method = "dp";
    r.states_expanded = 5;
    r.instance = {11, 22, 2, 3};
    auto j = to_json(r);
    std::vector<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
    EXPECT_EQ(keys, (std::vector<std::string>{"min_target_size", "target_set", "method", "states_expanded",
                                              "elapsed_ms", "instance"}));
    EXPECT_EQ(j["instance"].dump(), R"({"n":11,"m":22,"t_max":2,"width":3})");
}

TEST(Report, GraphMismatchNamesTheFirstEdge) {
    Graph a(3), b(3);
    a.add_edge(0, 1);
    a.add_edge(1, 2);
    b.add_edge(0, 1);
    EXPECT_EQ(graph_mismatch(a, b), "edge 2 3 is missing from the expression");
    EXPECT_EQ(graph_mismatch(b, a), "edge 2 3 is missing from the graph file");
    EXPECT_FALSE(graph_mismatch(a, a));
    EXPECT_TRUE(graph_mismatch(Graph(2), Graph(3)));
}

TEST(Report, SolveWitnessMatchesSize) {
    RunReport r = run_solve(tss::testing::golden_instance(), tss::testing::golden_expr(), {true, true, 50'000'000});
    EXPECT_EQ(r.min_target_size, 1U);
    ASSERT_TRUE(r.target_set);
    EXPECT_EQ(r.target_set->size(), 1U);
    EXPECT_EQ(r.elapsed_ms, 0);
    EXPECT_EQ(r.instance.width, 3U);
}

// --- the binary ----------------------------------------------------------------

TEST(Cli, SolveGolden) {
    CliRun r = run_cli("solve " + golden_args() + " --json --reconstruct --stable");
    ASSERT_EQ(r.code, 0) << r.out;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["min_target_size"], 1);
    EXPECT_EQ(j["target_set"].size(), 1U);
    EXPECT_EQ(j["method"], "dp");
    EXPECT_EQ(j["elapsed_ms"], 0);
    EXPECT_EQ(j["instance"]["n"], 11);
    EXPECT_EQ(j["instance"]["m"], 22);
}

TEST(Cli, SolveRejectsMismatchedExpression) {
    auto g = scratch("extra_edge.tss", "p tss 3 2\nn 1 1\nn 2 1\nn 3 1\ne 1 2\ne 2 3\n");
    auto e = scratch("missing_edge.cwe", "(eta a b (u (v 1 a) (u (v 2 b) (v 3 c))))");
    CliRun r = run_cli("solve " + g + " " + e);
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("edge 2 3"), std::string::npos) << r.out;
}

TEST(Cli, SolveStateBudget) {
    CliRun r = run_cli("solve " + golden_args() + " --max-states 10");
    EXPECT_EQ(r.code, 3) << r.out;
}

TEST(Cli, SolveReportsParseErrors) {
    auto e = scratch("broken.cwe", "(u (v 1 a)\n (v 2 b)");
    CliRun r = run_cli("solve " + data_path("golden.tss") + " " + e);
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("line"), std::string::npos) << r.out;
}

TEST(Cli, OracleGolden) {
    CliRun r = run_cli("oracle " + data_path("golden.tss") + " --method subsets --json");
    ASSERT_EQ(r.code, 0) << r.out;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["min_target_size"], 1);
    EXPECT_EQ(j["target_set"], nlohmann::json::array({1}));
    EXPECT_EQ(j["method"], "oracle-subsets");
}

TEST(Cli, OracleFourCycle) {
    auto g = scratch("c4.tss", "p tss 4 4\nn 1 2\nn 2 2\nn 3 2\nn 4 2\ne 1 2\ne 2 3\ne 3 4\ne 4 1\n");
    CliRun r = run_cli("oracle " + g + " --json");
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_EQ(nlohmann::json::parse(r.out)["min_target_size"], 2);
}

TEST(Cli, OracleOrderingLimit) {
    std::string text = "p tss 12 0\n";
    for (int i = 1; i <= 12; ++i) text += "n " + std::to_string(i) + " 1\n";
    auto g = scratch("twelve.tss", text);
    EXPECT_EQ(run_cli("oracle " + g + " --method orderings").code, 3);
}

TEST(Cli, ExprValidate) {
    CliRun r = run_cli("expr validate " + data_path("golden.cwe"));
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "irredundant\n");
    auto e = scratch("redundant.cwe", "(eta a b (eta a b (u (v 1 a) (v 2 b))))");
    CliRun bad = run_cli("expr validate " + e);
    EXPECT_EQ(bad.code, 2);
    EXPECT_NE(bad.out.find("redundant join at root"), std::string::npos) << bad.out;
}

TEST(Cli, ExprNormalize) {
    auto e = scratch("redundant2.cwe", "(eta a b (eta a b (u (v 1 a) (v 2 b))))");
    CliRun r = run_cli("expr normalize " + e);
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(parse_expr(r.out), parse_expr("(eta a b (u (v 1 a) (v 2 b)))"));
}

TEST(Cli, BuildPathEvaluatesToP5) {
    CliRun r = run_cli("expr build path 5");
    ASSERT_EQ(r.code, 0);
    Graph p5(5);
    for (Vertex i = 0; i + 1 < 5; ++i) p5.add_edge(i, i + 1);
    EXPECT_EQ(evaluate(parse_expr(r.out)).graph, p5);
}

TEST(Cli, EvalRoundTripsBuilderOutput) {
    for (std::string family : {"path 4", "clique 4", "biclique 2 3"}) {
        CliRun built = run_cli("expr build " + family);
        ASSERT_EQ(built.code, 0);
        auto file = scratch("built.cwe", built.out);
        CliRun ev = run_cli("expr eval " + file);
        ASSERT_EQ(ev.code, 0);
        EXPECT_EQ(parse_tss(ev.out).graph, evaluate(parse_expr(built.out)).graph) << family;
        EXPECT_NE(ev.out.find("c label 1 "), std::string::npos);
    }
}

TEST(Cli, BuildNaiveFromGraphFile) {
    CliRun r = run_cli("expr build naive " + data_path("golden.tss"));
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(evaluate(parse_expr(r.out)).graph, tss::testing::golden_instance().graph);
}

TEST(Cli, SelftestPasses) {
    CliRun r = run_cli("selftest --seed 1 --cases 50");
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("50/50 cases passed"), std::string::npos);
}

TEST(Cli, SelftestWithoutCases) { EXPECT_EQ(run_cli("selftest --cases 0").code, 0); }

TEST(Cli, SelftestDumpsCounterexamples) {
    CliRun r = run_cli("selftest --seed 1 --cases 2 --inject-fault");
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("--- counterexample .tss ---"), std::string::npos);
    EXPECT_NE(r.out.find("--- counterexample .cwe ---"), std::string::npos);
}

TEST(Cli, CounterexamplesReplayThroughSolveAndOracle) {
    // The injected fault lives in the selftest harness only, so the replayed
    // solve agrees with the oracle value the dump reports.
    CliRun r = run_cli("selftest --seed 4 --cases 1 --inject-fault");
    ASSERT_EQ(r.code, 1);
    auto tss_at = r.out.find("--- counterexample .tss ---\n");
    auto cwe_at = r.out.find("--- counterexample .cwe ---\n");
    ASSERT_NE(tss_at, std::string::npos);
    std::string tss_text = r.out.substr(tss_at + 28, cwe_at - tss_at - 28);
    auto end_at = r.out.find("--- end counterexample ---");
    ASSERT_NE(end_at, std::string::npos);
    std::string cwe_text = r.out.substr(cwe_at + 28, end_at - cwe_at - 28);
    auto g = scratch("replay.tss", tss_text);
    auto e = scratch("replay.cwe", cwe_text);
    CliRun dp = run_cli("solve " + g + " " + e + " --json --stable");
    CliRun oracle = run_cli("oracle " + g + " --json --stable");
    ASSERT_EQ(dp.code, 0) << dp.out;
    ASSERT_EQ(oracle.code, 0) << oracle.out;
    auto reported = r.out.find("!= oracle ");
    ASSERT_NE(reported, std::string::npos);
    const int k = std::stoi(r.out.substr(reported + 10));
    EXPECT_EQ(nlohmann::json::parse(oracle.out)["min_target_size"], k);
    EXPECT_EQ(nlohmann::json::parse(dp.out)["min_target_size"], k);
}

TEST(Cli, UnknownArgumentsAreInputErrors) {
    EXPECT_EQ(run_cli("solve").code, 2);
    EXPECT_EQ(run_cli("frobnicate").code, 2);
    EXPECT_EQ(run_cli("solve /nonexistent.tss /nonexistent.cwe").code, 2);
}

TEST(Cli, StableJsonIsByteIdentical) {
    CliRun a = run_cli("solve " + golden_args() + " --json --stable --reconstruct");
    CliRun b = run_cli("solve " + golden_args() + " --json --stable --reconstruct");
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
}
