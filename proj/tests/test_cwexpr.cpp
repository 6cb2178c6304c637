#include <gtest/gtest.h>

#include <random>
#include <set>

#include "fixtures.hpp"
#include "tss/corpus.hpp"
#include "tss/cwexpr.hpp"

using namespace tss;
using tss::testing::v;

namespace {

Graph make_graph(std::size_t n, std::vector<std::pair<int, int>> edges) {
    Graph g(n);
    for (auto [a, b] : edges) g.add_edge(v(a), v(b));
    return g;
}

int count_kind(const IndexedExpr& ix, ExprKind kind) {
    int c = 0;
    for (NodeId i = 0; i < ix.size(); ++i) c += ix[i].kind == kind;
    return c;
}

}  // namespace

TEST(Parse, SingleVertex) {
    CwExpr e = parse_expr("(v 1 a)");
    EXPECT_EQ(e.kind(), ExprKind::Vertex);
    EXPECT_EQ(e.vertex_id(), 1);
    EXPECT_EQ(e.first_label(), "a");
}

TEST(Parse, GoldenHasElevenLeavesAndThreeLabels) {
    IndexedExpr ix(tss::testing::golden_expr());
    EXPECT_EQ(count_kind(ix, ExprKind::Vertex), 11);
    EXPECT_EQ(ix.label_count(), 3U);
}

TEST(Parse, JoinLabelsMustDiffer) { EXPECT_THROW(parse_expr("(eta a a (v 1 a))"), InputError); }

TEST(Parse, RelabelLabelsMustDiffer) { EXPECT_THROW(parse_expr("(rho a a (v 1 a))"), InputError); }

TEST(Parse, DuplicateVertexId) { EXPECT_THROW(parse_expr("(u (v 1 a) (v 1 b))"), InputError); }

TEST(Parse, IdsMustBeOneToN) { EXPECT_THROW(parse_expr("(u (v 1 a) (v 3 b))"), InputError); }

TEST(Parse, ErrorsCarryLocation) {
    try {
        parse_expr("; comment\n(u (v 1 a)\n   (w 2 b))");
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3);
        EXPECT_GT(e.column(), 1);
    }
    EXPECT_THROW(parse_expr("(v 1 a) (v 2 b)"), ParseError);
    EXPECT_THROW(parse_expr("(v 0 a)"), InputError);
    EXPECT_THROW(parse_expr("(v 1 9a)"), ParseError);
}

TEST(Evaluate, GoldenMatchesTheGraphFile) {
    auto lg = evaluate(tss::testing::golden_expr());
    auto inst = tss::testing::golden_instance();
    EXPECT_EQ(lg.graph.vertex_count(), 11U);
    EXPECT_EQ(lg.graph.edge_count(), 22U);
    EXPECT_EQ(lg.graph, inst.graph);
}

TEST(Evaluate, GoldenAdjacency) {
    auto g = evaluate(tss::testing::golden_expr()).graph;
    for (int x : {4, 5, 1, 3}) EXPECT_TRUE(g.has_edge(v(2), v(x)));
    for (int a : {4, 5, 10})
        for (int b : {1, 3}) EXPECT_TRUE(g.has_edge(v(a), v(b)));
    for (int b : {1, 3, 7})
        for (int c : {6, 8, 11, 9}) EXPECT_TRUE(g.has_edge(v(b), v(c)));
}

TEST(Evaluate, CliqueOfThreeIsATriangle) {
    EXPECT_EQ(evaluate(build_clique(3)).graph, make_graph(3, {{1, 2}, {1, 3}, {2, 3}}));
}

TEST(Evaluate, RelabelSingleVertex) {
    auto lg = evaluate(parse_expr("(rho a b (v 1 a))"));
    EXPECT_EQ(lg.label_names[lg.label[0]], "b");
}

TEST(NodeStats, GoldenRootAmounts) {
    auto inst = tss::testing::golden_instance();
    IndexedExpr ix(tss::testing::golden_expr());
    NodeStats stats(ix, inst.thresholds);
    ASSERT_EQ(stats.t_max(), 2);
    for (const char* l : {"alpha", "beta", "gamma"}) EXPECT_EQ(stats.tamount(ix.root(), ix.label_id(l)), 3) << l;
}

TEST(NodeStats, EmptyLabelHasZeroAmounts) {
    IndexedExpr ix(parse_expr("(rho a b (v 1 a))"));
    NodeStats stats(ix, ThresholdMap({1}));
    EXPECT_EQ(stats.tamount(ix.root(), ix.label_id("a")), 0);
    EXPECT_EQ(stats.that(ix.root(), ix.label_id("a")), 0);
}

TEST(NodeStats, FiveOfOneLabel) {
    IndexedExpr ix(parse_expr("(u (v 1 a) (u (v 2 a) (u (v 3 a) (u (v 4 a) (v 5 a)))))"));
    NodeStats stats(ix, ThresholdMap({1, 1, 0, 1, 1}, 1));
    EXPECT_EQ(stats.tamount(ix.root(), 0), 2);
    EXPECT_EQ(stats.that(ix.root(), 0), 1);
    EXPECT_EQ(stats.threshold_count(ix.root(), 0, 1), 4U);
}

TEST(NodeStats, MissingThresholdIsAnError) {
    IndexedExpr ix(parse_expr("(u (v 1 a) (v 2 a))"));
    EXPECT_THROW(NodeStats(ix, ThresholdMap({1})), InputError);
}

TEST(NodeStats, CountsAddUpAtUnionsAndRelabels) {
    std::mt19937_64 rng(5);
    for (int round = 0; round < 100; ++round) {
        IndexedExpr ix(random_expression(rng, uniform(rng, 1, 8), uniform(rng, 1, 4)));
        NodeStats stats(ix, random_thresholds(rng, ix.vertex_count(), 2));
        for (NodeId i = 0; i < ix.size(); ++i) {
            const ExprNode& n = ix[i];
            for (LabelId l = 0; l < ix.label_count(); ++l) {
                EXPECT_LE(stats.that(i, l), stats.tamount(i, l));
                EXPECT_LE(stats.tamount(i, l), stats.t_max() + 1);
                if (n.kind == ExprKind::Union) {
                    EXPECT_EQ(stats.count(i, l), stats.count(n.left, l) + stats.count(n.right, l));
                }
            }
            if (n.kind == ExprKind::Rho) {
                EXPECT_EQ(stats.count(i, n.a), 0U);
                EXPECT_EQ(stats.count(i, n.b), stats.count(n.left, n.a) + stats.count(n.left, n.b));
            }
        }
    }
}

TEST(Irredundant, Golden) { EXPECT_TRUE(check_irredundant(tss::testing::golden_expr()).empty()); }

TEST(Irredundant, NormalizeDropsRepeatedJoin) {
    CwExpr e = parse_expr("(eta a b (eta a b (u (v 1 a) (v 2 b))))");
    auto bad = check_irredundant(e);
    ASSERT_EQ(bad.size(), 1U);
    EXPECT_TRUE(bad.front().total());
    EXPECT_EQ(bad.front().path, "root");
    CwExpr fixed = normalize(e);
    EXPECT_EQ(fixed, parse_expr("(eta a b (u (v 1 a) (v 2 b)))"));
    EXPECT_TRUE(check_irredundant(fixed).empty());
}

TEST(Irredundant, PartialRedundancyIsRejected) {
    CwExpr e = parse_expr("(eta a b (u (v 3 a) (eta a b (u (v 1 a) (v 2 b)))))");
    auto bad = check_irredundant(e);
    ASSERT_EQ(bad.size(), 1U);
    EXPECT_FALSE(bad.front().total());
    EXPECT_THROW(normalize(e), UnsupportedExpression);
}

TEST(Builders, PathOfThree) {
    CwExpr e = build_path(3);
    EXPECT_LE(IndexedExpr(e).label_count(), 3U);
    EXPECT_EQ(evaluate(e).graph, make_graph(3, {{1, 2}, {2, 3}}));
    EXPECT_TRUE(check_irredundant(e).empty());
}

TEST(Builders, NaiveTriangle) {
    Graph k3 = make_graph(3, {{1, 2}, {1, 3}, {2, 3}});
    CwExpr e = build_naive(k3);
    IndexedExpr ix(e);
    EXPECT_EQ(ix.label_count(), 3U);
    EXPECT_EQ(count_kind(ix, ExprKind::Eta), 3);
    EXPECT_TRUE(check_irredundant(e).empty());
    EXPECT_EQ(evaluate(e).graph, k3);
}

TEST(Builders, CliqueOfFour) {
    CwExpr e = build_clique(4);
    EXPECT_EQ(IndexedExpr(e).label_count(), 2U);
    EXPECT_TRUE(check_irredundant(e).empty());
    EXPECT_EQ(evaluate(e).graph, make_graph(4, {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}}));
}

TEST(Builders, FamiliesMatchTheirDefinitions) {
    for (int n = 1; n <= 9; ++n) {
        Graph path(static_cast<std::size_t>(n)), clique(static_cast<std::size_t>(n));
        for (int i = 1; i < n; ++i) path.add_edge(v(i), v(i + 1));
        for (int i = 1; i <= n; ++i)
            for (int j = i + 1; j <= n; ++j) clique.add_edge(v(i), v(j));
        EXPECT_EQ(evaluate(build_path(n)).graph, path);
        EXPECT_EQ(evaluate(build_clique(n)).graph, clique);
        EXPECT_TRUE(check_irredundant(build_path(n)).empty());
        EXPECT_TRUE(check_irredundant(build_clique(n)).empty());
    }
    for (int a = 1; a <= 3; ++a)
        for (int b = 1; b <= 3; ++b) {
            Graph g(static_cast<std::size_t>(a + b));
            for (int i = 1; i <= a; ++i)
                for (int j = a + 1; j <= a + b; ++j) g.add_edge(v(i), v(j));
            CwExpr e = build_complete_bipartite(a, b);
            EXPECT_EQ(evaluate(e).graph, g);
            EXPECT_EQ(IndexedExpr(e).label_count(), 2U);
        }
}

TEST(Builders, NaiveOfRandomGraphs) {
    std::mt19937_64 rng(3);
    for (int round = 0; round < 50; ++round) {
        Graph g = random_graph(rng, uniform(rng, 1, 7), 0.5);
        CwExpr e = build_naive(g);
        EXPECT_EQ(evaluate(e).graph, g);
        EXPECT_TRUE(check_irredundant(e).empty());
    }
}

TEST(RoundTrip, SerializeThenParseIsIdentity) {
    std::mt19937_64 rng(9);
    std::vector<CwExpr> corpus{tss::testing::golden_expr(), build_path(6), build_clique(4)};
    for (int round = 0; round < 100; ++round) corpus.push_back(random_expression(rng, uniform(rng, 1, 9), uniform(rng, 1, 5)));
    for (const CwExpr& e : corpus) {
        for (bool pretty : {false, true}) {
            CwExpr back = parse_expr(serialize(e, pretty));
            EXPECT_EQ(back, e);
            EXPECT_EQ(evaluate(back), evaluate(e));
        }
    }
}

TEST(RandomExpressions, AreIrredundant) {
    std::mt19937_64 rng(13);
    for (int round = 0; round < 200; ++round)
        EXPECT_TRUE(check_irredundant(random_expression(rng, uniform(rng, 1, 9), uniform(rng, 1, 4))).empty());
}

TEST(IndexedExpr, PathsAndClasses) {
    IndexedExpr ix(parse_expr("(eta a b (u (v 1 a) (rho a b (v 2 a))))"));
    EXPECT_EQ(ix.path(ix.root()), "root");
    const NodeId u = ix[ix.root()].left;
    EXPECT_EQ(ix.path(ix[u].right), "root/0/1");
    auto classes = ix.classes_at(ix.root());
    EXPECT_EQ(classes[ix.label_id("a")], std::vector<Vertex>{0});
    EXPECT_EQ(classes[ix.label_id("b")], std::vector<Vertex>{1});
    EXPECT_EQ(ix.label_at(1, ix[ix.root()].left), ix.label_id("b"));
}
