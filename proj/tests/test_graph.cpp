#include <gtest/gtest.h>

#include <numeric>
#include <sstream>

#include "test_util.hpp"

using namespace role2vec;
using testutil::graph;

TEST(EdgeList, TriangleParses) {
  const Graph g = parse_edge_list_string("0 1\n1 2\n2 0");
  EXPECT_EQ(g.num_nodes(), 3u);
  EXPECT_EQ(g.num_edges(), 3u);
  EXPECT_EQ(g.degrees(), (std::vector<std::size_t>{2, 2, 2}));
}

TEST(EdgeList, SelfLoopDroppedAndIdsRemapped) {
  const Graph g = parse_edge_list_string("5 5\n5 6");
  EXPECT_EQ(g.num_nodes(), 2u);
  EXPECT_EQ(g.num_edges(), 1u);
  EXPECT_EQ(g.original_id(0), 5u);
  EXPECT_EQ(g.original_id(1), 6u);
  EXPECT_EQ(*g.find_node(6), 1u);
  EXPECT_FALSE(g.find_node(7).has_value());
}

TEST(EdgeList, DuplicatesMerged) {
  EXPECT_EQ(parse_edge_list_string("0 1\n1 0\n0 1").num_edges(), 1u);
}

TEST(EdgeList, CommentsExtraTokensAndMatrixMarketHeader) {
  const Graph g = parse_edge_list_string("%%MatrixMarket matrix coordinate pattern symmetric\n% c\n3 3 2\n"
                                         "# another\n1 2 0.5\n\n2 3\n");
  EXPECT_EQ(g.num_nodes(), 3u);
  EXPECT_EQ(g.num_edges(), 2u);
  EXPECT_EQ(g.original_id(0), 1u);
}

TEST(EdgeList, ParseErrorCarriesLine) {
  try {
    parse_edge_list_string("0 1\n# ok\nx 2\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.exit_code(), 3);
  }
  EXPECT_THROW(parse_edge_list_string("0\n"), ParseError);
  EXPECT_THROW(parse_edge_list_string("0 -1\n"), ParseError);
}

TEST(EdgeList, EmptyAfterCleaning) {
  EXPECT_THROW(parse_edge_list_string("# nothing\n4 4\n"), EmptyGraphError);
  EXPECT_THROW(parse_edge_list_string(""), EmptyGraphError);
}

TEST(EdgeList, MissingFileIsIoError) {
  try {
    load_edge_list("/nonexistent/graph.edges");
    FAIL();
  } catch (const IoError& e) {
    EXPECT_EQ(e.exit_code(), 2);
  }
}

TEST(EdgeList, KarateLoads) {
  const Graph g = load_edge_list(testutil::karate_path());
  EXPECT_EQ(g.num_nodes(), 34u);
  EXPECT_EQ(g.num_edges(), 78u);
}

TEST(EdgeList, WriteThenParseIsIsomorphic) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Graph g = erdos_renyi(25, 0.15, seed);
    if (g.num_isolated() > 0 || g.num_edges() == 0) continue;
    std::ostringstream out;
    write_edge_list(g, out);
    const Graph h = parse_edge_list_string(out.str());
    ASSERT_EQ(h.num_nodes(), g.num_nodes());
    EXPECT_EQ(h.num_edges(), g.num_edges());
    for (NodeId a = 0; a < h.num_nodes(); ++a) {
      for (NodeId b = 0; b < h.num_nodes(); ++b) {
        EXPECT_EQ(h.has_edge(a, b), g.has_edge(h.original_id(a), h.original_id(b)));
      }
    }
  }
}

TEST(GraphInvariants, RandomGraphs) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Graph g = erdos_renyi(20, 0.3, seed);
    std::size_t degree_sum = 0;
    for (NodeId i = 0; i < g.num_nodes(); ++i) {
      auto nb = g.neighbors(i);
      degree_sum += nb.size();
      EXPECT_EQ(nb.size(), g.degree(i));
      for (std::size_t k = 0; k < nb.size(); ++k) {
        EXPECT_NE(nb[k], i);
        if (k) { EXPECT_LT(nb[k - 1], nb[k]); }
        EXPECT_TRUE(g.has_edge(nb[k], i));
        EXPECT_EQ(*g.neighbor_index(i, nb[k]), k);
      }
    }
    EXPECT_EQ(degree_sum, 2 * g.num_edges());
  }
}

TEST(GraphInvariants, WithoutEdgesKeepsNodesAndIds) {
  Graph g = parse_edge_list_string("10 11\n11 12\n12 10\n12 13");
  const std::vector<Edge> removed{{0, 1}};
  const Graph h = g.without_edges(removed);
  EXPECT_EQ(h.num_nodes(), 4u);
  EXPECT_EQ(h.num_edges(), 3u);
  EXPECT_FALSE(h.has_edge(0, 1));
  EXPECT_EQ(h.original_id(3), 13u);
}

TEST(AliasTable, ReconstructsDistribution) {
  Rng rng(7);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> w(1 + rng.index(30));
    for (double& x : w) x = rng.uniform() < 0.2 ? 0.0 : rng.uniform(0.0, 5.0);
    w[rng.index(w.size())] += 0.1;
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    const AliasTable t(w);
    const auto d = t.distribution();
    EXPECT_NEAR(std::accumulate(d.begin(), d.end(), 0.0), 1.0, 1e-9);
    for (std::size_t k = 0; k < w.size(); ++k) EXPECT_NEAR(d[k], w[k] / total, 1e-12);
  }
}

TEST(AliasTable, UniformWeightsAreExact) {
  const std::vector<double> w(7, 3.0);
  const AliasTable t(w);
  for (double p : t.probabilities()) EXPECT_EQ(p, 1.0);
}

TEST(AliasTable, RejectsBadWeights) {
  EXPECT_THROW(AliasTable(std::vector<double>{}), ParameterError);
  EXPECT_THROW(AliasTable(std::vector<double>{1.0, -1.0}), ParameterError);
  EXPECT_THROW(AliasTable(std::vector<double>{0.0, 0.0}), ParameterError);
}

TEST(AliasTable, SamplesMatchChiSquare) {
  Rng rng(11);
  const std::vector<double> w{0.5, 3.0, 0.0, 1.5, 2.0, 0.25};
  const AliasTable t(w);
  std::vector<double> counts(w.size(), 0.0);
  for (int k = 0; k < 100000; ++k) counts[t.sample(rng)] += 1;
  EXPECT_GT(testutil::chi_square_p(counts, t.distribution()), 0.001);
  EXPECT_EQ(counts[2], 0.0);
}

TEST(Transitions, FirstOrderIsUniformOverNeighbors) {
  const Graph tri = testutil::triangle();
  const FirstOrderSampler s(tri);
  const auto d = s.tables().distribution(0);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_DOUBLE_EQ(d[0], 0.5);
  EXPECT_DOUBLE_EQ(d[1], 0.5);

  const Graph st = testutil::star(4);
  for (double p : FirstOrderSampler(st).tables().distribution(0)) EXPECT_DOUBLE_EQ(p, 0.25);
  for (double p : walk_step_distribution(st, {std::nullopt, 0}, WalkParams{})) EXPECT_DOUBLE_EQ(p, 0.25);
}

TEST(Transitions, SecondOrderHandExample) {
  const Graph g = testutil::path(3);
  WalkParams params;
  params.return_param = 2.0;
  params.inout_param = 0.5;
  const auto d = walk_step_distribution(g, {0, 1}, params);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_NEAR(d[0], 0.2, 1e-15);
  EXPECT_NEAR(d[1], 0.8, 1e-15);

  // The alias table for the directed edge 0 -> 1 encodes the same thing.
  const SecondOrderSampler s(g, params);
  const auto table = s.edge_tables().distribution(g.edge_offset(0) + 0);
  EXPECT_NEAR(table[0], 0.2, 1e-12);
  EXPECT_NEAR(table[1], 0.8, 1e-12);
}

TEST(Transitions, UnbiasedSecondOrderEqualsFirstOrder) {
  const Graph g = testutil::connected_er(15, 0.3, 5);
  const WalkParams params;
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    for (NodeId v : g.neighbors(u)) {
      const auto a = walk_step_distribution(g, {u, v}, params);
      const auto b = walk_step_distribution(g, {std::nullopt, v}, params);
      EXPECT_EQ(a, b);
    }
  }
}

TEST(Transitions, TriangleEdgeBiasUsesAllThreeWeights) {
  // From 1 having come from 0 in a triangle plus pendant: 0 is the return
  // (1/p), 2 is adjacent to 0 (weight 1), 3 is not (1/q).
  const Graph g = graph({{0, 1}, {1, 2}, {0, 2}, {1, 3}});
  WalkParams params;
  params.return_param = 4.0;
  params.inout_param = 0.25;
  const auto d = walk_step_distribution(g, {0, 1}, params);
  const double total = 0.25 + 1.0 + 4.0;
  EXPECT_NEAR(d[0], 0.25 / total, 1e-15);
  EXPECT_NEAR(d[1], 1.0 / total, 1e-15);
  EXPECT_NEAR(d[2], 4.0 / total, 1e-15);
}

TEST(Transitions, Errors) {
  const Graph g = graph({{0, 1}}, 3);
  EXPECT_THROW(walk_step_distribution(g, {std::nullopt, 2}, WalkParams{}), DegenerateError);
  WalkParams biased;
  biased.return_param = 2.0;
  const Graph p = testutil::path(3);
  EXPECT_THROW(walk_step_distribution(p, {0, 2}, biased), ParameterError);
  WalkParams bad;
  bad.inout_param = 0.0;
  EXPECT_THROW(bad.validate(), ParameterError);
  bad = WalkParams{};
  bad.walk_length = 0;
  EXPECT_THROW(bad.validate(), ParameterError);
}

TEST(Random, DerivedStreamsAreReproducibleAndDistinct) {
  Rng a = Rng::derived(1, 2, 3);
  Rng b = Rng::derived(1, 2, 3);
  Rng c = Rng::derived(1, 3, 2);
  const auto x = a();
  EXPECT_EQ(x, b());
  EXPECT_NE(x, c());
  Rng r(3);
  for (int k = 0; k < 1000; ++k) {
    EXPECT_LT(r.index(7), 7u);
    const double u = r.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}
