#include <gtest/gtest.h>

#include <cmath>

#include "test_util.hpp"

using namespace role2vec;

namespace {

std::vector<Graph> small_connected_graphs() {
  std::vector<Graph> out{testutil::path(4), testutil::cycle(5), testutil::star(4), testutil::complete(5),
                         testutil::graph({{0, 1}, {1, 2}, {0, 2}, {2, 3}, {3, 4}, {4, 5}, {3, 5}})};
  for (std::uint64_t seed = 0; seed < 6; ++seed) out.push_back(testutil::connected_er(8 + 2 * seed, 0.35, seed));
  return out;
}

}  // namespace

TEST(Chain, RowStochasticAndStationary) {
  for (const Graph& g : small_connected_graphs()) {
    const ChainModel chain(g);
    EXPECT_LT(ChainModel::row_sum_error(chain.P, chain.degrees), 1e-12);
    EXPECT_LT(ChainModel::row_sum_error(chain.power(25), chain.degrees), 1e-9);
    EXPECT_LT(chain.stationarity_residual(), 1e-12);
    for (NodeId i = 0; i < g.num_nodes(); ++i) {
      for (NodeId j = 0; j < g.num_nodes(); ++j) {
        EXPECT_EQ(chain.P(i, j), g.has_edge(i, j) ? 1.0 / static_cast<double>(g.degree(i)) : 0.0);
      }
    }
  }
}

TEST(Chain, Components) {
  const Graph g = testutil::graph({{0, 1}, {2, 3}}, 5);
  EXPECT_EQ(connected_components(g), (std::vector<std::size_t>{0, 0, 1, 1, 2}));
  EXPECT_FALSE(is_connected(g));
  EXPECT_TRUE(is_connected(testutil::cycle(7)));
}

TEST(FirstPassage, SingleEdge) {
  const auto r = first_passage(testutil::graph({{0, 1}}), 0, 1, 6);
  EXPECT_EQ(r, (std::vector<double>{0, 1, 0, 0, 0, 0, 0}));
}

TEST(FirstPassage, ThreePath) {
  const auto r = first_passage(testutil::path(3), 0, 2, 6);
  EXPECT_DOUBLE_EQ(r[1], 0.0);
  EXPECT_DOUBLE_EQ(r[2], 0.5);
  EXPECT_DOUBLE_EQ(r[3], 0.0);
  EXPECT_DOUBLE_EQ(r[4], 0.25);
  EXPECT_DOUBLE_EQ(r[6], 0.125);
}

TEST(FirstPassage, MassIsConservedAndRecurrent) {
  for (const Graph& g : small_connected_graphs()) {
    const FirstPassageTable table = exact_first_passage(g, 0, 1000);
    for (NodeId j = 1; j < g.num_nodes(); ++j) {
      EXPECT_LE(table.total(j), 1.0 + 1e-12);
      EXPECT_NEAR(table.total(j) + table.survival[j], 1.0, 1e-12);
    }
  }
  // On well-mixed graphs essentially all mass has arrived by t = 1000.
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Graph g = testutil::connected_er(15, 0.5, seed);
    const FirstPassageTable table = exact_first_passage(g, 0, 1000);
    for (NodeId j = 1; j < g.num_nodes(); ++j) EXPECT_NEAR(table.total(j), 1.0, 1e-6);
  }
}

TEST(FirstPassage, MonteCarloAgreesAndConverges) {
  const Graph g = testutil::graph({{0, 1}, {1, 2}, {0, 2}, {2, 3}, {3, 4}, {4, 5}, {3, 5}});
  const auto exact = first_passage(g, 0, 5, 12);
  auto error = [&](std::size_t trials) {
    const auto mc = sampled_first_passage(g, 0, 5, 12, trials, 21);
    double worst = 0.0;
    for (std::size_t t = 0; t < exact.size(); ++t) {
      const double se = std::sqrt(std::max(exact[t] * (1 - exact[t]), 1e-12) / static_cast<double>(trials));
      EXPECT_LE(std::abs(mc[t] - exact[t]), 5 * se + 1e-12) << "t=" << t << " trials=" << trials;
      worst = std::max(worst, std::abs(mc[t] - exact[t]));
    }
    return worst;
  };
  const double coarse = error(2000);
  const double fine = error(200000);
  // Ten times the standard error shrinkage would be exact; allow slack.
  EXPECT_LT(fine, coarse / 2.0);
}

TEST(Lemma1, IdentityAndWitnessOnSmallGraphs) {
  for (const Graph& g : small_connected_graphs()) {
    for (NodeId u = 0; u < g.num_nodes(); ++u) {
      for (NodeId v = 0; v < g.num_nodes(); ++v) {
        if (u == v || g.has_edge(u, v)) continue;
        for (std::size_t t : {2u, 3u, 5u, 9u}) {
          const Lemma1Report rep = check_lemma1(g, u, v, t);
          EXPECT_LT(rep.identity_error, 1e-12);
          EXPECT_TRUE(rep.holds());
          EXPECT_TRUE(g.has_edge(u, rep.witness));
          EXPECT_DOUBLE_EQ(first_passage(g, rep.witness, v, t - 1)[t - 1], rep.witness_value);
        }
      }
    }
  }
}

TEST(Lemma1, FourPathSingleNeighbor) {
  const Graph g = testutil::path(4);
  const Lemma1Report rep = check_lemma1(g, 0, 3, 3);
  EXPECT_EQ(rep.witness, 1u);
  EXPECT_DOUBLE_EQ(rep.r_uv, first_passage(g, 1, 3, 2)[2]);
  EXPECT_DOUBLE_EQ(rep.margin, 0.0);
}

TEST(Lemma1, StarLeavesGoThroughCenter) {
  const Lemma1Report rep = check_lemma1(testutil::star(4), 1, 2, 2);
  EXPECT_EQ(rep.witness, 0u);
  EXPECT_DOUBLE_EQ(rep.r_uv, 0.25);
}

TEST(Lemma1, Preconditions) {
  const Graph g = testutil::path(4);
  EXPECT_THROW(check_lemma1(g, 0, 1, 3), PreconditionError);
  EXPECT_THROW(check_lemma1(g, 0, 0, 3), PreconditionError);
  EXPECT_THROW(check_lemma1(g, 0, 3, 1), PreconditionError);
}

TEST(Lemma2, ThreePathHittingTimes) {
  const Lemma2Report rep = check_lemma2(testutil::path(3), 0, 2, 20000, 3);
  EXPECT_NEAR(rep.h_uv, 4.0, 1e-12);
  EXPECT_NEAR(rep.neighbor_mean, 3.0, 1e-12);
  EXPECT_LT(rep.identity_error, 1e-12);
  EXPECT_LE(rep.tail_prob, 0.5);
  EXPECT_TRUE(rep.markov_ok());
  EXPECT_NEAR(rep.mc_mean_time, 4.0, 0.1);
}

TEST(Lemma2, IdentityOnSmallGraphs) {
  for (const Graph& g : small_connected_graphs()) {
    const Eigen::VectorXd h = hitting_times(g, 0);
    for (NodeId u = 1; u < g.num_nodes(); ++u) {
      double mean = 0.0;
      for (NodeId j : g.neighbors(u)) mean += h[j];
      mean /= static_cast<double>(g.degree(u));
      EXPECT_NEAR(h[u], 1.0 + mean, 1e-9 * h[u]);
      if (!g.has_edge(u, 0)) {
        const Lemma2Report rep = check_lemma2(g, u, 0, 2000, u);
        EXPECT_LT(rep.identity_error, 1e-9 * rep.h_uv);
        EXPECT_TRUE(rep.markov_ok());
      }
    }
  }
}

TEST(Lemma2, Errors) {
  EXPECT_THROW(check_lemma2(testutil::path(3), 0, 1, 10, 1), PreconditionError);
  const Graph split = testutil::graph({{0, 1}, {2, 3}});
  EXPECT_THROW(check_lemma2(split, 0, 3, 10, 1), DegenerateError);
  const Eigen::VectorXd h = hitting_times(split, 0);
  EXPECT_TRUE(std::isinf(h[3]));
  EXPECT_DOUBLE_EQ(h[1], 1.0);
}

TEST(Lemma3, SingleEdgeDirectionalCount) {
  const Lemma3Report rep = check_lemma3(testutil::graph({{0, 1}}), 1, 10, 1);
  ASSERT_EQ(rep.mean_visits.size(), 2u);
  for (double m : rep.mean_visits) EXPECT_DOUBLE_EQ(m, 1.0);
  for (double m : rep.exact_visits) EXPECT_DOUBLE_EQ(m, 1.0);
  EXPECT_TRUE(rep.holds());
  EXPECT_DOUBLE_EQ(rep.undirected_mean(testutil::graph({{0, 1}}), 0, 1), 2.0);
}

TEST(Lemma3, TriangleIsTight) {
  const Lemma3Report rep = check_lemma3(testutil::triangle(), 2, 20000, 2);
  for (double e : rep.exact_visits) EXPECT_NEAR(e, 2.0, 1e-12);
  for (std::size_t e = 0; e < rep.mean_visits.size(); ++e) {
    EXPECT_NEAR(rep.mean_visits[e], 2.0, 4 * rep.stderr_visits[e] + 1e-12);
  }
  EXPECT_TRUE(rep.holds());
}

TEST(Lemma3, ExpectationIsExactlyWalkLength) {
  for (const Graph& g : small_connected_graphs()) {
    for (double e : exact_edge_visits(g, 7)) EXPECT_NEAR(e, 7.0, 1e-9);
  }
}

TEST(Lemma3, KarateWithinBound) {
  const Graph g = load_edge_list(testutil::karate_path());
  const Lemma3Report rep = check_lemma3(g, 10, 2000, 5);
  EXPECT_TRUE(rep.holds()) << "max mean " << rep.max_mean();
  EXPECT_EQ(rep.directed_edges.size(), 2 * g.num_edges());
}

TEST(Lemma3, Preconditions) {
  EXPECT_THROW(check_lemma3(testutil::graph({{0, 1}, {2, 3}}), 3, 10, 1), PreconditionError);
  EXPECT_THROW(check_lemma3(testutil::triangle(), 3, 1, 1), ParameterError);
}
