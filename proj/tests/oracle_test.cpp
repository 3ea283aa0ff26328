#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "gpm/oracle.hpp"
#include "gpm/synth.hpp"
#include "test_graphs.hpp"

namespace gpm {
namespace {

TEST(Oracle, SingleEdgeGraph) {
  Graph g = parse_graph("A l B\n");
  ConjunctiveQuery cq = parse_query("X * Y\n");
  OracleResult r = brute_force(g, cq, Semantics::kHomomorphism);
  EXPECT_EQ(r.tuples, (std::set<std::vector<VertexId>>{{0, 1}}));
}

TEST(Oracle, QuadOnBipartiteToy) {
  Graph g = parse_graph("a x b\na x c\nd x b\nd x c\n");
  ConjunctiveQuery quad = testing::quad_query();
  EXPECT_EQ(brute_force(g, quad, Semantics::kHomomorphism).count(), 16u);
  EXPECT_EQ(brute_force(g, quad, Semantics::kInjective).count(), 4u);
}

TEST(Oracle, QuadOnExampleGraphInjective) {
  Graph g = testing::example_graph();
  OracleResult r = brute_force(g, testing::quad_query(),
                               Semantics::kInjective);
  // E=4, F=5, B=1, G=6. Contains the walked-through match (E, F, B, G).
  std::set<std::vector<VertexId>> expected{
      {4, 5, 1, 6}, {4, 1, 5, 6}, {6, 5, 1, 4}, {6, 1, 5, 4}};
  EXPECT_EQ(r.tuples, expected);
}

TEST(Oracle, QuadOnExampleGraphHomomorphism) {
  // Independently recomputed: sum over (v1, v4) pairs of
  // |out(v1) & out(v4)|^2 = 31 tuples on this graph.
  Graph g = testing::example_graph();
  OracleResult r = brute_force(g, testing::quad_query(),
                               Semantics::kHomomorphism);
  EXPECT_EQ(r.count(), 31u);
  EXPECT_TRUE(r.tuples.count({4, 5, 1, 6}));
  // Homomorphism admits V1 = V4 and V2 = V3.
  EXPECT_TRUE(r.tuples.count({0, 1, 1, 0}));
}

TEST(Oracle, VQueryOnExampleGraphIsEmpty) {
  Graph g = testing::example_graph();
  EXPECT_EQ(brute_force(g, testing::v_query(),
                        Semantics::kHomomorphism).count(), 0u);
}

TEST(Oracle, HomomorphismContainsInjective) {
  std::mt19937_64 rng(23);
  ConjunctiveQuery quad = testing::quad_query();
  for (int round = 0; round < 25; ++round) {
    Graph g = synth_graph(12, 40, 2, SynthModel::kUniform, rng());
    auto hom = brute_force(g, quad, Semantics::kHomomorphism).tuples;
    auto inj = brute_force(g, quad, Semantics::kInjective).tuples;
    EXPECT_TRUE(std::includes(hom.begin(), hom.end(), inj.begin(), inj.end()));
  }
}

TEST(Oracle, PredicateOrderDoesNotChangeTheResult) {
  std::mt19937_64 rng(29);
  for (int round = 0; round < 25; ++round) {
    Graph g = synth_graph(12, 40, 2, SynthModel::kUniform, rng());
    ConjunctiveQuery quad = testing::quad_query();
    // Reversed predicate order is still connected in the bound sense.
    ConjunctiveQuery perm = quad;
    std::swap(perm.predicates[2], perm.predicates[3]);
    EXPECT_EQ(brute_force(g, quad, Semantics::kHomomorphism).tuples,
              brute_force(g, perm, Semantics::kHomomorphism).tuples);
  }
}

TEST(Oracle, RespectsLabels) {
  Graph g = parse_graph("A x B\nA y C\n");
  ConjunctiveQuery cq = parse_query("U x V\n");
  EXPECT_EQ(brute_force(g, cq, Semantics::kHomomorphism).tuples,
            (std::set<std::vector<VertexId>>{{0, 1}}));
  ConjunctiveQuery unknown = parse_query("U z V\n");
  EXPECT_EQ(brute_force(g, unknown, Semantics::kHomomorphism).count(), 0u);
}

TEST(Oracle, SelfLoopPredicate) {
  Graph g = parse_graph("A l A\nA l B\nB l B\n");
  ConjunctiveQuery cq = parse_query("X * X\n");
  EXPECT_EQ(brute_force(g, cq, Semantics::kHomomorphism).tuples,
            (std::set<std::vector<VertexId>>{{0}, {1}}));
}

}  // namespace
}  // namespace gpm
