#include <gtest/gtest.h>

#include <random>

#include "gpm/partition_store.hpp"
#include "gpm/partitioner.hpp"
#include "gpm/synth.hpp"
#include "test_graphs.hpp"

namespace gpm {
namespace {

PartitionSet single_partition(const Graph& g, bool redundancy = false) {
  Assignment a = hash_assign(g.vertex_count(), 1);
  std::optional<Assignment> rev;
  if (redundancy) rev = a;
  return build_partitions(g, a, rev);
}

TEST(BuildPartitions, SinglePartitionHoldsEverything) {
  Graph g = testing::example_graph();
  PartitionSet set = single_partition(g);
  ASSERT_EQ(set.partitions.size(), 1u);
  EXPECT_EQ(set.partitions[0].local_edge_count(), 7u);
  EXPECT_FALSE(set.partitions[0].has_reverse());
}

TEST(BuildPartitions, HashSplitConservesEdges) {
  Graph g = testing::example_graph();
  Assignment a = hash_assign(g.vertex_count(), 2);
  PartitionSet set = build_partitions(g, a);
  // Sources A(0), C(2), E(4), G(6) land in partition 0: A and E and G have
  // two out-edges each, C has none.
  EXPECT_EQ(set.partitions[0].local_edge_count(), 6u);
  EXPECT_EQ(set.partitions[1].local_edge_count(), 1u);
}

TEST(BuildPartitions, ReverseStoresConserveEdges) {
  Graph g = testing::example_graph();
  Assignment a = hash_assign(g.vertex_count(), 3);
  PartitionSet set = build_partitions(g, a, a);
  std::size_t fwd = 0, rev = 0;
  for (const PartitionStore& s : set.partitions) {
    fwd += s.local_edge_count();
    rev += s.reverse_edge_count();
    EXPECT_TRUE(s.has_reverse());
  }
  EXPECT_EQ(fwd, g.edge_count());
  EXPECT_EQ(rev, g.edge_count());
}

TEST(BuildPartitions, RejectsOutOfRangeAssignment) {
  Graph g = testing::example_graph();
  Assignment bad;
  bad.partition_count = 2;
  bad.parts.assign(g.vertex_count(), 5);
  EXPECT_THROW(build_partitions(g, bad), ConfigError);
}

TEST(OutEdges, MatchesExampleGraph) {
  Graph g = testing::example_graph();
  PartitionSet set = single_partition(g);
  const PartitionStore& store = set.partitions[0];

  using LN = LabeledNeighbor;
  EXPECT_EQ(store.out_edges(0, kWildcardLabel),
            (std::vector<LN>{{0, 1}, {0, 2}}));        // A -> B, C
  EXPECT_EQ(store.out_edges(1, kWildcardLabel), std::vector<LN>{});  // B
  EXPECT_EQ(store.out_edges(4, 0),
            (std::vector<LN>{{0, 1}, {0, 5}}));        // E -> B, F sorted
}

TEST(OutEdges, ThrowsOnForeignVertex) {
  Graph g = testing::example_graph();
  Assignment a = hash_assign(g.vertex_count(), 2);
  PartitionSet set = build_partitions(g, a);
  EXPECT_THROW(set.partitions[0].out_edges(1, kWildcardLabel),
               OwnershipError);
}

TEST(InEdges, MatchesExampleGraph) {
  Graph g = testing::example_graph();
  PartitionSet set = single_partition(g, true);
  const PartitionStore& store = set.partitions[0];

  using LN = LabeledNeighbor;
  EXPECT_EQ(store.in_edges(1, kWildcardLabel),
            (std::vector<LN>{{0, 0}, {0, 3}, {0, 4}, {0, 6}}));  // A,D,E,G
  EXPECT_EQ(store.in_edges(0, kWildcardLabel), std::vector<LN>{});
}

TEST(InEdges, RequiresReverseStore) {
  Graph g = testing::example_graph();
  PartitionSet set = single_partition(g, false);
  EXPECT_THROW(set.partitions[0].in_edges(1, kWildcardLabel),
               RedundancyError);
}

TEST(InEdges, ThrowsOnForeignVertex) {
  Graph g = testing::example_graph();
  Assignment a = hash_assign(g.vertex_count(), 2);
  PartitionSet set = build_partitions(g, a, a);
  // B(1) is owned by partition 1 under the reverse assignment.
  EXPECT_THROW(set.partitions[0].in_edges(1, kWildcardLabel), OwnershipError);
}

TEST(ScanByTarget, NoMatchesForOutOfRangeTarget) {
  Graph g = testing::example_graph();
  PartitionSet set = single_partition(g);
  EXPECT_TRUE(set.partitions[0].scan_by_target(999, kWildcardLabel).empty());
}

TEST(ScanByTarget, FindsAllSources) {
  Graph g = testing::example_graph();
  PartitionSet set = single_partition(g);
  auto hits = set.partitions[0].scan_by_target(1, kWildcardLabel);
  std::vector<VertexId> sources;
  for (auto [l, s] : hits) sources.push_back(s);
  EXPECT_EQ(sources, (std::vector<VertexId>{0, 3, 4, 6}));
  EXPECT_TRUE(set.partitions[0].scan_by_target(0, kWildcardLabel).empty());
}

TEST(ScanByTarget, UnionOverPartitionsEqualsInEdges) {
  std::mt19937_64 rng(3);
  for (int round = 0; round < 20; ++round) {
    Graph g = synth_graph(30, 90, 3, SynthModel::kUniform, rng());
    std::uint32_t p = 1 + rng() % 5;
    Assignment a = hash_assign(g.vertex_count(), p);
    PartitionSet set = build_partitions(g, a, a);
    for (VertexId dst = 0; dst < g.vertex_count(); ++dst) {
      std::vector<LabeledNeighbor> scanned;
      for (const PartitionStore& s : set.partitions) {
        auto part = s.scan_by_target(dst, kWildcardLabel);
        scanned.insert(scanned.end(), part.begin(), part.end());
      }
      std::sort(scanned.begin(), scanned.end());
      auto direct = set.partitions[a.parts[dst]].in_edges(dst, kWildcardLabel);
      EXPECT_EQ(scanned, direct);
    }
  }
}

TEST(HasEdge, MatchesExampleGraph) {
  Graph g = testing::example_graph();
  PartitionSet set = single_partition(g);
  const PartitionStore& store = set.partitions[0];
  EXPECT_TRUE(store.has_edge(6, 0, 5));              // G -l-> F
  EXPECT_FALSE(store.has_edge(3, 0, 2));             // D has no edge to C
  EXPECT_FALSE(store.has_edge(3, kWildcardLabel, 2));
  EXPECT_TRUE(store.has_edge(0, kWildcardLabel, 1));  // A -> B any label
}

TEST(AccessEquivalence, EveryEdgeVisibleFromItsOwner) {
  std::mt19937_64 rng(17);
  for (int round = 0; round < 10; ++round) {
    Graph g = synth_graph(40, 150, 2, SynthModel::kClustered, rng());
    std::uint32_t p = 1 + rng() % 4;
    Assignment a = hash_assign(g.vertex_count(), p);
    PartitionSet set = build_partitions(g, a);
    for (const Edge& e : g.edges()) {
      const PartitionStore& owner = set.partitions[a.parts[e.src]];
      EXPECT_TRUE(owner.has_edge(e.src, e.label, e.dst));
      auto out = owner.out_edges(e.src, e.label);
      EXPECT_TRUE(std::find(out.begin(), out.end(),
                            LabeledNeighbor{e.label, e.dst}) != out.end());
    }
  }
}

TEST(Placement, RoundRobin) {
  auto placement = round_robin_placement(5, 2);
  EXPECT_EQ(placement, (std::vector<NodeId>{0, 1, 0, 1, 0}));
  EXPECT_THROW(round_robin_placement(4, 0), ConfigError);
}

}  // namespace
}  // namespace gpm
