#include <gtest/gtest.h>

#include "gpm/plan.hpp"
#include "gpm/query.hpp"
#include "test_graphs.hpp"

namespace gpm {
namespace {

TEST(ParseQuery, QuadShape) {
  ConjunctiveQuery cq = testing::quad_query();
  EXPECT_EQ(cq.variable_count(), 4u);
  EXPECT_EQ(cq.predicates.size(), 4u);
  EXPECT_EQ(cq.variables, (std::vector<std::string>{"V1", "V2", "V3", "V4"}));
  EXPECT_EQ(cq.predicates[2], (Predicate{3, "*", 2}));
}

TEST(ParseQuery, SingleEdge) {
  ConjunctiveQuery cq = parse_query("X * Y\n");
  EXPECT_EQ(cq.variable_count(), 2u);
  EXPECT_EQ(cq.predicates.size(), 1u);
}

TEST(ParseQuery, VShape) {
  ConjunctiveQuery cq = testing::v_query();
  EXPECT_EQ(cq.variable_count(), 5u);
  EXPECT_EQ(cq.predicates.size(), 4u);
}

TEST(ParseQuery, Errors) {
  EXPECT_THROW(parse_query("X *\n"), ParseError);
  EXPECT_THROW(parse_query("# only a comment\n"), ParseError);
  EXPECT_THROW(parse_query(""), ParseError);
}

TEST(ResolveLabels, WildcardKnownAndUnknown) {
  Graph g = parse_graph("A x B\nA y C\n");
  ConjunctiveQuery cq = parse_query("U * V\nU x V\nU z V\n");
  auto labels = resolve_labels(cq, g);
  EXPECT_EQ(labels[0], kWildcardLabel);
  EXPECT_EQ(labels[1], LabelId{0});
  EXPECT_EQ(labels[2], kUnknownLabel);
}

TEST(Compile, QuadWithoutRedundancy) {
  QueryExecutionPlan qep = compile(testing::quad_query(), false);
  ASSERT_EQ(qep.ops.size(), 4u);
  EXPECT_EQ(qep.ops[0],
            (PlanOp{OpKind::kUnbound, 0, Addressing::kBroadcast}));
  EXPECT_EQ(qep.ops[1],
            (PlanOp{OpKind::kVertexBoundSrc, 1, Addressing::kUnicastForward}));
  EXPECT_EQ(qep.ops[2],
            (PlanOp{OpKind::kVertexBoundDst, 2, Addressing::kBroadcast}));
  EXPECT_EQ(qep.ops[3],
            (PlanOp{OpKind::kEdgeBound, 3, Addressing::kUnicastForward}));
  EXPECT_FALSE(qep.needs_reverse());
}

TEST(Compile, QuadWithRedundancy) {
  QueryExecutionPlan qep = compile(testing::quad_query(), true);
  EXPECT_EQ(qep.ops[2].addressing, Addressing::kUnicastReverse);
  EXPECT_EQ(qep.ops[0].addressing, Addressing::kBroadcast);
  EXPECT_EQ(qep.ops[1].addressing, Addressing::kUnicastForward);
  EXPECT_EQ(qep.ops[3].addressing, Addressing::kUnicastForward);
  EXPECT_TRUE(qep.needs_reverse());
}

TEST(Compile, VWithoutRedundancy) {
  QueryExecutionPlan qep = compile(testing::v_query(), false);
  ASSERT_EQ(qep.ops.size(), 4u);
  EXPECT_EQ(qep.ops[0].kind, OpKind::kUnbound);
  EXPECT_EQ(qep.ops[1].kind, OpKind::kVertexBoundSrc);
  EXPECT_EQ(qep.ops[2].kind, OpKind::kVertexBoundDst);
  EXPECT_EQ(qep.ops[2].addressing, Addressing::kBroadcast);
  EXPECT_EQ(qep.ops[3].kind, OpKind::kVertexBoundDst);
  EXPECT_EQ(qep.ops[3].addressing, Addressing::kBroadcast);
}

TEST(Compile, RedundancyLeavesExactlyTheInitialBroadcast) {
  for (const char* text : {testing::kQuadQueryText, testing::kVQueryText,
                           "X * Y\n", "A * B\nB * C\nC * A\n"}) {
    QueryExecutionPlan qep = compile(parse_query(text), true);
    std::size_t broadcasts = 0;
    for (const PlanOp& op : qep.ops) {
      if (op.addressing == Addressing::kBroadcast) ++broadcasts;
    }
    EXPECT_EQ(broadcasts, 1u) << text;
    EXPECT_EQ(qep.ops[0].addressing, Addressing::kBroadcast);
  }
}

TEST(Compile, TriangleEndsEdgeBound) {
  QueryExecutionPlan qep = compile(parse_query("A * B\nB * C\nC * A\n"), false);
  EXPECT_EQ(qep.ops[2].kind, OpKind::kEdgeBound);
}

TEST(Compile, SelfLoopFirstIsUnbound) {
  QueryExecutionPlan qep = compile(parse_query("X * X\n"), false);
  EXPECT_EQ(qep.ops[0].kind, OpKind::kUnbound);
}

TEST(Compile, SelfLoopOnBoundVariableIsEdgeBound) {
  QueryExecutionPlan qep = compile(parse_query("X * Y\nY * Y\n"), false);
  EXPECT_EQ(qep.ops[1].kind, OpKind::kEdgeBound);
}

TEST(Compile, RejectsDisconnectedQueries) {
  EXPECT_THROW(compile(parse_query("A * B\nC * D\n"), false), ConfigError);
  EXPECT_THROW(compile(parse_query("A * B\nC * C\n"), false), ConfigError);
}

TEST(Compile, BindsExactlyTheFreshVariables) {
  QueryExecutionPlan qep = compile(testing::quad_query(), false);
  std::vector<char> bound(qep.query.variable_count(), 0);
  for (const PlanOp& op : qep.ops) {
    const Predicate& pred = qep.query.predicates[op.predicate_index];
    bool src_was = bound[pred.src_var], dst_was = bound[pred.dst_var];
    switch (op.kind) {
      case OpKind::kUnbound:
        EXPECT_FALSE(src_was || dst_was);
        break;
      case OpKind::kVertexBoundSrc:
        EXPECT_TRUE(src_was && !dst_was);
        break;
      case OpKind::kVertexBoundDst:
        EXPECT_TRUE(!src_was && dst_was);
        break;
      case OpKind::kEdgeBound:
        EXPECT_TRUE(src_was && dst_was);
        break;
    }
    bound[pred.src_var] = bound[pred.dst_var] = 1;
  }
}

}  // namespace
}  // namespace gpm
