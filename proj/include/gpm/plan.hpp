#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gpm/error.hpp"
#include "gpm/query.hpp"
#include "gpm/types.hpp"

namespace gpm {

enum class OpKind : std::uint8_t {
  kUnbound,         // neither endpoint bound; scans all local edges
  kVertexBoundSrc,  // source bound; expands forward
  kVertexBoundDst,  // target bound; expands backward
  kEdgeBound,       // both bound; existence check
};

enum class Addressing : std::uint8_t {
  kBroadcast,        // one message per partition
  kUnicastForward,   // routed by the bound source vertex
  kUnicastReverse,   // routed by the bound target vertex (redundancy only)
};

inline const char* op_kind_name(OpKind k) {
  switch (k) {
    case OpKind::kUnbound: return "unbound";
    case OpKind::kVertexBoundSrc: return "vertex-bound-src";
    case OpKind::kVertexBoundDst: return "vertex-bound-dst";
    case OpKind::kEdgeBound: return "edge-bound";
  }
  return "?";
}

struct PlanOp {
  OpKind kind;
  std::uint32_t predicate_index;
  Addressing addressing;

  bool operator==(const PlanOp&) const = default;
};

// Compiled query execution plan: one operator per edge predicate, in the
// author-given predicate order.
struct QueryExecutionPlan {
  ConjunctiveQuery query;
  std::vector<PlanOp> ops;
  Semantics semantics = Semantics::kHomomorphism;
  bool redundancy = false;  // addressing was compiled for this mode

  bool needs_reverse() const {
    for (const PlanOp& op : ops) {
      if (op.addressing == Addressing::kUnicastReverse) return true;
    }
    return false;
  }
};

// Assigns operator kinds by the bound-variable recurrence: a variable is
// bound at op i iff it appears in some predicate j < i. Addressing follows
// the kind; target-bound expansion broadcasts unless redundancy makes a
// reverse unicast possible.
inline QueryExecutionPlan compile(ConjunctiveQuery cq, bool redundancy,
                                  Semantics semantics = Semantics::kHomomorphism) {
  QueryExecutionPlan qep;
  qep.semantics = semantics;
  qep.redundancy = redundancy;
  qep.ops.reserve(cq.predicates.size());

  std::vector<char> bound(cq.variable_count(), 0);
  for (std::uint32_t i = 0; i < cq.predicates.size(); ++i) {
    const Predicate& pred = cq.predicates[i];
    bool src_bound = bound[pred.src_var];
    bool dst_bound = bound[pred.dst_var];

    PlanOp op{};
    op.predicate_index = i;
    if (!src_bound && !dst_bound) {
      if (i != 0) {
        throw ConfigError(
            "unsupported query: predicate " + std::to_string(i + 1) +
            " shares no variable with the preceding predicates");
      }
      op.kind = OpKind::kUnbound;
      op.addressing = Addressing::kBroadcast;
    } else if (src_bound && dst_bound) {
      op.kind = OpKind::kEdgeBound;
      op.addressing = Addressing::kUnicastForward;
    } else if (src_bound) {
      op.kind = OpKind::kVertexBoundSrc;
      op.addressing = Addressing::kUnicastForward;
    } else {
      op.kind = OpKind::kVertexBoundDst;
      op.addressing = redundancy ? Addressing::kUnicastReverse
                                 : Addressing::kBroadcast;
    }
    qep.ops.push_back(op);

    bound[pred.src_var] = 1;
    bound[pred.dst_var] = 1;
  }

  qep.query = std::move(cq);
  return qep;
}

}  // namespace gpm
