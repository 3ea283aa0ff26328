#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "gpm/graph.hpp"
#include "gpm/query.hpp"
#include "gpm/types.hpp"

namespace gpm {

// Ground-truth matcher result: complete binding tuples (variable order) as
// a set.
struct OracleResult {
  std::set<std::vector<VertexId>> tuples;

  std::size_t count() const { return tuples.size(); }
};

// Brute-force conjunctive-query matching by backtracking over the
// predicates in order, enumerating the flat edge list at every step. Used
// as the independent check for the engine; deliberately ignorant of
// partitions, routing and message order.
inline OracleResult brute_force(const Graph& graph,
                                const ConjunctiveQuery& cq,
                                Semantics semantics) {
  OracleResult result;
  std::vector<LabelId> labels = resolve_labels(cq, graph);
  std::vector<VertexId> binding(cq.variable_count(), kUnbound);

  auto injective_ok = [&](VertexId value, std::uint32_t var) {
    for (std::uint32_t u = 0; u < binding.size(); ++u) {
      if (u != var && binding[u] == value) return false;
    }
    return true;
  };

  auto rec = [&](auto&& self, std::size_t depth) -> void {
    if (depth == cq.predicates.size()) {
      result.tuples.insert(binding);
      return;
    }
    const Predicate& pred = cq.predicates[depth];
    const LabelId want = labels[depth];
    for (const Edge& e : graph.edges()) {
      if (want != kWildcardLabel && e.label != want) continue;
      if (binding[pred.src_var] != kUnbound &&
          binding[pred.src_var] != e.src) {
        continue;
      }
      if (binding[pred.dst_var] != kUnbound &&
          binding[pred.dst_var] != e.dst) {
        continue;
      }
      if (pred.src_var == pred.dst_var && e.src != e.dst) continue;

      bool bound_src = false, bound_dst = false;
      if (binding[pred.src_var] == kUnbound) {
        if (semantics == Semantics::kInjective &&
            !injective_ok(e.src, pred.src_var)) {
          continue;
        }
        binding[pred.src_var] = e.src;
        bound_src = true;
      }
      if (binding[pred.dst_var] == kUnbound) {
        if (semantics == Semantics::kInjective &&
            !injective_ok(e.dst, pred.dst_var)) {
          if (bound_src) binding[pred.src_var] = kUnbound;
          continue;
        }
        binding[pred.dst_var] = e.dst;
        bound_dst = true;
      }
      self(self, depth + 1);
      if (bound_src) binding[pred.src_var] = kUnbound;
      if (bound_dst) binding[pred.dst_var] = kUnbound;
    }
  };
  rec(rec, 0);
  return result;
}

}  // namespace gpm
