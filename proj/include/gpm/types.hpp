#pragma once

#include <compare>
#include <cstdint>
#include <limits>

namespace gpm {

using VertexId = std::uint32_t;
using LabelId = std::uint32_t;
using PartitionId = std::uint32_t;
using NodeId = std::uint32_t;

// Sentinel for an unbound variable slot in a matching state.
inline constexpr VertexId kUnbound = std::numeric_limits<VertexId>::max();

// Label sentinels used by queries. A wildcard matches every label; an
// unresolved label (token not present in the graph's dictionary) matches
// nothing. Neither value is ever stored in a graph.
inline constexpr LabelId kWildcardLabel = std::numeric_limits<LabelId>::max();
inline constexpr LabelId kUnknownLabel = std::numeric_limits<LabelId>::max() - 1;

struct Edge {
  VertexId src;
  LabelId label;
  VertexId dst;

  auto operator<=>(const Edge&) const = default;
};

enum class Semantics {
  kHomomorphism,  // distinct variables may bind the same vertex
  kInjective,     // bound vertices are pairwise distinct
};

}  // namespace gpm
