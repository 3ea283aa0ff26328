#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gpm/clock.hpp"
#include "gpm/error.hpp"
#include "gpm/graph.hpp"
#include "gpm/partition_store.hpp"
#include "gpm/partitioner.hpp"
#include "gpm/types.hpp"

namespace gpm {

// The three routing-table designs. Compute derives the partition from the
// vertex id alone (0 stored entries), Lookup stores one entry per vertex,
// Range stores one exclusive upper bound per partition over relabeled
// virtual ids.
struct ComputeTable {
  std::uint32_t partition_count;
};

struct LookupTable {
  std::vector<PartitionId> parts;
};

struct RangeTable {
  std::vector<VertexId> bounds;
};

using RoutingTable = std::variant<ComputeTable, LookupTable, RangeTable>;

inline PartitionId route(const RoutingTable& table, VertexId v) {
  if (const auto* c = std::get_if<ComputeTable>(&table)) {
    return static_cast<PartitionId>(v % c->partition_count);
  }
  if (const auto* l = std::get_if<LookupTable>(&table)) {
    if (v >= l->parts.size()) {
      throw RoutingError("route: vertex " + std::to_string(v) +
                         " outside the lookup table");
    }
    return l->parts[v];
  }
  const auto& r = std::get<RangeTable>(table);
  auto it = std::upper_bound(r.bounds.begin(), r.bounds.end(), v);
  if (it == r.bounds.end()) {
    throw RoutingError("route: vertex " + std::to_string(v) +
                       " outside the range table");
  }
  return static_cast<PartitionId>(it - r.bounds.begin());
}

// Stored entries: 0 (Compute), |V| (Lookup) or P (Range).
inline std::size_t entry_count(const RoutingTable& table) {
  if (std::holds_alternative<ComputeTable>(table)) return 0;
  if (const auto* l = std::get_if<LookupTable>(&table)) return l->parts.size();
  return std::get<RangeTable>(table).bounds.size();
}

enum class Design { kCompute, kLookupHash, kLookupKway, kHybrid };

inline const char* design_name(Design d) {
  switch (d) {
    case Design::kCompute: return "compute";
    case Design::kLookupHash: return "lookup-hash";
    case Design::kLookupKway: return "lookup-kway";
    case Design::kHybrid: return "hybrid";
  }
  return "?";
}

inline Design parse_design(const std::string& name) {
  if (name == "compute") return Design::kCompute;
  if (name == "lookup-hash") return Design::kLookupHash;
  if (name == "lookup-kway") return Design::kLookupKway;
  if (name == "hybrid") return Design::kHybrid;
  throw ConfigError("unknown design '" + name +
                    "' (expected compute|lookup-hash|lookup-kway|hybrid)");
}

enum class RouteDirection { kForward, kReverse };

// Routing tables for one execution: forward always, reverse only in
// redundancy mode, plus the virtual->original dictionary for range tables.
struct RoutingPair {
  RoutingTable forward;
  std::optional<RoutingTable> reverse;
  std::optional<std::vector<VertexId>> dictionary;

  const RoutingTable& table(RouteDirection dir) const {
    if (dir == RouteDirection::kForward) return forward;
    if (!reverse) {
      throw RedundancyError("reverse routing requires redundancy");
    }
    return *reverse;
  }
};

// route() plus a monotonic-clock sample around the table access only; the
// elapsed time is added to the caller's accumulator (one per worker).
template <class ClockT = SteadyClock>
inline std::pair<PartitionId, std::uint64_t> timed_route(
    const RoutingPair& pair, VertexId v, RouteDirection dir,
    std::uint64_t& accum_ns, const ClockT& clock = {}) {
  const RoutingTable& table = pair.table(dir);
  std::uint64_t t0 = clock.now_ns();
  PartitionId part = route(table, v);
  std::uint64_t elapsed = clock.now_ns() - t0;
  accum_ns += elapsed;
  return {part, elapsed};
}

// Everything one design instantiates for a graph: the routing tables, the
// partition stores and the graph the engine actually runs on (the virtual
// graph for hybrid, the input graph otherwise).
struct BuiltDesign {
  Design design;
  RoutingPair routing;
  PartitionSet partitions;
  Graph effective_graph;
};

// Builds tables + partition stores for a design. Redundancy keys the
// reverse stores by edge target using the same vertex->partition map (for
// hash designs dst mod P; for kway/hybrid the kway assignment reused), so
// one dictionary suffices for hybrid.
inline BuiltDesign build_pair(Design design, const Graph& graph,
                              std::uint32_t partition_count, double epsilon,
                              std::uint64_t seed, bool redundancy,
                              std::uint32_t node_count = 1) {
  BuiltDesign out;
  out.design = design;
  std::vector<NodeId> placement =
      round_robin_placement(partition_count, node_count);

  switch (design) {
    case Design::kCompute: {
      Assignment fwd = hash_assign(graph.vertex_count(), partition_count);
      std::optional<Assignment> rev;
      if (redundancy) rev = fwd;
      out.partitions =
          build_partitions(graph, fwd, std::move(rev), std::move(placement));
      out.routing.forward = ComputeTable{partition_count};
      if (redundancy) out.routing.reverse = ComputeTable{partition_count};
      out.effective_graph = graph;
      break;
    }
    case Design::kLookupHash:
    case Design::kLookupKway: {
      Assignment fwd =
          design == Design::kLookupHash
              ? hash_assign(graph.vertex_count(), partition_count)
              : kway_assign(graph, partition_count, epsilon, seed);
      std::optional<Assignment> rev;
      if (redundancy) rev = fwd;
      out.routing.forward = LookupTable{fwd.parts};
      if (redundancy) out.routing.reverse = LookupTable{fwd.parts};
      out.partitions =
          build_partitions(graph, std::move(fwd), std::move(rev),
                           std::move(placement));
      out.effective_graph = graph;
      break;
    }
    case Design::kHybrid: {
      Assignment orig = kway_assign(graph, partition_count, epsilon, seed);
      RelabelResult relabel = relabel_virtual(graph, orig);
      // Over virtual ids every partition owns a dense range; the virtual
      // assignment is exactly what the range table expresses.
      Assignment virt;
      virt.partition_count = partition_count;
      virt.parts.resize(graph.vertex_count());
      for (std::size_t v = 0; v < graph.vertex_count(); ++v) {
        auto it = std::upper_bound(relabel.bounds.begin(),
                                   relabel.bounds.end(),
                                   static_cast<VertexId>(v));
        virt.parts[v] = static_cast<PartitionId>(it - relabel.bounds.begin());
      }
      std::optional<Assignment> rev;
      if (redundancy) rev = virt;
      out.partitions =
          build_partitions(relabel.virtual_graph, virt, std::move(rev),
                           std::move(placement));
      out.routing.forward = RangeTable{relabel.bounds};
      if (redundancy) out.routing.reverse = RangeTable{relabel.bounds};
      out.routing.dictionary = std::move(relabel.dictionary);
      out.effective_graph = std::move(relabel.virtual_graph);
      break;
    }
  }
  return out;
}

}  // namespace gpm
