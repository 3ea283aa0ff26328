#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gpm/assignment.hpp"
#include "gpm/error.hpp"
#include "gpm/graph.hpp"
#include "gpm/types.hpp"

namespace gpm {

// (label, neighbor) pair; neighbor is the dst for forward adjacency and the
// src for reverse / by-target adjacency.
using LabeledNeighbor = std::pair<LabelId, VertexId>;

namespace detail {

// Compressed adjacency keyed by a sorted vertex list: entries of key k live
// in entries[offsets[i]..offsets[i+1]) where keys[i] == k, sorted by
// (label, neighbor) so edge-existence is a binary search.
struct AdjacencyIndex {
  std::vector<VertexId> keys;
  std::vector<std::uint64_t> offsets;  // keys.size() + 1
  std::vector<LabeledNeighbor> entries;

  std::span<const LabeledNeighbor> slice(VertexId key) const {
    auto it = std::lower_bound(keys.begin(), keys.end(), key);
    if (it == keys.end() || *it != key) return {};
    std::size_t i = static_cast<std::size_t>(it - keys.begin());
    return {entries.data() + offsets[i],
            static_cast<std::size_t>(offsets[i + 1] - offsets[i])};
  }

  // Builds from (key, label, neighbor) triples.
  static AdjacencyIndex build(std::vector<std::tuple<VertexId, LabelId, VertexId>> rows) {
    std::sort(rows.begin(), rows.end());
    AdjacencyIndex idx;
    idx.entries.reserve(rows.size());
    for (const auto& [key, label, nbr] : rows) {
      if (idx.keys.empty() || idx.keys.back() != key) {
        idx.keys.push_back(key);
        idx.offsets.push_back(idx.entries.size());
      }
      idx.entries.emplace_back(label, nbr);
    }
    idx.offsets.push_back(idx.entries.size());
    return idx;
  }
};

// Narrows a (label, neighbor) slice to one label; the wildcard keeps the
// whole slice and an unknown label matches nothing.
inline std::span<const LabeledNeighbor> label_slice(
    std::span<const LabeledNeighbor> all, LabelId label) {
  if (label == kWildcardLabel) return all;
  if (label == kUnknownLabel) return {};
  auto lo = std::lower_bound(all.begin(), all.end(), label,
                             [](const LabeledNeighbor& e, LabelId l) {
                               return e.first < l;
                             });
  auto hi = std::upper_bound(all.begin(), all.end(), label,
                             [](LabelId l, const LabeledNeighbor& e) {
                               return l < e.first;
                             });
  return {all.data() + (lo - all.begin()),
          static_cast<std::size_t>(hi - lo)};
}

}  // namespace detail

// One graph partition: the forward adjacency of all edges whose source is
// assigned here, an auxiliary by-target view of the same edges (serving
// broadcast scans), and, in redundancy mode, a reverse adjacency of all
// edges whose target is assigned here.
class PartitionStore {
 public:
  PartitionId partition_id() const { return partition_id_; }
  std::size_t local_edge_count() const { return local_edge_count_; }
  bool has_reverse() const { return reverse_.has_value(); }
  std::size_t reverse_edge_count() const {
    return reverse_ ? reverse_->entries.size() : 0;
  }

  // Local out-edges of src matching label, in (label, dst) order.
  // src must be owned by this partition under the forward assignment.
  std::span<const LabeledNeighbor> out_edges_span(VertexId src,
                                                  LabelId label) const {
    check_owned(*fwd_owner_, src, "out_edges");
    return detail::label_slice(forward_.slice(src), label);
  }

  std::vector<LabeledNeighbor> out_edges(VertexId src, LabelId label) const {
    auto s = out_edges_span(src, label);
    return {s.begin(), s.end()};
  }

  // Local in-edges of dst matching label, in (label, src) order. Requires
  // the reverse store; dst must be owned under the reverse assignment.
  std::span<const LabeledNeighbor> in_edges_span(VertexId dst,
                                                 LabelId label) const {
    if (!reverse_) {
      throw RedundancyError(
          "in_edges requires redundancy (no reverse store present)");
    }
    check_owned(*rev_owner_, dst, "in_edges");
    return detail::label_slice(reverse_->slice(dst), label);
  }

  std::vector<LabeledNeighbor> in_edges(VertexId dst, LabelId label) const {
    auto s = in_edges_span(dst, label);
    return {s.begin(), s.end()};
  }

  // All local forward edges targeting dst, as (label, src) pairs. Any
  // partition may be scanned; this is the broadcast-side primitive.
  std::span<const LabeledNeighbor> scan_by_target_span(VertexId dst,
                                                       LabelId label) const {
    return detail::label_slice(by_target_.slice(dst), label);
  }

  std::vector<LabeledNeighbor> scan_by_target(VertexId dst,
                                              LabelId label) const {
    auto s = scan_by_target_span(dst, label);
    return {s.begin(), s.end()};
  }

  // Visits every local forward edge matching label as (src, label, dst).
  template <class F>
  void for_each_local_edge(LabelId label, F&& fn) const {
    for (std::size_t i = 0; i < forward_.keys.size(); ++i) {
      VertexId src = forward_.keys[i];
      std::span<const LabeledNeighbor> all{
          forward_.entries.data() + forward_.offsets[i],
          static_cast<std::size_t>(forward_.offsets[i + 1] -
                                   forward_.offsets[i])};
      for (const LabeledNeighbor& e : detail::label_slice(all, label)) {
        fn(src, e.first, e.second);
      }
    }
  }

  // True iff a local edge (src, label, dst) exists; wildcard = any label.
  bool has_edge(VertexId src, LabelId label, VertexId dst) const {
    check_owned(*fwd_owner_, src, "has_edge");
    auto all = forward_.slice(src);
    if (label == kWildcardLabel) {
      return std::any_of(all.begin(), all.end(),
                         [dst](const LabeledNeighbor& e) {
                           return e.second == dst;
                         });
    }
    if (label == kUnknownLabel) return false;
    return std::binary_search(all.begin(), all.end(),
                              LabeledNeighbor{label, dst});
  }

 private:
  friend class PartitionSetBuilder;

  void check_owned(const std::vector<PartitionId>& owner, VertexId v,
                   const char* op) const {
    if (v >= owner.size() || owner[v] != partition_id_) {
      throw OwnershipError(std::string(op) + ": vertex " + std::to_string(v) +
                           " is not owned by partition " +
                           std::to_string(partition_id_));
    }
  }

  PartitionId partition_id_ = 0;
  std::size_t local_edge_count_ = 0;
  detail::AdjacencyIndex forward_;    // src -> (label, dst)
  detail::AdjacencyIndex by_target_;  // dst -> (label, src), same edges
  std::optional<detail::AdjacencyIndex> reverse_;  // dst -> (label, src)
  std::shared_ptr<const std::vector<PartitionId>> fwd_owner_;
  std::shared_ptr<const std::vector<PartitionId>> rev_owner_;
};

// A full partitioning of one graph: P stores, the assignments that produced
// them and the partition -> node placement. Immutable after construction.
struct PartitionSet {
  std::vector<PartitionStore> partitions;
  Assignment forward_assignment;
  std::optional<Assignment> reverse_assignment;
  std::vector<NodeId> placement;  // partition -> node

  std::uint32_t partition_count() const {
    return static_cast<std::uint32_t>(partitions.size());
  }
  bool redundancy() const { return reverse_assignment.has_value(); }
};

class PartitionSetBuilder {
 public:
  static PartitionSet build(const Graph& graph, Assignment forward,
                            std::optional<Assignment> reverse,
                            std::vector<NodeId> placement) {
    forward.validate();
    if (forward.parts.size() != graph.vertex_count()) {
      throw ConfigError("forward assignment does not cover every vertex");
    }
    if (reverse) {
      reverse->validate();
      if (reverse->parts.size() != graph.vertex_count() ||
          reverse->partition_count != forward.partition_count) {
        throw ConfigError("reverse assignment inconsistent with forward");
      }
    }
    const std::uint32_t p_count = forward.partition_count;
    if (placement.empty()) placement.assign(p_count, 0);
    if (placement.size() != p_count) {
      throw ConfigError("placement must map every partition to a node");
    }

    auto fwd_owner =
        std::make_shared<const std::vector<PartitionId>>(forward.parts);
    std::shared_ptr<const std::vector<PartitionId>> rev_owner;
    if (reverse) {
      rev_owner =
          std::make_shared<const std::vector<PartitionId>>(reverse->parts);
    }

    using Row = std::tuple<VertexId, LabelId, VertexId>;
    std::vector<std::vector<Row>> fwd_rows(p_count), tgt_rows(p_count),
        rev_rows(p_count);
    for (const Edge& e : graph.edges()) {
      PartitionId fp = forward.parts[e.src];
      fwd_rows[fp].emplace_back(e.src, e.label, e.dst);
      tgt_rows[fp].emplace_back(e.dst, e.label, e.src);
      if (reverse) {
        rev_rows[reverse->parts[e.dst]].emplace_back(e.dst, e.label, e.src);
      }
    }

    PartitionSet set;
    set.partitions.resize(p_count);
    for (std::uint32_t p = 0; p < p_count; ++p) {
      PartitionStore& store = set.partitions[p];
      store.partition_id_ = p;
      store.local_edge_count_ = fwd_rows[p].size();
      store.forward_ = detail::AdjacencyIndex::build(std::move(fwd_rows[p]));
      store.by_target_ = detail::AdjacencyIndex::build(std::move(tgt_rows[p]));
      if (reverse) {
        store.reverse_ = detail::AdjacencyIndex::build(std::move(rev_rows[p]));
      }
      store.fwd_owner_ = fwd_owner;
      store.rev_owner_ = rev_owner;
    }
    set.forward_assignment = std::move(forward);
    set.reverse_assignment = std::move(reverse);
    set.placement = std::move(placement);
    return set;
  }
};

inline PartitionSet build_partitions(const Graph& graph, Assignment forward,
                                     std::optional<Assignment> reverse = {},
                                     std::vector<NodeId> placement = {}) {
  return PartitionSetBuilder::build(graph, std::move(forward),
                                    std::move(reverse), std::move(placement));
}

// Round-robin partition -> node placement.
inline std::vector<NodeId> round_robin_placement(std::uint32_t partitions,
                                                 std::uint32_t nodes) {
  if (nodes == 0) throw ConfigError("node count must be >= 1");
  std::vector<NodeId> placement(partitions);
  for (std::uint32_t p = 0; p < partitions; ++p) placement[p] = p % nodes;
  return placement;
}

}  // namespace gpm
