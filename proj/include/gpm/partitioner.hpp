#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <tuple>
#include <vector>

#include "gpm/assignment.hpp"
#include "gpm/error.hpp"
#include "gpm/graph.hpp"
#include "gpm/types.hpp"

namespace gpm {

// Locality-agnostic assignment: parts[v] = v mod P.
inline Assignment hash_assign(std::size_t vertex_count, std::uint32_t p) {
  if (p == 0) throw ConfigError("partition count must be >= 1");
  Assignment a;
  a.partition_count = p;
  a.parts.resize(vertex_count);
  for (std::size_t v = 0; v < vertex_count; ++v) {
    a.parts[v] = static_cast<PartitionId>(v % p);
  }
  return a;
}

// Number of edges whose endpoints land in different partitions. Parallel
// edges count individually.
inline std::uint64_t edge_cut(const Graph& graph, const Assignment& a) {
  if (a.parts.size() != graph.vertex_count()) {
    throw ConfigError("assignment does not cover every vertex");
  }
  std::uint64_t cut = 0;
  for (const Edge& e : graph.edges()) {
    if (a.parts[e.src] != a.parts[e.dst]) ++cut;
  }
  return cut;
}

// max_p |part p| * P / |V|; 1.0 is a perfect split.
inline double balance(const Assignment& a) {
  if (a.parts.empty()) return 1.0;
  std::vector<std::uint64_t> sizes(a.partition_count, 0);
  for (PartitionId p : a.parts) ++sizes[p];
  std::uint64_t max_size = *std::max_element(sizes.begin(), sizes.end());
  return double(max_size) * a.partition_count / double(a.parts.size());
}

// Virtual-id relabeling for the hybrid (range) routing design: vertices are
// renumbered by (partition, original id) so each partition owns a dense id
// range.
struct RelabelResult {
  Graph virtual_graph;
  std::vector<VertexId> dictionary;  // virtual -> original
  std::vector<VertexId> bounds;      // per partition, exclusive upper bound
};

inline RelabelResult relabel_virtual(const Graph& graph, const Assignment& a) {
  if (a.parts.size() != graph.vertex_count()) {
    throw ConfigError("assignment does not cover every vertex");
  }
  const std::size_t n = graph.vertex_count();
  RelabelResult r;
  r.dictionary.resize(n);
  std::iota(r.dictionary.begin(), r.dictionary.end(), 0);
  std::stable_sort(r.dictionary.begin(), r.dictionary.end(),
                   [&](VertexId x, VertexId y) {
                     return std::pair(a.parts[x], x) < std::pair(a.parts[y], y);
                   });

  std::vector<VertexId> virt(n);
  for (std::size_t v = 0; v < n; ++v) virt[r.dictionary[v]] = VertexId(v);

  std::vector<VertexId> sizes(a.partition_count, 0);
  for (PartitionId p : a.parts) ++sizes[p];
  r.bounds.resize(a.partition_count);
  VertexId acc = 0;
  for (std::uint32_t p = 0; p < a.partition_count; ++p) {
    acc += sizes[p];
    r.bounds[p] = acc;
  }

  for (std::size_t v = 0; v < n; ++v) {
    r.virtual_graph.intern_vertex(graph.vertex_token(r.dictionary[v]));
  }
  for (std::size_t l = 0; l < graph.label_count(); ++l) {
    r.virtual_graph.intern_label(graph.label_token(LabelId(l)));
  }
  for (const Edge& e : graph.edges()) {
    r.virtual_graph.add_edge(virt[e.src], e.label, virt[e.dst]);
  }
  return r;
}

namespace kway_detail {

// Undirected weighted working graph used across coarsening levels. Edge
// weights count the original triples between a vertex pair (either
// direction); vertex weights count the original vertices merged in.
struct LevelGraph {
  std::uint32_t n = 0;
  std::vector<std::uint64_t> xadj;
  std::vector<std::uint32_t> adjncy;
  std::vector<std::uint32_t> adjwgt;
  std::vector<std::uint32_t> vwgt;
  std::uint64_t total_weight = 0;

  static LevelGraph from_pairs(
      std::uint32_t n, std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>>& rows,
      std::vector<std::uint32_t> vertex_weights) {
    std::sort(rows.begin(), rows.end());
    LevelGraph g;
    g.n = n;
    g.vwgt = std::move(vertex_weights);
    g.total_weight = std::accumulate(g.vwgt.begin(), g.vwgt.end(), std::uint64_t{0});
    g.xadj.assign(n + 1, 0);
    std::size_t unique = 0;
    for (std::size_t i = 0; i < rows.size();) {
      std::size_t j = i;
      while (j < rows.size() &&
             std::get<0>(rows[j]) == std::get<0>(rows[i]) &&
             std::get<1>(rows[j]) == std::get<1>(rows[i])) {
        ++j;
      }
      ++unique;
      i = j;
    }
    g.adjncy.reserve(unique);
    g.adjwgt.reserve(unique);
    for (std::size_t i = 0; i < rows.size();) {
      auto [u, v, w] = rows[i];
      std::uint64_t wsum = 0;
      std::size_t j = i;
      while (j < rows.size() && std::get<0>(rows[j]) == u &&
             std::get<1>(rows[j]) == v) {
        wsum += std::get<2>(rows[j]);
        ++j;
      }
      g.adjncy.push_back(v);
      g.adjwgt.push_back(static_cast<std::uint32_t>(wsum));
      ++g.xadj[u + 1];
      i = j;
    }
    for (std::uint32_t v = 0; v < n; ++v) g.xadj[v + 1] += g.xadj[v];
    return g;
  }
};

inline LevelGraph build_base(const Graph& graph) {
  std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>> rows;
  rows.reserve(graph.edge_count() * 2);
  for (const Edge& e : graph.edges()) {
    if (e.src == e.dst) continue;  // self-loops never cross a cut
    rows.emplace_back(e.src, e.dst, 1);
    rows.emplace_back(e.dst, e.src, 1);
  }
  return LevelGraph::from_pairs(
      static_cast<std::uint32_t>(graph.vertex_count()), rows,
      std::vector<std::uint32_t>(graph.vertex_count(), 1));
}

inline void shuffle(std::vector<std::uint32_t>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[rng() % i]);
  }
}

// Randomized heavy-edge matching. Returns the coarse vertex map and count,
// or zero matched pairs when no progress is possible.
struct MatchResult {
  std::vector<std::uint32_t> cmap;
  std::uint32_t coarse_n = 0;
  std::uint32_t pairs = 0;
};

inline MatchResult heavy_edge_matching(const LevelGraph& g,
                                       std::mt19937_64& rng) {
  constexpr std::uint32_t kUnmatched = 0xffffffffu;
  std::vector<std::uint32_t> match(g.n, kUnmatched);
  std::vector<std::uint32_t> order(g.n);
  std::iota(order.begin(), order.end(), 0);
  shuffle(order, rng);

  MatchResult r;
  for (std::uint32_t v : order) {
    if (match[v] != kUnmatched) continue;
    std::uint32_t best = kUnmatched;
    std::uint32_t best_w = 0;
    for (std::uint64_t i = g.xadj[v]; i < g.xadj[v + 1]; ++i) {
      std::uint32_t u = g.adjncy[i];
      if (u == v || match[u] != kUnmatched) continue;
      if (best == kUnmatched || g.adjwgt[i] > best_w ||
          (g.adjwgt[i] == best_w && u < best)) {
        best = u;
        best_w = g.adjwgt[i];
      }
    }
    if (best != kUnmatched) {
      match[v] = best;
      match[best] = v;
      ++r.pairs;
    } else {
      match[v] = v;
    }
  }

  r.cmap.assign(g.n, kUnmatched);
  for (std::uint32_t v = 0; v < g.n; ++v) {
    if (r.cmap[v] != kUnmatched) continue;
    r.cmap[v] = r.coarse_n;
    r.cmap[match[v]] = r.coarse_n;
    ++r.coarse_n;
  }
  return r;
}

inline LevelGraph coarsen(const LevelGraph& g, const MatchResult& m) {
  std::vector<std::uint32_t> vwgt(m.coarse_n, 0);
  for (std::uint32_t v = 0; v < g.n; ++v) vwgt[m.cmap[v]] += g.vwgt[v];
  std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>> rows;
  rows.reserve(g.adjncy.size());
  for (std::uint32_t v = 0; v < g.n; ++v) {
    for (std::uint64_t i = g.xadj[v]; i < g.xadj[v + 1]; ++i) {
      std::uint32_t cu = m.cmap[v];
      std::uint32_t cv = m.cmap[g.adjncy[i]];
      if (cu != cv) rows.emplace_back(cu, cv, g.adjwgt[i]);
    }
  }
  return LevelGraph::from_pairs(m.coarse_n, rows, std::move(vwgt));
}

inline std::uint64_t cut_of(const LevelGraph& g,
                            const std::vector<PartitionId>& parts) {
  std::uint64_t cut = 0;
  for (std::uint32_t v = 0; v < g.n; ++v) {
    for (std::uint64_t i = g.xadj[v]; i < g.xadj[v + 1]; ++i) {
      if (g.adjncy[i] > v && parts[g.adjncy[i]] != parts[v]) {
        cut += g.adjwgt[i];
      }
    }
  }
  return cut;
}

// Weighted connection of v to every adjacent part, as a sparse list.
inline void part_connections(const LevelGraph& g,
                             const std::vector<PartitionId>& parts,
                             std::uint32_t v,
                             std::vector<std::pair<PartitionId, std::uint64_t>>& out) {
  out.clear();
  for (std::uint64_t i = g.xadj[v]; i < g.xadj[v + 1]; ++i) {
    PartitionId q = parts[g.adjncy[i]];
    bool found = false;
    for (auto& [part, w] : out) {
      if (part == q) {
        w += g.adjwgt[i];
        found = true;
        break;
      }
    }
    if (!found) out.emplace_back(q, g.adjwgt[i]);
  }
}

// Greedy graph growing from P seeds; several restarts, best balanced cut
// wins. Deterministic given the rng state.
inline std::vector<PartitionId> grow_initial(const LevelGraph& g,
                                             std::uint32_t p_count,
                                             std::uint64_t lmax,
                                             std::mt19937_64& rng) {
  constexpr PartitionId kNone = 0xffffffffu;
  const std::uint32_t attempts =
      g.n <= 8 ? g.n : 8;

  std::vector<PartitionId> best_parts;
  bool best_feasible = false;
  std::uint64_t best_cut = 0;

  std::vector<std::pair<PartitionId, std::uint64_t>> conn_scratch;
  for (std::uint32_t attempt = 0; attempt < attempts; ++attempt) {
    std::vector<PartitionId> parts(g.n, kNone);
    std::vector<std::uint64_t> weight(p_count, 0);
    std::uint64_t remaining = g.total_weight;
    std::uint32_t assigned = 0;

    for (std::uint32_t p = 0; p < p_count && assigned < g.n; ++p) {
      std::uint64_t target = (remaining + (p_count - p) - 1) / (p_count - p);
      // Seed: enumerated for tiny graphs, random otherwise.
      std::uint32_t seed_v = kNone;
      if (g.n <= 8 && p == 0) {
        seed_v = attempt;
        if (parts[seed_v] != kNone) seed_v = kNone;
      }
      if (seed_v == kNone) {
        std::uint32_t tries = 0;
        do {
          seed_v = static_cast<std::uint32_t>(rng() % g.n);
        } while (parts[seed_v] != kNone && ++tries < 4 * g.n);
        if (parts[seed_v] != kNone) {
          for (std::uint32_t v = 0; v < g.n; ++v) {
            if (parts[v] == kNone) {
              seed_v = v;
              break;
            }
          }
        }
      }

      // conn[v]: weighted connection of unassigned v to part p.
      std::vector<std::uint64_t> conn(g.n, 0);
      std::set<std::pair<std::uint64_t, std::uint32_t>,
               std::greater<>> frontier;  // (conn, ~v) -- see note below
      auto push = [&](std::uint32_t v) {
        // Invert the id so ties on conn pick the LOWER vertex id first.
        frontier.emplace(conn[v], ~v);
      };
      auto grow_vertex = [&](std::uint32_t v) {
        parts[v] = p;
        weight[p] += g.vwgt[v];
        ++assigned;
        for (std::uint64_t i = g.xadj[v]; i < g.xadj[v + 1]; ++i) {
          std::uint32_t u = g.adjncy[i];
          if (parts[u] != kNone) continue;
          frontier.erase({conn[u], ~u});
          conn[u] += g.adjwgt[i];
          push(u);
        }
      };

      grow_vertex(seed_v);
      while (weight[p] < target && assigned < g.n) {
        std::uint32_t next = kNone;
        // Highest-connection frontier vertex that fits under lmax.
        for (auto it = frontier.begin(); it != frontier.end();) {
          std::uint32_t v = ~it->second;
          if (parts[v] != kNone) {
            it = frontier.erase(it);
            continue;
          }
          if (weight[p] + g.vwgt[v] <= lmax) {
            next = v;
            frontier.erase(it);
            break;
          }
          ++it;
        }
        if (next == kNone) {
          // Disconnected remainder: jump to the smallest unassigned vertex
          // if the part is still far from target, otherwise stop the part.
          if (frontier.empty()) {
            for (std::uint32_t v = 0; v < g.n; ++v) {
              if (parts[v] == kNone && weight[p] + g.vwgt[v] <= lmax) {
                next = v;
                break;
              }
            }
          }
          if (next == kNone) break;
        }
        grow_vertex(next);
      }
      remaining = 0;
      for (std::uint32_t v = 0; v < g.n; ++v) {
        if (parts[v] == kNone) remaining += g.vwgt[v];
      }
    }

    // Leftovers: most connected part that fits, else the lightest.
    for (std::uint32_t v = 0; v < g.n; ++v) {
      if (parts[v] != kNone) continue;
      part_connections(g, parts, v, conn_scratch);
      PartitionId dest = kNone;
      std::uint64_t dest_conn = 0;
      for (auto [q, w] : conn_scratch) {
        if (q == kNone) continue;
        if (weight[q] + g.vwgt[v] > lmax) continue;
        if (dest == kNone || w > dest_conn || (w == dest_conn && q < dest)) {
          dest = q;
          dest_conn = w;
        }
      }
      if (dest == kNone) {
        dest = 0;
        for (std::uint32_t q = 1; q < p_count; ++q) {
          if (weight[q] < weight[dest]) dest = q;
        }
      }
      parts[v] = dest;
      weight[dest] += g.vwgt[v];
      ++assigned;
    }

    bool feasible =
        *std::max_element(weight.begin(), weight.end()) <= lmax;
    std::uint64_t cut = cut_of(g, parts);
    if (best_parts.empty() || std::pair(!feasible, cut) <
                                  std::pair(!best_feasible, best_cut)) {
      best_parts = std::move(parts);
      best_feasible = feasible;
      best_cut = cut;
    }
  }
  return best_parts;
}

// Moves vertices out of overfull parts until every part fits under lmax
// (always possible at unit vertex weights; best effort on coarse levels).
inline void rebalance(const LevelGraph& g, std::vector<PartitionId>& parts,
                      std::uint32_t p_count, std::uint64_t lmax) {
  std::vector<std::uint64_t> weight(p_count, 0);
  for (std::uint32_t v = 0; v < g.n; ++v) weight[parts[v]] += g.vwgt[v];

  std::vector<std::pair<PartitionId, std::uint64_t>> conn;
  for (std::uint64_t guard = 0; guard < std::uint64_t(g.n) * 4 + 16; ++guard) {
    PartitionId over = p_count;
    for (std::uint32_t q = 0; q < p_count; ++q) {
      if (weight[q] > lmax && (over == p_count || weight[q] > weight[over])) {
        over = q;
      }
    }
    if (over == p_count) return;

    PartitionId dest = over;
    for (std::uint32_t q = 0; q < p_count; ++q) {
      if (q != over && (dest == over || weight[q] < weight[dest])) dest = q;
    }

    // Cheapest vertex of the overfull part to shed: max gain, tie low id.
    std::uint32_t best_v = 0xffffffffu;
    std::int64_t best_gain = 0;
    for (std::uint32_t v = 0; v < g.n; ++v) {
      if (parts[v] != over) continue;
      if (weight[dest] + g.vwgt[v] > lmax) continue;
      part_connections(g, parts, v, conn);
      std::int64_t to_dest = 0, to_cur = 0;
      for (auto [q, w] : conn) {
        if (q == dest) to_dest = std::int64_t(w);
        if (q == over) to_cur = std::int64_t(w);
      }
      std::int64_t gain = to_dest - to_cur;
      if (best_v == 0xffffffffu || gain > best_gain) {
        best_v = v;
        best_gain = gain;
      }
    }
    if (best_v == 0xffffffffu) return;  // nothing fits; give up at this level
    weight[over] -= g.vwgt[best_v];
    weight[dest] += g.vwgt[best_v];
    parts[best_v] = dest;
  }
}

// One boundary Fiduccia-Mattheyses refinement pass: gain-bucket extraction,
// balance-respecting tentative moves, best-prefix rollback. Returns the cut
// improvement (0 when the pass found none).
inline std::uint64_t fm_pass(const LevelGraph& g,
                             std::vector<PartitionId>& parts,
                             std::uint32_t p_count, std::uint64_t lmax) {
  std::vector<std::uint64_t> weight(p_count, 0);
  for (std::uint32_t v = 0; v < g.n; ++v) weight[parts[v]] += g.vwgt[v];

  // Gain buckets: ordered by gain descending, vertex id ascending inside a
  // bucket so ties break toward the lower id.
  std::map<std::int64_t, std::set<std::uint32_t>, std::greater<>> buckets;
  std::vector<std::int64_t> cur_gain(g.n, 0);
  std::vector<PartitionId> cur_dest(g.n, 0);
  std::vector<char> in_queue(g.n, 0), moved(g.n, 0);

  std::vector<std::pair<PartitionId, std::uint64_t>> conn;
  // Best move of v to an adjacent part; when feasible_only is set, only
  // balance-respecting destinations qualify.
  auto best_move_impl = [&](std::uint32_t v, bool feasible_only) -> bool {
    part_connections(g, parts, v, conn);
    std::uint64_t to_cur = 0;
    for (auto [q, w] : conn) {
      if (q == parts[v]) to_cur = w;
    }
    bool found = false;
    std::int64_t gain = 0;
    PartitionId dest = 0;
    for (auto [q, w] : conn) {
      if (q == parts[v]) continue;
      if (feasible_only && (weight[q] + g.vwgt[v] > lmax ||
                            weight[parts[v]] <= g.vwgt[v])) {
        continue;
      }
      std::int64_t cand = std::int64_t(w) - std::int64_t(to_cur);
      if (!found || cand > gain || (cand == gain && q < dest)) {
        found = true;
        gain = cand;
        dest = q;
      }
    }
    if (found) {
      cur_gain[v] = gain;
      cur_dest[v] = dest;
    }
    return found;
  };
  auto best_move = [&](std::uint32_t v) { return best_move_impl(v, false); };

  auto enqueue = [&](std::uint32_t v) {
    if (moved[v] || in_queue[v]) return;
    if (best_move(v)) {
      buckets[cur_gain[v]].insert(v);
      in_queue[v] = 1;
    }
  };
  auto dequeue = [&](std::uint32_t v) {
    if (!in_queue[v]) return;
    auto it = buckets.find(cur_gain[v]);
    it->second.erase(v);
    if (it->second.empty()) buckets.erase(it);
    in_queue[v] = 0;
  };

  for (std::uint32_t v = 0; v < g.n; ++v) enqueue(v);

  struct Move {
    std::uint32_t v;
    PartitionId from, to;
    std::int64_t gain;
  };
  std::vector<Move> log;
  std::int64_t delta = 0, best_delta = 0;
  std::size_t best_prefix = 0;

  std::uint64_t extraction_guard = std::uint64_t(g.n) * 8 + 64;
  while (!buckets.empty() && extraction_guard-- > 0) {
    auto& [gain, bucket] = *buckets.begin();
    std::uint32_t v = *bucket.begin();
    dequeue(v);

    std::int64_t stored_gain = cur_gain[v];
    if (!best_move_impl(v, true)) continue;  // no feasible move this pass
    if (cur_gain[v] != stored_gain) {
      // The best feasible move is weaker than the bucket promised;
      // re-queue at the corrected gain and pick again.
      buckets[cur_gain[v]].insert(v);
      in_queue[v] = 1;
      continue;
    }

    PartitionId from = parts[v], to = cur_dest[v];
    parts[v] = to;
    weight[from] -= g.vwgt[v];
    weight[to] += g.vwgt[v];
    moved[v] = 1;
    delta -= cur_gain[v];
    log.push_back({v, from, to, cur_gain[v]});
    if (delta < best_delta) {
      best_delta = delta;
      best_prefix = log.size();
    }

    for (std::uint64_t i = g.xadj[v]; i < g.xadj[v + 1]; ++i) {
      std::uint32_t u = g.adjncy[i];
      if (moved[u]) continue;
      dequeue(u);
      enqueue(u);
    }
  }

  // Roll back to the best prefix.
  for (std::size_t i = log.size(); i-- > best_prefix;) {
    parts[log[i].v] = log[i].from;
  }
  return static_cast<std::uint64_t>(-best_delta);
}

inline void refine(const LevelGraph& g, std::vector<PartitionId>& parts,
                   std::uint32_t p_count, std::uint64_t lmax) {
  for (int pass = 0; pass < 10; ++pass) {
    if (fm_pass(g, parts, p_count, lmax) == 0) break;
  }
}

}  // namespace kway_detail

// Simplified multilevel k-way partitioning: randomized heavy-edge matching
// coarsening, greedy graph growing, per-level boundary FM refinement.
// Deterministic for a given (graph, P, epsilon, seed). The balance bound
// max part size <= ceil((1 + epsilon) * |V| / P) always holds on the final
// assignment.
inline Assignment kway_assign(const Graph& graph, std::uint32_t p,
                              double epsilon, std::uint64_t seed) {
  using namespace kway_detail;
  if (p == 0) throw ConfigError("partition count must be >= 1");
  if (p > graph.vertex_count()) {
    throw ConfigError("kway: P exceeds the vertex count");
  }
  if (epsilon < 0.0 || epsilon >= 1.0) {
    throw ConfigError("kway: epsilon must lie in [0, 1)");
  }

  const std::size_t n = graph.vertex_count();
  Assignment result;
  result.partition_count = p;
  if (p == 1) {
    result.parts.assign(n, 0);
    return result;
  }

  // Part-size cap: floor((1+eps)*n/P) keeps the balance ratio within
  // 1+eps; never below ceil(n/P), which any partition must reach.
  const auto lmax = std::max<std::uint64_t>(
      static_cast<std::uint64_t>(
          std::floor((1.0L + (long double)epsilon) * (long double)n / p +
                     1e-9L)),
      (n + p - 1) / p);

  std::mt19937_64 rng(seed);
  const std::uint32_t threshold = std::max(20u * p, 200u);

  std::vector<LevelGraph> levels;
  std::vector<MatchResult> matchings;
  levels.push_back(build_base(graph));
  while (levels.back().n > threshold) {
    MatchResult m = heavy_edge_matching(levels.back(), rng);
    if (m.pairs == 0) break;
    LevelGraph coarse = coarsen(levels.back(), m);
    matchings.push_back(std::move(m));
    levels.push_back(std::move(coarse));
  }

  std::vector<PartitionId> parts =
      grow_initial(levels.back(), p, lmax, rng);
  rebalance(levels.back(), parts, p, lmax);
  refine(levels.back(), parts, p, lmax);

  for (std::size_t level = levels.size() - 1; level-- > 0;) {
    std::vector<PartitionId> fine(levels[level].n);
    for (std::uint32_t v = 0; v < levels[level].n; ++v) {
      fine[v] = parts[matchings[level].cmap[v]];
    }
    parts = std::move(fine);
    rebalance(levels[level], parts, p, lmax);
    refine(levels[level], parts, p, lmax);
  }

  result.parts = std::move(parts);
  return result;
}

}  // namespace gpm
