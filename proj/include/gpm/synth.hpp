#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <unordered_set>
#include <vector>

#include "gpm/error.hpp"
#include "gpm/graph.hpp"
#include "gpm/types.hpp"

namespace gpm {

enum class SynthModel { kUniform, kClustered };

inline SynthModel parse_synth_model(const std::string& name) {
  if (name == "uniform") return SynthModel::kUniform;
  if (name == "clustered") return SynthModel::kClustered;
  throw ConfigError("unknown synth model '" + name + "'");
}

namespace detail {

// All randomness below reduces the raw mt19937_64 stream with modulo so the
// output is identical on every platform.
inline std::uint64_t draw(std::mt19937_64& rng, std::uint64_t n) {
  return rng() % n;
}

}  // namespace detail

// Group of a vertex under the clustered model: sqrt(n)-sized contiguous
// blocks of ids.
inline std::uint64_t synth_group_size(std::uint64_t n) {
  auto g = static_cast<std::uint64_t>(std::llround(std::sqrt(double(n))));
  return g == 0 ? 1 : g;
}

// Deterministic multigraph generator. Vertices are named v0..v{n-1}. The
// clustered model draws 80% of the edges inside sqrt(n)-sized id groups,
// which gives the k-way partitioner locality to exploit. Every vertex is
// incident to at least one edge whenever m is large enough to permit it, so
// the triple text round-trips through the (edge-only) file format without
// losing vertices.
inline Graph synth_graph(std::uint64_t n, std::uint64_t m,
                         std::uint64_t labels, SynthModel model,
                         std::uint64_t seed) {
  if (labels == 0) throw ConfigError("synth: label count must be >= 1");
  if (static_cast<unsigned __int128>(m) >
      static_cast<unsigned __int128>(n) * n * labels) {
    throw ConfigError("synth: requested edge count exceeds n*n*labels");
  }

  Graph g;
  for (std::uint64_t v = 0; v < n; ++v) {
    g.intern_vertex("v" + std::to_string(v));
  }
  for (std::uint64_t l = 0; l < labels; ++l) {
    g.intern_label("l" + std::to_string(l));
  }
  if (m == 0) return g;

  std::mt19937_64 rng(seed);
  const std::uint64_t group = synth_group_size(n);

  auto draw_edge = [&]() -> Edge {
    VertexId src, dst;
    if (model == SynthModel::kClustered && detail::draw(rng, 100) < 80) {
      src = static_cast<VertexId>(detail::draw(rng, n));
      std::uint64_t lo = (src / group) * group;
      std::uint64_t hi = std::min(lo + group, n);
      dst = static_cast<VertexId>(lo + detail::draw(rng, hi - lo));
    } else {
      src = static_cast<VertexId>(detail::draw(rng, n));
      dst = static_cast<VertexId>(detail::draw(rng, n));
    }
    return Edge{src, static_cast<LabelId>(detail::draw(rng, labels)), dst};
  };

  std::vector<Edge> edges;
  edges.reserve(m);
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(m * 2);
  auto key = [&](const Edge& e) {
    return (std::uint64_t(e.src) * n + e.dst) * labels + e.label;
  };

  std::uint64_t stalls = 0;
  while (edges.size() < m) {
    Edge e = draw_edge();
    if (seen.insert(key(e)).second) {
      edges.push_back(e);
      stalls = 0;
    } else if (++stalls > 64 * m + 1024) {
      // Rejection sampling saturated; fill with the first unused triples.
      for (std::uint64_t s = 0; s < n && edges.size() < m; ++s)
        for (std::uint64_t d = 0; d < n && edges.size() < m; ++d)
          for (std::uint64_t l = 0; l < labels && edges.size() < m; ++l) {
            Edge c{static_cast<VertexId>(s), static_cast<LabelId>(l),
                   static_cast<VertexId>(d)};
            if (seen.insert(key(c)).second) edges.push_back(c);
          }
      break;
    }
  }

  // Coverage repair: swap removable edges for edges touching vertices that
  // ended up isolated. Keeps the edge count exact.
  std::vector<std::uint32_t> incident(n, 0);
  for (const Edge& e : edges) {
    ++incident[e.src];
    ++incident[e.dst];
  }
  std::vector<VertexId> uncovered;
  for (std::uint64_t v = 0; v < n; ++v) {
    if (incident[v] == 0) uncovered.push_back(static_cast<VertexId>(v));
  }
  for (VertexId v : uncovered) {
    // Find a victim edge whose removal keeps both endpoints covered.
    bool have_victim = false;
    std::size_t victim = 0;
    for (std::size_t i = edges.size(); i-- > 0;) {
      const Edge& e = edges[i];
      std::uint32_t need = e.src == e.dst ? 3 : 2;
      if (incident[e.src] >= need && incident[e.dst] >= need) {
        victim = i;
        have_victim = true;
        break;
      }
    }
    if (!have_victim) break;
    Edge replacement{kUnbound, 0, kUnbound};
    bool found = false;
    for (int attempt = 0; attempt < 256 && !found; ++attempt) {
      std::uint64_t lo = (v / group) * group;
      std::uint64_t hi = std::min(lo + group, n);
      VertexId dst = model == SynthModel::kClustered
                         ? static_cast<VertexId>(lo + detail::draw(rng, hi - lo))
                         : static_cast<VertexId>(detail::draw(rng, n));
      Edge c{v, static_cast<LabelId>(detail::draw(rng, labels)), dst};
      if (!seen.count(key(c))) {
        replacement = c;
        found = true;
      }
    }
    if (!found) continue;
    const Edge old = edges[victim];
    seen.erase(key(old));
    seen.insert(key(replacement));
    --incident[old.src];
    --incident[old.dst];
    edges[victim] = replacement;
    ++incident[replacement.src];
    ++incident[replacement.dst];
  }

  for (const Edge& e : edges) g.add_edge(e.src, e.label, e.dst);
  return g;
}

}  // namespace gpm
