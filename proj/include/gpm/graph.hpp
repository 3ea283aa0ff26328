#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "gpm/error.hpp"
#include "gpm/types.hpp"

namespace gpm {

// Edge-labeled multigraph with interned dense ids. Vertices and labels get
// ids in order of first appearance; exact duplicate triples are collapsed
// (set semantics), while parallel edges with distinct labels are kept.
// Immutable once built; all readers are reentrant.
class Graph {
 public:
  Graph() = default;

  VertexId intern_vertex(std::string_view token) {
    auto it = vertex_ids_.find(std::string(token));
    if (it != vertex_ids_.end()) return it->second;
    VertexId id = static_cast<VertexId>(vertex_tokens_.size());
    vertex_tokens_.emplace_back(token);
    vertex_ids_.emplace(vertex_tokens_.back(), id);
    return id;
  }

  LabelId intern_label(std::string_view token) {
    auto it = label_ids_.find(std::string(token));
    if (it != label_ids_.end()) return it->second;
    LabelId id = static_cast<LabelId>(label_tokens_.size());
    label_tokens_.emplace_back(token);
    label_ids_.emplace(label_tokens_.back(), id);
    return id;
  }

  // Returns false when the triple is already present.
  bool add_edge(VertexId src, LabelId label, VertexId dst) {
    if (src >= vertex_count() || dst >= vertex_count() ||
        label >= label_count()) {
      throw ConfigError("edge references an id that was never interned");
    }
    Edge e{src, label, dst};
    if (!edge_set_.insert(e).second) return false;
    edges_.push_back(e);
    return true;
  }

  std::size_t vertex_count() const { return vertex_tokens_.size(); }
  std::size_t label_count() const { return label_tokens_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  // Edges in first-appearance order (the edge id order).
  const std::vector<Edge>& edges() const { return edges_; }

  const std::string& vertex_token(VertexId v) const {
    return vertex_tokens_.at(v);
  }
  const std::string& label_token(LabelId l) const {
    return label_tokens_.at(l);
  }

  std::optional<VertexId> find_vertex(std::string_view token) const {
    auto it = vertex_ids_.find(std::string(token));
    if (it == vertex_ids_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<LabelId> find_label(std::string_view token) const {
    auto it = label_ids_.find(std::string(token));
    if (it == label_ids_.end()) return std::nullopt;
    return it->second;
  }

  bool has_edge(VertexId src, LabelId label, VertexId dst) const {
    return edge_set_.count(Edge{src, label, dst}) > 0;
  }

  bool operator==(const Graph& other) const {
    return vertex_tokens_ == other.vertex_tokens_ &&
           label_tokens_ == other.label_tokens_ && edges_ == other.edges_;
  }

 private:
  struct EdgeHash {
    std::size_t operator()(const Edge& e) const {
      std::uint64_t h = e.src;
      h = h * 0x9e3779b97f4a7c15ull + e.label;
      h = h * 0x9e3779b97f4a7c15ull + e.dst;
      return static_cast<std::size_t>(h ^ (h >> 32));
    }
  };

  std::vector<std::string> vertex_tokens_;
  std::vector<std::string> label_tokens_;
  std::unordered_map<std::string, VertexId> vertex_ids_;
  std::unordered_map<std::string, LabelId> label_ids_;
  std::vector<Edge> edges_;
  std::unordered_set<Edge, EdgeHash> edge_set_;
};

// Parses the triple text format: one `src label dst` edge per line,
// whitespace-separated tokens, `#` comment lines and blank lines ignored.
// `*` is reserved at the query level and rejected as an edge label.
inline Graph parse_graph(std::istream& in) {
  Graph g;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string src, label, dst, extra;
    if (!(ls >> src)) continue;          // blank
    if (src.front() == '#') continue;    // comment
    if (!(ls >> label >> dst)) {
      throw ParseError(line_no, "expected `src label dst`, got fewer tokens");
    }
    if (ls >> extra) {
      throw ParseError(line_no, "expected `src label dst`, got extra token '" +
                                    extra + "'");
    }
    if (label == "*") {
      throw ParseError(line_no,
                       "`*` is reserved for query wildcards, not edge labels");
    }
    VertexId s = g.intern_vertex(src);
    LabelId l = g.intern_label(label);
    VertexId d = g.intern_vertex(dst);
    g.add_edge(s, l, d);
  }
  return g;
}

inline Graph parse_graph(const std::string& text) {
  std::istringstream in(text);
  return parse_graph(in);
}

// Canonical serialization: edges in edge-id order, tokens as interned.
// Parsing a serialized graph reproduces it exactly (same ids, same dicts).
inline void serialize_graph(const Graph& g, std::ostream& out) {
  for (const Edge& e : g.edges()) {
    out << g.vertex_token(e.src) << ' ' << g.label_token(e.label) << ' '
        << g.vertex_token(e.dst) << '\n';
  }
}

inline std::string serialize_graph(const Graph& g) {
  std::ostringstream out;
  serialize_graph(g, out);
  return out.str();
}

}  // namespace gpm
