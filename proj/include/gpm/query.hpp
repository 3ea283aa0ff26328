#pragma once

#include <cstdint>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gpm/error.hpp"
#include "gpm/graph.hpp"
#include "gpm/types.hpp"

namespace gpm {

// One edge predicate of a conjunctive query. The label is kept as a token
// (`*` = wildcard) and resolved against a concrete graph at execution time.
struct Predicate {
  std::uint32_t src_var;
  std::string label;
  std::uint32_t dst_var;

  bool operator==(const Predicate&) const = default;
};

// A conjunctive query: variables interned in first-appearance order plus an
// ordered list of edge predicates (the evaluation order).
struct ConjunctiveQuery {
  std::vector<std::string> variables;
  std::vector<Predicate> predicates;

  std::size_t variable_count() const { return variables.size(); }

  bool operator==(const ConjunctiveQuery&) const = default;
};

// Query text format mirrors the graph format: one `src_var label dst_var`
// predicate per line, `*` as the wildcard label, `#` comments.
inline ConjunctiveQuery parse_query(std::istream& in) {
  ConjunctiveQuery cq;
  std::unordered_map<std::string, std::uint32_t> var_ids;
  auto intern = [&](const std::string& token) {
    auto it = var_ids.find(token);
    if (it != var_ids.end()) return it->second;
    auto id = static_cast<std::uint32_t>(cq.variables.size());
    cq.variables.push_back(token);
    var_ids.emplace(token, id);
    return id;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string src, label, dst, extra;
    if (!(ls >> src)) continue;
    if (src.front() == '#') continue;
    if (!(ls >> label >> dst)) {
      throw ParseError(line_no,
                       "expected `src_var label dst_var`, got fewer tokens");
    }
    if (ls >> extra) {
      throw ParseError(line_no, "expected `src_var label dst_var`, got extra "
                                "token '" + extra + "'");
    }
    cq.predicates.push_back(Predicate{intern(src), label, intern(dst)});
  }
  if (cq.predicates.empty()) {
    throw ParseError(line_no, "query has no predicates");
  }
  return cq;
}

inline ConjunctiveQuery parse_query(const std::string& text) {
  std::istringstream in(text);
  return parse_query(in);
}

// Per-predicate label ids for one graph. Unknown tokens resolve to a
// sentinel that matches nothing, so one query file runs against any graph.
inline std::vector<LabelId> resolve_labels(const ConjunctiveQuery& cq,
                                           const Graph& graph) {
  std::vector<LabelId> labels;
  labels.reserve(cq.predicates.size());
  for (const Predicate& pred : cq.predicates) {
    if (pred.label == "*") {
      labels.push_back(kWildcardLabel);
    } else if (auto id = graph.find_label(pred.label)) {
      labels.push_back(*id);
    } else {
      labels.push_back(kUnknownLabel);
    }
  }
  return labels;
}

inline Semantics parse_semantics(const std::string& name) {
  if (name == "homomorphism") return Semantics::kHomomorphism;
  if (name == "injective") return Semantics::kInjective;
  throw ConfigError("unknown semantics '" + name +
                    "' (expected homomorphism|injective)");
}

}  // namespace gpm
