#pragma once

#include <ostream>
#include <string>

#include "gpm/engine.hpp"
#include "gpm/graph.hpp"
#include "gpm/query.hpp"

namespace gpm {

// One line per match, variables in declaration order, original vertex
// tokens, tab-separated.
inline void write_results_tsv(std::ostream& out, const ResultSet& results,
                              const Graph& original_graph) {
  for (const auto& tuple : results.tuples) {
    for (std::size_t i = 0; i < tuple.size(); ++i) {
      if (i) out << '\t';
      out << original_graph.vertex_token(tuple[i]);
    }
    out << '\n';
  }
}

// Fixed schema `metric,op_index,worker,value`; fields that do not apply to
// a row stay empty.
inline void write_metrics_csv(std::ostream& out, const Metrics& m,
                              bool with_header = true) {
  if (with_header) out << "metric,op_index,worker,value\n";
  out << "runtime_ns,,," << m.runtime_ns << '\n';
  for (std::size_t w = 0; w < m.routing_ns_per_worker.size(); ++w) {
    out << "routing_ns,," << w << ',' << m.routing_ns_per_worker[w] << '\n';
  }
  for (std::size_t i = 0; i < m.msgs_sent_per_op.size(); ++i) {
    out << "msgs_sent," << i << ",," << m.msgs_sent_per_op[i] << '\n';
  }
  for (std::size_t i = 0; i < m.msgs_processed_per_op.size(); ++i) {
    out << "msgs_processed," << i << ",," << m.msgs_processed_per_op[i]
        << '\n';
  }
  out << "broadcast_fanout,,," << m.broadcast_fanout << '\n';
  out << "unicasts,,," << m.unicasts << '\n';
  for (std::size_t b = 0; b < m.emission_histogram.size(); ++b) {
    out << "bucket_" << b << ",,," << m.emission_histogram[b] << '\n';
  }
}

}  // namespace gpm
