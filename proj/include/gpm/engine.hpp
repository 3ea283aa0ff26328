#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <deque>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "gpm/clock.hpp"
#include "gpm/error.hpp"
#include "gpm/partition_store.hpp"
#include "gpm/plan.hpp"
#include "gpm/routing.hpp"
#include "gpm/types.hpp"

namespace gpm {

// Upper bound on query variables the engine ships in a message. Queries
// beyond this are rejected up front (the oracle has no such limit).
inline constexpr std::size_t kMaxVariables = 16;

// Partial variable-binding vector carried between partitions.
struct MatchState {
  std::array<VertexId, kMaxVariables> bindings;
  std::uint8_t size = 0;

  static MatchState all_unbound(std::size_t variables) {
    MatchState s;
    s.size = static_cast<std::uint8_t>(variables);
    s.bindings.fill(kUnbound);
    return s;
  }

  VertexId operator[](std::size_t i) const { return bindings[i]; }
  VertexId& operator[](std::size_t i) { return bindings[i]; }

  bool is_bound(std::size_t i) const { return bindings[i] != kUnbound; }

  // True when binding `value` to `var` keeps bound values pairwise distinct.
  bool injective_ok(std::uint32_t var, VertexId value) const {
    for (std::uint32_t u = 0; u < size; ++u) {
      if (u != var && bindings[u] == value) return false;
    }
    return true;
  }

  std::vector<VertexId> to_vector() const {
    return {bindings.begin(), bindings.begin() + size};
  }
};

struct Message {
  std::uint32_t query_id;
  std::uint32_t op_index;  // next operator to run
  PartitionId target;
  MatchState state;
};

struct EngineConfig {
  std::uint32_t workers_per_node = 1;
  std::uint32_t node_count = 1;
  std::uint32_t partition_count = 1;
  std::uint32_t batch_size = 64;          // messages drained per claim
  std::uint64_t histogram_bucket_ns = 1'000'000;
  Semantics semantics = Semantics::kHomomorphism;
  bool redundancy = false;

  std::uint32_t total_workers() const { return workers_per_node * node_count; }
};

struct Metrics {
  std::uint64_t runtime_ns = 0;
  std::vector<std::uint64_t> routing_ns_per_worker;
  std::vector<std::uint64_t> msgs_sent_per_op;
  std::vector<std::uint64_t> msgs_processed_per_op;
  std::uint64_t unicasts = 0;
  std::uint64_t broadcast_fanout = 0;
  std::uint64_t results_emitted = 0;  // multiset count, before dedup
  std::uint64_t local_sends = 0;
  std::uint64_t remote_sends = 0;
  std::vector<std::uint64_t> emission_histogram;
  std::uint32_t completions = 0;
  bool queues_empty_at_exit = false;
  std::int64_t outstanding_at_exit = 0;

  std::uint64_t msgs_sent() const {
    std::uint64_t n = 0;
    for (auto v : msgs_sent_per_op) n += v;
    return n;
  }
  std::uint64_t msgs_processed() const {
    std::uint64_t n = 0;
    for (auto v : msgs_processed_per_op) n += v;
    return n;
  }
};

// Complete binding tuples in original vertex-id space, sorted and
// deduplicated (set semantics).
struct ResultSet {
  std::vector<std::vector<VertexId>> tuples;

  std::size_t count() const { return tuples.size(); }
  bool operator==(const ResultSet&) const = default;
};

// Maps engine-space result tuples through the virtual->original dictionary
// (hybrid design); passes through unchanged without one.
inline ResultSet translate_results(
    std::vector<std::vector<VertexId>> raw,
    const std::optional<std::vector<VertexId>>& dictionary) {
  if (dictionary) {
    for (auto& tuple : raw) {
      for (VertexId& v : tuple) {
        if (v >= dictionary->size()) {
          throw std::logic_error("translate_results: virtual id " +
                                 std::to_string(v) +
                                 " outside the dictionary");
        }
        v = (*dictionary)[v];
      }
    }
  }
  std::sort(raw.begin(), raw.end());
  raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
  ResultSet rs;
  rs.tuples = std::move(raw);
  return rs;
}

namespace detail {

struct Mailbox {
  std::mutex mu;
  std::deque<Message> queue;
  std::atomic<std::uint32_t> approx_size{0};
  std::atomic<bool> claimed{false};
};

struct WorkerStats {
  std::uint64_t routing_ns = 0;
  std::vector<std::uint64_t> sent_per_op;
  std::vector<std::uint64_t> processed_per_op;
  std::uint64_t unicasts = 0;
  std::uint64_t fanout = 0;
  std::uint64_t local_sends = 0;
  std::uint64_t remote_sends = 0;
  std::uint64_t results = 0;
  std::vector<std::uint64_t> histogram;
  std::vector<MatchState> result_buffer;

  explicit WorkerStats(std::size_t ops)
      : sent_per_op(ops, 0), processed_per_op(ops, 0) {}

  void bump_histogram(std::uint64_t bucket, std::uint64_t count) {
    if (histogram.size() <= bucket) histogram.resize(bucket + 1, 0);
    histogram[bucket] += count;
  }
};

// Evaluates one operator against one store and hands every successor state
// to the sink. The sink decides between dispatching and result emission.
template <class Sink>
void apply_operator(const QueryExecutionPlan& qep,
                    const std::vector<LabelId>& labels,
                    std::uint32_t op_index, const PartitionStore& store,
                    const MatchState& state, Sink&& sink) {
  const PlanOp& op = qep.ops[op_index];
  const Predicate& pred = qep.query.predicates[op.predicate_index];
  const LabelId label = labels[op.predicate_index];
  const bool injective = qep.semantics == Semantics::kInjective;

  switch (op.kind) {
    case OpKind::kUnbound: {
      store.for_each_local_edge(label, [&](VertexId s, LabelId, VertexId d) {
        if (pred.src_var == pred.dst_var) {
          if (s != d) return;
        } else if (injective && s == d) {
          return;
        }
        MatchState next = state;
        next[pred.src_var] = s;
        next[pred.dst_var] = d;
        sink(next);
      });
      break;
    }
    case OpKind::kVertexBoundSrc: {
      if (!state.is_bound(pred.src_var) || state.is_bound(pred.dst_var)) {
        throw std::logic_error(
            "vertex-bound-src operator got an inconsistent state");
      }
      for (const LabeledNeighbor& e :
           store.out_edges_span(state[pred.src_var], label)) {
        if (injective && !state.injective_ok(pred.dst_var, e.second)) continue;
        MatchState next = state;
        next[pred.dst_var] = e.second;
        sink(next);
      }
      break;
    }
    case OpKind::kVertexBoundDst: {
      if (!state.is_bound(pred.dst_var) || state.is_bound(pred.src_var)) {
        throw std::logic_error(
            "vertex-bound-dst operator got an inconsistent state");
      }
      const VertexId dst = state[pred.dst_var];
      auto matches = op.addressing == Addressing::kUnicastReverse
                         ? store.in_edges_span(dst, label)
                         : store.scan_by_target_span(dst, label);
      for (const LabeledNeighbor& e : matches) {
        if (injective && !state.injective_ok(pred.src_var, e.second)) continue;
        MatchState next = state;
        next[pred.src_var] = e.second;
        sink(next);
      }
      break;
    }
    case OpKind::kEdgeBound: {
      if (!state.is_bound(pred.src_var) || !state.is_bound(pred.dst_var)) {
        throw std::logic_error("edge-bound operator got an unbound endpoint");
      }
      if (store.has_edge(state[pred.src_var], label, state[pred.dst_var])) {
        sink(state);
      }
      break;
    }
  }
}

}  // namespace detail

// Testable single-operator evaluation: successors when the operator is not
// the last of the plan, final results when it is.
struct ApplyOutput {
  std::vector<MatchState> successors;
  std::vector<MatchState> results;
};

inline ApplyOutput apply_op(const QueryExecutionPlan& qep,
                            const std::vector<LabelId>& labels,
                            std::uint32_t op_index,
                            const PartitionStore& store,
                            const MatchState& state) {
  ApplyOutput out;
  const bool last = op_index + 1 == qep.ops.size();
  detail::apply_operator(qep, labels, op_index, store, state,
                         [&](const MatchState& next) {
                           (last ? out.results : out.successors)
                               .push_back(next);
                         });
  return out;
}

// Asynchronous QEP execution over a partition set. Workers claim local
// partitions with pending messages (one worker per partition at a time),
// drain them in batches, apply the operator and route successor messages by
// unicast or broadcast until the outstanding-work counter certifies
// completion. Returns results in original id space plus full metrics.
template <class ClockT = SteadyClock>
std::pair<ResultSet, Metrics> execute(const QueryExecutionPlan& qep,
                                      const PartitionSet& pset,
                                      const RoutingPair& routing,
                                      const std::vector<LabelId>& labels,
                                      const EngineConfig& config,
                                      const ClockT& clock = {}) {
  const std::uint32_t p_count = pset.partition_count();
  if (qep.ops.empty()) throw ConfigError("empty query plan");
  if (labels.size() != qep.query.predicates.size()) {
    throw ConfigError("resolved labels do not match the query predicates");
  }
  if (config.partition_count != p_count) {
    throw ConfigError("config partition count differs from the built stores");
  }
  if (config.workers_per_node == 0 || config.node_count == 0 ||
      config.batch_size == 0 || config.histogram_bucket_ns == 0) {
    throw ConfigError("workers, nodes, batch size and bucket width must be >= 1");
  }
  if (config.semantics != qep.semantics) {
    throw ConfigError("config semantics differs from the compiled plan");
  }
  if (config.redundancy != qep.redundancy) {
    throw ConfigError("config redundancy differs from the compiled plan");
  }
  if (qep.query.variable_count() > kMaxVariables) {
    throw ConfigError("query exceeds the engine variable limit");
  }
  if (qep.needs_reverse() &&
      (!routing.reverse || !pset.redundancy())) {
    throw ConfigError(
        "plan requires reverse unicast but redundancy is not built");
  }
  if (config.redundancy && !pset.redundancy()) {
    throw ConfigError("config requests redundancy but stores lack it");
  }
  for (NodeId node : pset.placement) {
    if (node >= config.node_count) {
      throw ConfigError("placement references a node beyond the node count");
    }
  }

  const std::uint32_t workers = config.total_workers();
  const std::size_t op_count = qep.ops.size();

  std::vector<detail::Mailbox> mailboxes(p_count);
  std::vector<detail::WorkerStats> stats;
  stats.reserve(workers + 1);
  for (std::uint32_t w = 0; w < workers + 1; ++w) stats.emplace_back(op_count);
  detail::WorkerStats& seed_stats = stats[workers];

  std::atomic<std::int64_t> outstanding{0};
  std::atomic<bool> seeding_done{false};
  std::atomic<bool> completed{false};
  std::atomic<bool> done{false};
  std::atomic<std::uint32_t> completions{0};
  std::atomic<std::uint64_t> end_ns{0};
  const std::uint64_t start_ns = clock.now_ns();

  auto try_complete = [&]() {
    bool expected = false;
    if (completed.compare_exchange_strong(expected, true,
                                          std::memory_order_acq_rel)) {
      end_ns.store(clock.now_ns(), std::memory_order_relaxed);
      completions.fetch_add(1, std::memory_order_relaxed);
      done.store(true, std::memory_order_release);
    }
  };

  auto enqueue = [&](const Message& msg, detail::WorkerStats& st,
                     NodeId sender_node) {
    outstanding.fetch_add(1, std::memory_order_acq_rel);
    detail::Mailbox& mb = mailboxes[msg.target];
    // Incrementing before the push keeps approx_size >= queue size, so
    // the drain-side subtraction can never wrap.
    mb.approx_size.fetch_add(1, std::memory_order_release);
    {
      std::lock_guard<std::mutex> lock(mb.mu);
      mb.queue.push_back(msg);
    }
    st.sent_per_op[msg.op_index]++;
    if (pset.placement[msg.target] == sender_node) {
      st.local_sends++;
    } else {
      st.remote_sends++;
    }
  };

  // Routes one successor state to the next operator. `bucket` is the
  // emission-histogram slot, sampled once per processed message.
  auto dispatch = [&](std::uint32_t next_op, const MatchState& state,
                      detail::WorkerStats& st, NodeId sender_node,
                      std::uint64_t bucket) {
    const PlanOp& op = qep.ops[next_op];
    const Predicate& pred = qep.query.predicates[op.predicate_index];
    switch (op.addressing) {
      case Addressing::kBroadcast: {
        for (PartitionId p = 0; p < p_count; ++p) {
          enqueue(Message{0, next_op, p, state}, st, sender_node);
        }
        st.fanout += p_count;
        st.bump_histogram(bucket, p_count);
        break;
      }
      case Addressing::kUnicastForward: {
        auto [part, ns] = timed_route(routing, state[pred.src_var],
                                      RouteDirection::kForward,
                                      st.routing_ns, clock);
        (void)ns;
        enqueue(Message{0, next_op, part, state}, st, sender_node);
        st.unicasts++;
        st.bump_histogram(bucket, 1);
        break;
      }
      case Addressing::kUnicastReverse: {
        auto [part, ns] = timed_route(routing, state[pred.dst_var],
                                      RouteDirection::kReverse,
                                      st.routing_ns, clock);
        (void)ns;
        enqueue(Message{0, next_op, part, state}, st, sender_node);
        st.unicasts++;
        st.bump_histogram(bucket, 1);
        break;
      }
    }
  };

  auto process_message = [&](const Message& msg, detail::WorkerStats& st,
                             NodeId node) {
    const PartitionStore& store = pset.partitions[msg.target];
    const bool last = msg.op_index + 1 == op_count;
    const std::uint64_t bucket =
        (clock.now_ns() - start_ns) / config.histogram_bucket_ns;
    detail::apply_operator(qep, labels, msg.op_index, store, msg.state,
                           [&](const MatchState& next) {
                             if (last) {
                               st.results++;
                               st.result_buffer.push_back(next);
                             } else {
                               dispatch(msg.op_index + 1, next, st, node,
                                        bucket);
                             }
                           });
    st.processed_per_op[msg.op_index]++;
  };

  auto worker_loop = [&](std::uint32_t w) {
    detail::WorkerStats& st = stats[w];
    const NodeId node = w / config.workers_per_node;
    std::vector<PartitionId> locals;
    for (PartitionId p = 0; p < p_count; ++p) {
      if (pset.placement[p] == node) locals.push_back(p);
    }
    std::vector<Message> batch;
    batch.reserve(config.batch_size);
    std::uint32_t idle_sweeps = 0;
    std::size_t rotate = locals.empty() ? 0 : w % locals.size();

    while (!done.load(std::memory_order_acquire)) {
      bool worked = false;
      for (std::size_t k = 0; k < locals.size(); ++k) {
        PartitionId p = locals[(rotate + k) % locals.size()];
        detail::Mailbox& mb = mailboxes[p];
        if (mb.approx_size.load(std::memory_order_acquire) == 0) continue;
        if (mb.claimed.exchange(true, std::memory_order_acquire)) continue;

        batch.clear();
        {
          std::lock_guard<std::mutex> lock(mb.mu);
          std::uint32_t take = std::min<std::uint32_t>(
              config.batch_size, static_cast<std::uint32_t>(mb.queue.size()));
          for (std::uint32_t i = 0; i < take; ++i) {
            batch.push_back(mb.queue.front());
            mb.queue.pop_front();
          }
          mb.approx_size.fetch_sub(take, std::memory_order_release);
        }
        for (const Message& msg : batch) {
          process_message(msg, st, node);
          if (outstanding.fetch_sub(1, std::memory_order_acq_rel) == 1 &&
              seeding_done.load(std::memory_order_acquire)) {
            try_complete();
          }
        }
        mb.claimed.store(false, std::memory_order_release);
        if (!batch.empty()) worked = true;
      }
      if (worked) {
        idle_sweeps = 0;
      } else if (++idle_sweeps > 16) {
        std::this_thread::sleep_for(std::chrono::microseconds(50));
      } else {
        std::this_thread::yield();
      }
    }
  };

  auto seed = [&]() {
    const MatchState initial =
        MatchState::all_unbound(qep.query.variable_count());
    for (PartitionId p = 0; p < p_count; ++p) {
      enqueue(Message{0, 0, p, initial}, seed_stats,
              pset.placement[p]);
    }
    seed_stats.fanout += p_count;
    seed_stats.bump_histogram(0, p_count);
    seeding_done.store(true, std::memory_order_release);
    if (outstanding.load(std::memory_order_acquire) == 0) try_complete();
  };

  if (workers == 1) {
    seed();
    worker_loop(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::uint32_t w = 0; w < workers; ++w) {
      threads.emplace_back(worker_loop, w);
    }
    seed();
    for (auto& t : threads) t.join();
  }

  Metrics metrics;
  metrics.runtime_ns = end_ns.load() - start_ns;
  metrics.msgs_sent_per_op.assign(op_count, 0);
  metrics.msgs_processed_per_op.assign(op_count, 0);
  metrics.routing_ns_per_worker.resize(workers, 0);
  std::vector<std::vector<VertexId>> raw;
  for (std::uint32_t w = 0; w < workers + 1; ++w) {
    const detail::WorkerStats& st = stats[w];
    if (w < workers) metrics.routing_ns_per_worker[w] = st.routing_ns;
    for (std::size_t i = 0; i < op_count; ++i) {
      metrics.msgs_sent_per_op[i] += st.sent_per_op[i];
      metrics.msgs_processed_per_op[i] += st.processed_per_op[i];
    }
    metrics.unicasts += st.unicasts;
    metrics.broadcast_fanout += st.fanout;
    metrics.results_emitted += st.results;
    metrics.local_sends += st.local_sends;
    metrics.remote_sends += st.remote_sends;
    if (metrics.emission_histogram.size() < st.histogram.size()) {
      metrics.emission_histogram.resize(st.histogram.size(), 0);
    }
    for (std::size_t b = 0; b < st.histogram.size(); ++b) {
      metrics.emission_histogram[b] += st.histogram[b];
    }
    raw.reserve(raw.size() + st.result_buffer.size());
    for (const MatchState& s : st.result_buffer) raw.push_back(s.to_vector());
  }
  metrics.completions = completions.load();
  metrics.outstanding_at_exit = outstanding.load();
  metrics.queues_empty_at_exit = true;
  for (detail::Mailbox& mb : mailboxes) {
    std::lock_guard<std::mutex> lock(mb.mu);
    if (!mb.queue.empty()) metrics.queues_empty_at_exit = false;
  }
  if (metrics.outstanding_at_exit < 0) {
    throw std::logic_error("outstanding-work counter underflowed");
  }

  return {translate_results(std::move(raw), routing.dictionary), metrics};
}

}  // namespace gpm
