// Command-line front end: load or synthesize graphs, partition them, run
// conjunctive queries under a chosen routing design, and sweep
// configurations for scaling studies.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gpm/engine.hpp"
#include "gpm/io.hpp"
#include "gpm/oracle.hpp"
#include "gpm/partitioner.hpp"
#include "gpm/routing.hpp"
#include "gpm/synth.hpp"

namespace {

struct GraphSource {
  std::string graph_path;
  std::uint64_t synth_vertices = 0;
  std::uint64_t synth_edges = 0;
  std::uint64_t synth_labels = 1;
  std::string synth_model = "uniform";

  void add_options(CLI::App* cmd) {
    auto* graph = cmd->add_option("--graph", graph_path,
                                  "graph file (`src label dst` lines)");
    auto* synth = cmd->add_option("--synth-vertices", synth_vertices,
                                  "synthesize a graph with this many vertices");
    cmd->add_option("--synth-edges", synth_edges, "synthetic edge count");
    cmd->add_option("--synth-labels", synth_labels, "synthetic label count");
    cmd->add_option("--synth-model", synth_model,
                    "synthetic model: uniform|clustered");
    graph->excludes(synth);
    synth->excludes(graph);
  }

  gpm::Graph load(std::uint64_t seed) const {
    if (!graph_path.empty()) {
      std::ifstream in(graph_path);
      if (!in) throw gpm::ConfigError("cannot open graph file " + graph_path);
      return gpm::parse_graph(in);
    }
    if (synth_vertices == 0 && synth_edges == 0) {
      throw gpm::ConfigError("either --graph or --synth-vertices is required");
    }
    return gpm::synth_graph(synth_vertices, synth_edges, synth_labels,
                            gpm::parse_synth_model(synth_model), seed);
  }
};

gpm::ConjunctiveQuery load_query(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw gpm::ConfigError("cannot open query file " + path);
  return gpm::parse_query(in);
}

bool parse_on_off(const std::string& value, const char* flag) {
  if (value == "on") return true;
  if (value == "off") return false;
  throw gpm::ConfigError(std::string(flag) + " expects on|off");
}

void warn_unknown_labels(const gpm::ConjunctiveQuery& cq,
                         const std::vector<gpm::LabelId>& labels) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == gpm::kUnknownLabel) {
      std::cerr << "warning: label '" << cq.predicates[i].label
                << "' does not occur in the graph; predicate " << i + 1
                << " matches nothing\n";
    }
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw gpm::ConfigError("cannot write to " + path);
  return out;
}

struct RunOptions {
  GraphSource source;
  std::string query_path;
  std::string design = "hybrid";
  std::uint32_t partitions = 4;
  std::uint32_t workers = 1;
  std::uint32_t nodes = 1;
  double epsilon = 0.05;
  std::uint64_t seed = 1;
  std::string redundancy = "off";
  std::string semantics = "homomorphism";
  bool oracle = false;
  std::string results_path;
  std::string metrics_path;
};

void add_run_options(CLI::App* cmd, RunOptions& opt) {
  opt.source.add_options(cmd);
  cmd->add_option("--query", opt.query_path, "query file")->required();
  cmd->add_option("--design", opt.design,
                  "routing design: compute|lookup-hash|lookup-kway|hybrid");
  cmd->add_option("--partitions", opt.partitions, "partition count P");
  cmd->add_option("--workers", opt.workers, "workers per node");
  cmd->add_option("--nodes", opt.nodes, "logical node count");
  cmd->add_option("--epsilon", opt.epsilon, "k-way balance slack");
  cmd->add_option("--seed", opt.seed, "seed for partitioning and synthesis");
  cmd->add_option("--redundancy", opt.redundancy,
                  "store the graph twice (by source and by target): on|off");
  cmd->add_option("--semantics", opt.semantics,
                  "match semantics: homomorphism|injective");
  cmd->add_option("--results", opt.results_path, "write matches as TSV here");
  cmd->add_option("--metrics", opt.metrics_path, "write metrics CSV here");
}

int cmd_run(const RunOptions& opt) {
  const bool redundancy = parse_on_off(opt.redundancy, "--redundancy");
  const gpm::Semantics semantics = gpm::parse_semantics(opt.semantics);
  const gpm::Design design = gpm::parse_design(opt.design);

  gpm::Graph graph = opt.source.load(opt.seed);
  gpm::ConjunctiveQuery cq = load_query(opt.query_path);

  gpm::BuiltDesign built = gpm::build_pair(design, graph, opt.partitions,
                                           opt.epsilon, opt.seed, redundancy,
                                           opt.nodes);
  gpm::QueryExecutionPlan qep = gpm::compile(cq, redundancy, semantics);
  auto labels = gpm::resolve_labels(cq, built.effective_graph);
  warn_unknown_labels(cq, labels);

  gpm::EngineConfig config;
  config.workers_per_node = opt.workers;
  config.node_count = opt.nodes;
  config.partition_count = opt.partitions;
  config.semantics = semantics;
  config.redundancy = redundancy;

  auto [results, metrics] =
      gpm::execute(qep, built.partitions, built.routing, labels, config);

  if (!opt.results_path.empty()) {
    auto out = open_out(opt.results_path);
    gpm::write_results_tsv(out, results, graph);
  }
  if (!opt.metrics_path.empty()) {
    auto out = open_out(opt.metrics_path);
    gpm::write_metrics_csv(out, metrics);
  }

  std::cout << "matches: " << results.count()
            << "  runtime_ns: " << metrics.runtime_ns
            << "  msgs: " << metrics.msgs_sent() << '\n';

  if (opt.oracle) {
    gpm::OracleResult truth = gpm::brute_force(graph, cq, semantics);
    bool match = truth.count() == results.count() &&
                 std::equal(results.tuples.begin(), results.tuples.end(),
                            truth.tuples.begin(), truth.tuples.end());
    std::cout << (match ? "MATCH" : "MISMATCH") << " (oracle: "
              << truth.count() << " tuples)\n";
    if (!match) return 2;
  }
  return 0;
}

struct PartitionOptions {
  std::string graph_path;
  std::string strategy = "kway";
  std::uint32_t partitions = 2;
  double epsilon = 0.05;
  std::uint64_t seed = 1;
  std::string output;
};

int cmd_partition(const PartitionOptions& opt) {
  std::ifstream in(opt.graph_path);
  if (!in) throw gpm::ConfigError("cannot open graph file " + opt.graph_path);
  gpm::Graph graph = gpm::parse_graph(in);

  gpm::Assignment assignment;
  if (opt.strategy == "hash") {
    assignment = gpm::hash_assign(graph.vertex_count(), opt.partitions);
  } else if (opt.strategy == "kway") {
    assignment =
        gpm::kway_assign(graph, opt.partitions, opt.epsilon, opt.seed);
  } else {
    throw gpm::ConfigError("unknown strategy '" + opt.strategy +
                           "' (expected hash|kway)");
  }

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!opt.output.empty()) {
    file = open_out(opt.output);
    out = &file;
  }
  for (gpm::VertexId v = 0; v < graph.vertex_count(); ++v) {
    *out << graph.vertex_token(v) << '\t' << assignment.parts[v] << '\n';
  }
  *out << "# cut=" << gpm::edge_cut(graph, assignment)
       << " balance=" << gpm::balance(assignment) << '\n';
  return 0;
}

struct BenchOptions {
  RunOptions run;
  std::string sweep_workers = "1,2,4";
  std::uint32_t reps = 3;
  std::string summary_path = "bench_summary.csv";
  bool design_given = false;
};

std::vector<std::uint32_t> parse_worker_list(const std::string& text) {
  std::vector<std::uint32_t> workers;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    workers.push_back(static_cast<std::uint32_t>(std::stoul(item)));
    if (workers.back() == 0) {
      throw gpm::ConfigError("--sweep-workers entries must be >= 1");
    }
  }
  if (workers.empty()) throw gpm::ConfigError("--sweep-workers is empty");
  return workers;
}

int cmd_bench(const BenchOptions& opt) {
  const gpm::Semantics semantics = gpm::parse_semantics(opt.run.semantics);
  gpm::Graph graph = opt.run.source.load(opt.run.seed);
  gpm::ConjunctiveQuery cq = load_query(opt.run.query_path);
  std::vector<std::uint32_t> workers = parse_worker_list(opt.sweep_workers);
  if (opt.reps == 0) throw gpm::ConfigError("--reps must be >= 1");

  std::vector<gpm::Design> designs;
  if (opt.design_given) {
    designs.push_back(gpm::parse_design(opt.run.design));
  } else {
    designs = {gpm::Design::kCompute, gpm::Design::kLookupHash,
               gpm::Design::kLookupKway, gpm::Design::kHybrid};
  }

  std::ofstream metrics_out;
  bool write_metrics = !opt.run.metrics_path.empty();
  if (write_metrics) {
    metrics_out = open_out(opt.run.metrics_path);
    metrics_out << "metric,op_index,worker,value\n";
  }

  struct Row {
    gpm::Design design;
    std::uint32_t workers;
    bool redundancy;
    std::uint64_t median_runtime_ns;
    std::uint64_t broadcast_fanout;
  };
  std::vector<Row> rows;

  for (gpm::Design design : designs) {
    for (bool redundancy : {false, true}) {
      gpm::BuiltDesign built =
          gpm::build_pair(design, graph, opt.run.partitions, opt.run.epsilon,
                          opt.run.seed, redundancy, opt.run.nodes);
      gpm::QueryExecutionPlan qep = gpm::compile(cq, redundancy, semantics);
      auto labels = gpm::resolve_labels(cq, built.effective_graph);
      for (std::uint32_t w : workers) {
        std::vector<std::uint64_t> runtimes;
        std::uint64_t fanout = 0;
        for (std::uint32_t rep = 0; rep < opt.reps; ++rep) {
          gpm::EngineConfig config;
          config.workers_per_node = w;
          config.node_count = opt.run.nodes;
          config.partition_count = opt.run.partitions;
          config.semantics = semantics;
          config.redundancy = redundancy;
          auto [results, metrics] = gpm::execute(
              qep, built.partitions, built.routing, labels, config);
          runtimes.push_back(metrics.runtime_ns);
          fanout = metrics.broadcast_fanout;
          if (write_metrics) {
            metrics_out << "# design=" << gpm::design_name(design)
                        << " workers=" << w
                        << " redundancy=" << (redundancy ? "on" : "off")
                        << " rep=" << rep << '\n';
            gpm::write_metrics_csv(metrics_out, metrics, false);
          }
        }
        std::sort(runtimes.begin(), runtimes.end());
        rows.push_back(Row{design, w, redundancy,
                           runtimes[runtimes.size() / 2], fanout});
      }
    }
  }

  auto summary = open_out(opt.summary_path);
  summary << "design,workers,redundancy,median_runtime_ns,broadcast_fanout,"
             "ideal_runtime_ns\n";
  for (const Row& row : rows) {
    summary << gpm::design_name(row.design) << ',' << row.workers << ','
            << (row.redundancy ? "on" : "off") << ','
            << row.median_runtime_ns << ',' << row.broadcast_fanout << ',';
    // Ideal scaling reference: two-worker runtime scaled by 2/w.
    auto base = std::find_if(rows.begin(), rows.end(), [&](const Row& r) {
      return r.design == row.design && r.redundancy == row.redundancy &&
             r.workers == 2;
    });
    if (base != rows.end()) {
      summary << base->median_runtime_ns * 2 / row.workers;
    }
    summary << '\n';
  }
  std::cout << "wrote " << rows.size() << " summary rows to "
            << opt.summary_path << '\n';
  return 0;
}

struct SynthOptions {
  std::uint64_t vertices = 0;
  std::uint64_t edges = 0;
  std::uint64_t labels = 1;
  std::string model = "uniform";
  std::uint64_t seed = 1;
  std::string output;
};

int cmd_synth(const SynthOptions& opt) {
  gpm::Graph g = gpm::synth_graph(opt.vertices, opt.edges, opt.labels,
                                  gpm::parse_synth_model(opt.model), opt.seed);
  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!opt.output.empty()) {
    file = open_out(opt.output);
    out = &file;
  }
  gpm::serialize_graph(g, *out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"asynchronous graph pattern matching over partitioned "
               "edge-labeled multigraphs"};
  app.require_subcommand(1);

  RunOptions run_opt;
  auto* run_cmd = app.add_subcommand("run", "execute one query");
  add_run_options(run_cmd, run_opt);
  run_cmd->add_flag("--oracle", run_opt.oracle,
                    "also run the brute-force matcher and compare");

  PartitionOptions part_opt;
  auto* part_cmd = app.add_subcommand("partition", "partition a graph");
  part_cmd->add_option("--graph", part_opt.graph_path, "graph file")
      ->required();
  part_cmd->add_option("--strategy", part_opt.strategy, "hash|kway");
  part_cmd->add_option("--partitions", part_opt.partitions, "partition count");
  part_cmd->add_option("--epsilon", part_opt.epsilon, "k-way balance slack");
  part_cmd->add_option("--seed", part_opt.seed, "k-way seed");
  part_cmd->add_option("--output", part_opt.output, "output path (stdout "
                       "when omitted)");

  BenchOptions bench_opt;
  auto* bench_cmd =
      app.add_subcommand("bench", "sweep workers/designs/redundancy");
  add_run_options(bench_cmd, bench_opt.run);
  bench_cmd->add_option("--sweep-workers", bench_opt.sweep_workers,
                        "comma-separated worker counts");
  bench_cmd->add_option("--reps", bench_opt.reps, "repetitions per point");
  bench_cmd->add_option("--summary", bench_opt.summary_path,
                        "summary CSV path");

  SynthOptions synth_opt;
  auto* synth_cmd = app.add_subcommand("synth", "write a synthetic graph");
  synth_cmd->add_option("--vertices", synth_opt.vertices, "vertex count")
      ->required();
  synth_cmd->add_option("--edges", synth_opt.edges, "edge count")->required();
  synth_cmd->add_option("--labels", synth_opt.labels, "label count");
  synth_cmd->add_option("--model", synth_opt.model, "uniform|clustered");
  synth_cmd->add_option("--seed", synth_opt.seed, "generator seed");
  synth_cmd->add_option("--output", synth_opt.output, "output path (stdout "
                        "when omitted)");

  try {
    app.parse(argc, argv);
    bench_opt.design_given = bench_cmd->count("--design") > 0;
    if (run_cmd->parsed()) return cmd_run(run_opt);
    if (part_cmd->parsed()) return cmd_partition(part_opt);
    if (bench_cmd->parsed()) return cmd_bench(bench_opt);
    if (synth_cmd->parsed()) return cmd_synth(synth_opt);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
