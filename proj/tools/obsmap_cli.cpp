// obsmap: command-line front end over the library.
//
// Exit codes: 0 success, 2 parameter error, 1 runtime or I/O error.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "obsmap/errors.hpp"
#include "obsmap/graph.hpp"
#include "obsmap/harness.hpp"
#include "obsmap/observation.hpp"
#include "obsmap/spectral.hpp"
#include "obsmap/theory.hpp"

namespace {

using namespace obsmap;

constexpr int kExitRuntime = 1;
constexpr int kExitParameter = 2;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string fmt(const std::optional<double>& x) { return x ? fmt(*x) : "n/a"; }

std::pair<VertexId, int> parse_regular_spec(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw ParameterError("--regular expects N,R");
  try {
    std::size_t used = 0;
    const int n = std::stoi(text.substr(0, comma), &used);
    if (used != comma) throw ParameterError("--regular expects N,R");
    const std::string rest = text.substr(comma + 1);
    const int r = std::stoi(rest, &used);
    if (used != rest.size()) throw ParameterError("--regular expects N,R");
    return {n, r};
  } catch (const std::logic_error&) {
    throw ParameterError("--regular expects N,R, got \"" + text + "\"");
  }
}

Graph load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  EdgeListResult parsed = from_edge_list(in);
  if (parsed.duplicates_dropped + parsed.self_loops_dropped > 0) {
    std::cerr << "note: dropped " << parsed.duplicates_dropped << " duplicate edges and "
              << parsed.self_loops_dropped << " self-loops\n";
  }
  if (parsed.graph.n() == 0) throw ParameterError(path + " contains no edges");
  if (!is_connected(parsed.graph)) {
    InducedSubgraph lcc = largest_connected_component(parsed.graph);
    std::cerr << "note: graph is disconnected; using the largest component (" << lcc.graph.n()
              << " of " << parsed.graph.n() << " vertices)\n";
    return std::move(lcc.graph);
  }
  return std::move(parsed.graph);
}

// Options shared by the single-instance subcommands.
struct InstanceOptions {
  std::string graph_path;
  std::string regular;
  std::uint64_t seed = 0;
  int anchors = 1;
  std::string strategy = "random";
  int m = 0;
  std::string eta = "0.1";
  std::string quantizer = "relative";
  std::string scaled = "true";
  int resamples = 1;

  void attach(CLI::App* cmd, bool with_resamples) {
    auto* g = cmd->add_option("--graph", graph_path, "edge-list file");
    auto* r = cmd->add_option("--regular", regular, "random regular graph N,R");
    g->excludes(r);
    r->excludes(g);
    cmd->add_option("--seed", seed, "master seed")->capture_default_str();
    cmd->add_option("--anchors", anchors, "number of anchors (>= 1)")->capture_default_str();
    cmd->add_option("--strategy", strategy, "random | farthest | degree")->capture_default_str();
    cmd->add_option("--m", m, "spectral dimension")->capture_default_str();
    cmd->add_option("--eta", eta, "quantization step")->capture_default_str();
    cmd->add_option("--quantizer", quantizer, "absolute | relative")->capture_default_str();
    cmd->add_option("--scaled", scaled, "scale energies by n (true | false)")
        ->capture_default_str();
    if (with_resamples) {
      cmd->add_option("--resamples", resamples, "anchor resamples")->capture_default_str();
    }
  }

  ConfigPoint point(VertexId n, int r) const {
    if (anchors < 1) throw ParameterError("--anchors must be at least 1");
    if (m < 0) throw ParameterError("--m must be non-negative");
    if (resamples < 1) throw ParameterError("--resamples must be at least 1");
    ConfigPoint p;
    p.n = n;
    p.r = r;
    p.k = anchors;
    p.m = m;
    p.eta = Eta::parse(eta);
    p.quantizer = parse_quantizer(quantizer);
    if (scaled == "true" || scaled == "1") {
      p.scaled = true;
    } else if (scaled == "false" || scaled == "0") {
      p.scaled = false;
    } else {
      throw ParameterError("--scaled expects true or false");
    }
    p.feature = Feature::full;
    p.strategy = parse_strategy(strategy);
    return p;
  }

  // Validates flags before any graph work so parameter errors exit early.
  std::pair<PreparedGraph, ConfigPoint> prepare() const {
    if (graph_path.empty() == regular.empty()) {
      throw ParameterError("give exactly one of --graph or --regular");
    }
    point(2, 0);
    if (!regular.empty()) {
      const auto [n, r] = parse_regular_spec(regular);
      const ConfigPoint p = point(n, r);
      const std::uint64_t s = graph_seed(seed, n, r, 0);
      return {prepare_graph(random_regular(n, r, s), m, s), p};
    }
    Graph g = load_graph_file(graph_path);
    const ConfigPoint p = point(g.n(), 0);
    return {prepare_graph(std::move(g), m, seed), p};
  }
};

int cmd_gen_regular(VertexId n, int r, std::uint64_t seed, const std::string& out_path) {
  const Graph g = random_regular(n, r, seed);
  if (out_path.empty() || out_path == "-") {
    write_edge_list(g, std::cout);
    return 0;
  }
  std::ofstream out(out_path);
  if (!out) throw IoError("cannot open " + out_path + " for writing");
  write_edge_list(g, out);
  if (!out) throw IoError("failed to write " + out_path);
  std::cerr << "wrote " << g.n() << " vertices, " << g.edge_count() << " edges to " << out_path
            << '\n';
  return 0;
}

int cmd_graph_stats(const std::string& path) {
  const Graph g = load_graph_file(path);
  const GraphStats s = structural_stats(g);
  std::cout << std::setprecision(6) << std::fixed;
  std::cout << "nodes\t" << s.n << '\n'
            << "edges\t" << s.edge_count << '\n'
            << "avg_degree\t" << s.avg_degree << '\n'
            << "density\t" << s.density << '\n'
            << "diameter\t" << s.diameter << '\n'
            << "avg_path_length\t" << s.avg_shortest_path_length << '\n'
            << "avg_clustering\t" << s.avg_clustering << '\n'
            << "transitivity\t" << s.transitivity << '\n'
            << "degree_variance\t" << s.degree_variance << '\n'
            << "degree_gini\t" << s.degree_gini << '\n';
  return 0;
}

int cmd_analyze(const InstanceOptions& opt, const std::string& csv_path) {
  auto [pg, point] = opt.prepare();
  std::vector<TrialRecord> records;
  for (int s = 0; s < opt.resamples; ++s) records.push_back(evaluate_point(pg, point, 0, s));
  const ConfigAggregate agg = aggregate_records(records).front();

  bool bounds_ok = true;
  std::size_t refined_na = 0;
  for (const auto& r : records) {
    bounds_ok = bounds_ok && r.bounds_ok;
    if (!r.refined_bound) ++refined_na;
  }
  std::cout << "graph: n=" << pg.graph.n() << " edges=" << pg.graph.edge_count()
            << " seed=" << pg.seed << '\n'
            << "config: k=" << point.k << " strategy=" << to_string(point.strategy)
            << " m=" << point.m << " eta=" << point.eta.text
            << " quantizer=" << to_string(point.quantizer)
            << " scaled=" << (point.scaled ? "true" : "false") << " resamples=" << opt.resamples
            << '\n'
            << "error\t" << fmt(agg.error.mean) << " (sd " << fmt(agg.error.stdev) << ")\n"
            << "image_frac\t" << fmt(agg.image_frac.mean) << '\n'
            << "mean_preimage\t" << fmt(agg.mean_preimage.mean) << '\n'
            << "singleton_frac\t" << fmt(agg.singleton_frac.mean) << '\n'
            << "codebook_size\t" << fmt(agg.codebook_size.mean) << '\n'
            << "profile_count\t" << fmt(agg.profile_count.mean) << '\n'
            << "bounds\t" << (bounds_ok ? "ok" : "VIOLATED") << " (refined bound n/a in "
            << refined_na << " of " << records.size() << " resamples)\n";
  if (records.front().degenerate) {
    std::cerr << "warning: eigenvalue gap below tolerance within the retained spectrum\n";
  }
  if (!csv_path.empty()) {
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw IoError("cannot open " + csv_path + " for writing");
    write_csv(records, out);
  }
  return 0;
}

int cmd_diagnose(const InstanceOptions& opt, const std::string& out_path) {
  auto [pg, point] = opt.prepare();
  const AnchorSet anchors = select_anchors(pg.graph, point.k, point.strategy,
                                           anchor_seed(pg.seed, point.k, 0, point.strategy));
  QuantizedCodes codes = QuantizedCodes::empty(pg.graph.n());
  if (point.m > 0) {
    codes = quantize(energy_embedding(pg.basis, point.m, point.scaled), point.quantizer,
                     point.eta.value);
  }
  const ObservationTable table = build_observation(pg.graph, anchors, codes);
  const BucketDiagnostics d = bucket_diagnostics(table);
  const BoundReport bounds = bound_report(table);

  std::cout << "n\t" << table.n() << '\n'
            << "image_size\t" << table.image_size() << '\n'
            << "profile_count\t" << table.profile_count() << '\n'
            << "codebook_size\t" << bounds.generic.codebook_size << '\n'
            << "singleton_bucket_frac\t" << fmt(d.singleton_bucket_fraction) << '\n';
  for (const BucketAggregate* a : {&d.all, &d.large3, &d.large10}) {
    std::cout << "buckets>=" << a->cutoff << "\tcount=" << a->bucket_count
              << "\tweighted_collision=" << fmt(a->weighted_collision)
              << "\tmedian_code_ratio=" << fmt(a->median_code_ratio)
              << "\tq90_balance=" << fmt(a->q90_balance)
              << "\tmedian_collision=" << fmt(a->median_collision)
              << "\tmedian_balance=" << fmt(a->median_balance) << '\n';
  }
  std::cout << "generic_bound\t" << bounds.generic.bound
            << (bounds.generic.satisfied ? " ok" : " VIOLATED") << '\n';
  if (bounds.refined) {
    std::cout << "refined_bound\t" << fmt(bounds.refined->bound)
              << (bounds.refined->satisfied ? " ok" : " VIOLATED")
              << " (beta=" << fmt(bounds.refined->max_balance)
              << ", c=" << fmt(bounds.refined->min_collision) << ")\n";
  } else {
    std::cout << "refined_bound\tn/a\n";
  }

  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw IoError("cannot open " + out_path + " for writing");
    out << "bucket,size,code_count,max_occupancy,collision,balance,per_bucket_bound,holds\n";
    char buf[40];
    for (std::size_t i = 0; i < d.buckets.size(); ++i) {
      const BucketSummary& b = d.buckets[i];
      out << i << ',' << b.size << ',' << b.code_count << ',' << b.max_occupancy << ',';
      std::snprintf(buf, sizeof buf, "%.17g", b.collision);
      out << buf << ',';
      std::snprintf(buf, sizeof buf, "%.17g", b.balance);
      out << buf << ',';
      std::snprintf(buf, sizeof buf, "%.17g", per_bucket_bound(b));
      out << buf << ',' << (per_bucket_bound_holds(b) ? "true" : "false") << '\n';
    }
    if (!out) throw IoError("failed to write " + out_path);
  }
  return 0;
}

struct SweepOptions {
  std::string config_path;
  std::string out_path;
  std::vector<int> n, k, m;
  std::vector<std::string> eta, feature, strategy;
  std::optional<int> trials, resamples, r;
  std::optional<std::string> quantizer, scaled;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> jobs;
  bool wall_time = false;
  bool quiet = false;
};

SweepConfig build_sweep_config(const SweepOptions& o) {
  SweepConfig cfg;
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw IoError("cannot open " + o.config_path);
    try {
      cfg = parse_sweep_config(in);
    } catch (const ParseError& e) {
      throw ParameterError(o.config_path + ": " + e.what());
    }
  }
  if (!o.n.empty()) cfg.n_list.assign(o.n.begin(), o.n.end());
  if (!o.k.empty()) cfg.k_list = o.k;
  if (!o.m.empty()) cfg.m_list = o.m;
  if (!o.eta.empty()) {
    cfg.eta_list.clear();
    for (const auto& e : o.eta) cfg.eta_list.push_back(Eta::parse(e));
  }
  if (!o.feature.empty()) {
    cfg.features.clear();
    for (const auto& f : o.feature) cfg.features.push_back(parse_feature(f));
  }
  if (!o.strategy.empty()) {
    cfg.strategies.clear();
    for (const auto& s : o.strategy) cfg.strategies.push_back(parse_strategy(s));
  }
  if (o.trials) cfg.trials = *o.trials;
  if (o.resamples) cfg.anchor_resamples = *o.resamples;
  if (o.r) cfg.r = *o.r;
  if (o.quantizer) cfg.quantizer = parse_quantizer(*o.quantizer);
  if (o.scaled) {
    if (*o.scaled == "true" || *o.scaled == "1") {
      cfg.scaled = true;
    } else if (*o.scaled == "false" || *o.scaled == "0") {
      cfg.scaled = false;
    } else {
      throw ParameterError("--scaled expects true or false");
    }
  }
  if (o.seed) cfg.seed = *o.seed;
  if (o.jobs) cfg.jobs = *o.jobs;
  if (o.wall_time) cfg.record_wall_time = true;
  cfg.validate();
  return cfg;
}

int cmd_sweep(const SweepOptions& o) {
  const SweepConfig cfg = build_sweep_config(o);
  {
    // Fail on an unwritable destination before spending time on the sweep.
    std::ofstream probe(o.out_path, std::ios::binary | std::ios::app);
    if (!probe) throw IoError("cannot open " + o.out_path + " for writing");
  }
  ProgressFn progress;
  if (!o.quiet) progress = [](std::string_view msg) { std::cerr << msg << '\n'; };
  const SweepResult result = run_sweep(cfg, progress);
  write_csv(result, o.out_path);
  std::size_t failures = 0;
  for (const auto& r : result.records) failures += r.failure ? 1 : 0;
  std::cerr << "wrote " << result.records.size() << " rows to " << o.out_path;
  if (failures > 0) std::cerr << " (" << failures << " failed)";
  std::cerr << '\n';
  return 0;
}

int cmd_kemp(const std::string& in_path, const std::string& threshold_text) {
  const double threshold = Eta::parse(threshold_text).value;
  if (threshold > 1) throw ParameterError("--threshold must lie in (0, 1]");
  std::ifstream in(in_path);
  if (!in) throw IoError("cannot open " + in_path);
  const auto records = read_csv(in);
  if (records.empty()) throw IoError(in_path + " has no data rows");
  const auto rows = kemp_table(records, threshold);
  std::cout << "n\tr\tm\teta\tquantizer\tscaled\tfeature\tanchor_strategy\tk_emp\trho\t"
               "image_frac\tmean_preimage\tcodebook\n";
  for (const auto& row : rows) {
    const auto& g = row.group;
    std::cout << g.n << '\t' << g.r << '\t' << g.m << '\t' << g.eta.text << '\t'
              << to_string(g.quantizer) << '\t' << (g.scaled ? "true" : "false") << '\t'
              << to_string(g.feature) << '\t' << to_string(g.strategy) << '\t';
    if (row.k_emp) {
      char rho[16];
      std::snprintf(rho, sizeof rho, "%.3f", row.rho.value_or(0.0));
      std::cout << *row.k_emp << '\t' << (row.rho ? rho : "n/a") << '\t' << fmt(row.image_frac)
                << '\t' << fmt(row.mean_preimage) << '\t' << fmt(row.codebook_size) << '\n';
    } else {
      std::cout << "none\tn/a\tn/a\tn/a\tn/a\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anchor-distance and spectral observation maps on graphs"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen-regular", "sample a connected simple random regular graph");
  int gen_n = 0, gen_r = 3;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("--n", gen_n, "vertex count")->required();
  gen->add_option("--r", gen_r, "degree")->capture_default_str();
  gen->add_option("--seed", gen_seed, "seed")->capture_default_str();
  gen->add_option("--out", gen_out, "output edge list (default stdout)");

  auto* stats = app.add_subcommand("graph-stats", "structural statistics of an edge list");
  std::string stats_path;
  stats->add_option("--graph", stats_path, "edge-list file")->required();

  auto* analyze = app.add_subcommand("analyze", "evaluate one configuration on one graph");
  InstanceOptions analyze_opt;
  std::string analyze_csv;
  analyze_opt.attach(analyze, true);
  analyze->add_option("--csv", analyze_csv, "write per-resample rows as CSV");

  auto* diagnose = app.add_subcommand("diagnose-buckets", "per-bucket collision and balance");
  InstanceOptions diagnose_opt;
  std::string diagnose_out;
  diagnose_opt.attach(diagnose, false);
  diagnose->add_option("--out", diagnose_out, "write the per-bucket table as CSV");

  auto* sweep = app.add_subcommand("sweep", "run a parameter grid and write a trial CSV");
  SweepOptions sw;
  sweep->add_option("--config", sw.config_path, "key = value grid file");
  sweep->add_option("--out", sw.out_path, "output CSV")->required();
  sweep->add_option("--n", sw.n, "graph sizes")->delimiter(',');
  sweep->add_option("--k", sw.k, "anchor counts")->delimiter(',');
  sweep->add_option("--m", sw.m, "spectral dimensions")->delimiter(',');
  sweep->add_option("--eta", sw.eta, "quantization steps")->delimiter(',');
  sweep->add_option("--feature", sw.feature, "nope | distance | spectral | full")->delimiter(',');
  sweep->add_option("--strategy", sw.strategy, "random | farthest | degree")->delimiter(',');
  sweep->add_option("--trials", sw.trials, "graphs per size");
  sweep->add_option("--resamples", sw.resamples, "anchor resamples per graph");
  sweep->add_option("--r", sw.r, "degree");
  sweep->add_option("--quantizer", sw.quantizer, "absolute | relative");
  sweep->add_option("--scaled", sw.scaled, "true | false");
  sweep->add_option("--seed", sw.seed, "master seed");
  sweep->add_option("--jobs", sw.jobs, "worker threads (default: all cores)");
  sweep->add_flag("--wall-time", sw.wall_time, "record per-row wall time (breaks byte identity)");
  sweep->add_flag("--quiet", sw.quiet, "no progress output");

  auto* kemp = app.add_subcommand("kemp", "empirical anchor thresholds from a sweep CSV");
  std::string kemp_in, kemp_threshold = "0.1";
  kemp->add_option("--in", kemp_in, "sweep CSV")->required();
  kemp->add_option("--threshold", kemp_threshold, "mean-error threshold")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParameter;
  }

  try {
    if (*gen) return cmd_gen_regular(gen_n, gen_r, gen_seed, gen_out);
    if (*stats) return cmd_graph_stats(stats_path);
    if (*analyze) return cmd_analyze(analyze_opt, analyze_csv);
    if (*diagnose) return cmd_diagnose(diagnose_opt, diagnose_out);
    if (*sweep) return cmd_sweep(sw);
    if (*kemp) return cmd_kemp(kemp_in, kemp_threshold);
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParameter;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitParameter;
}
