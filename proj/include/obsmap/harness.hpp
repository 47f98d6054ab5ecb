#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "obsmap/graph.hpp"
#include "obsmap/observation.hpp"
#include "obsmap/spectral.hpp"
#include "obsmap/theory.hpp"

namespace obsmap {

// Which code components enter the observation map.
enum class Feature { nope, distance, spectral, full };
enum class AnchorStrategy { random, farthest, degree };

std::string_view to_string(Feature f) noexcept;
std::string_view to_string(AnchorStrategy s) noexcept;
Feature parse_feature(std::string_view text);
AnchorStrategy parse_strategy(std::string_view text);

// Quantization step kept together with the decimal text it was given as, so
// grouping keys and CSV cells never depend on float formatting.
struct Eta {
  std::string text;
  double value = 0;

  static Eta parse(std::string_view text);
};

struct ConfigPoint {
  VertexId n = 0;
  int r = 3;
  int k = 0;
  int m = 0;
  Eta eta;
  Quantizer quantizer = Quantizer::relative;
  bool scaled = true;
  Feature feature = Feature::full;
  AnchorStrategy strategy = AnchorStrategy::random;
};

// Total order used for row ordering and grouping: n, r, k, m, eta value,
// quantizer, scaling, feature, strategy.
bool config_less(const ConfigPoint& a, const ConfigPoint& b);
bool config_equal(const ConfigPoint& a, const ConfigPoint& b);

struct SweepConfig {
  std::vector<VertexId> n_list;
  std::vector<int> k_list;
  std::vector<int> m_list{0};
  std::vector<Eta> eta_list{Eta::parse("0.1")};
  int trials = 20;
  int anchor_resamples = 1;
  int r = 3;
  Quantizer quantizer = Quantizer::relative;
  bool scaled = true;
  std::vector<Feature> features{Feature::full};
  std::vector<AnchorStrategy> strategies{AnchorStrategy::random};
  std::uint64_t seed = 0;
  double error_threshold = 0.1;
  bool record_wall_time = false;  // off keeps the CSV byte-reproducible
  unsigned jobs = 0;              // 0: hardware concurrency

  void validate() const;
  // Grid points in config_less order, duplicates removed.
  std::vector<ConfigPoint> points() const;
};

// key = v1, v2, ... lines; '#' comments; optional [ ] around lists.
SweepConfig parse_sweep_config(std::istream& in);

struct TrialRecord {
  ConfigPoint point;
  int trial = 0;
  int resample = 0;
  std::uint64_t seed = 0;  // graph seed; anchors derive from it with (k, resample, strategy)
  std::optional<std::string> failure;

  double error = 0;
  double image_frac = 0;
  double mean_preimage = 0;
  double singleton_frac = 0;
  std::size_t image_size = 0;
  std::size_t codebook_size = 0;
  std::size_t profile_count = 0;
  double singleton_bucket_frac = 0;
  std::optional<double> weighted_collision;
  std::optional<double> median_code_ratio;
  std::optional<double> q90_balance;
  std::size_t generic_bound = 0;
  std::optional<double> refined_bound;
  bool bounds_ok = false;  // generic, refined and every per-bucket inequality
  bool degenerate = false;  // not serialized
  std::optional<double> wall_time_ms;
};

struct MetricSummary {
  std::size_t count = 0;
  double mean = 0;
  double stdev = 0;  // sample standard deviation; 0 when count < 2
};

struct ConfigAggregate {
  ConfigPoint point;
  std::size_t count = 0;
  std::size_t failures = 0;
  MetricSummary error;
  MetricSummary image_frac;
  MetricSummary mean_preimage;
  MetricSummary singleton_frac;
  MetricSummary codebook_size;
  MetricSummary profile_count;
  MetricSummary singleton_bucket_frac;
  MetricSummary weighted_collision;  // over records where it applies
  MetricSummary median_code_ratio;
  MetricSummary q90_balance;
};

struct SweepResult {
  std::vector<TrialRecord> records;
  std::vector<ConfigAggregate> aggregates;
};

std::vector<ConfigAggregate> aggregate_records(const std::vector<TrialRecord>& records);

std::uint64_t graph_seed(std::uint64_t master, VertexId n, int r, int trial);
std::uint64_t anchor_seed(std::uint64_t graph_seed, int k, int resample, AnchorStrategy s);

// random: uniform without replacement, in draw order. degree: k largest
// degrees, smaller id first on ties. farthest: first anchor uniform, then the
// vertex maximizing the minimum distance to the chosen set (smaller id on ties).
AnchorSet select_anchors(const Graph& g, int k, AnchorStrategy strategy, std::uint64_t seed);

// A graph with its eigenbasis computed once for every spectral dimension up
// to max_m.
struct PreparedGraph {
  Graph graph;
  SpectralBasis basis;
  std::uint64_t seed = 0;
};

PreparedGraph prepare_graph(Graph graph, int max_m, std::uint64_t seed);

// Evaluates one configuration point on a prepared graph. point.n and point.r
// are copied into the record as given.
TrialRecord evaluate_point(const PreparedGraph& pg, const ConfigPoint& point, int trial,
                           int resample, bool timed = false);

// Samples the graph for (master, n, r, trial) and evaluates one point. The
// eigenbasis is computed to depth max(point.m, basis_depth); a sweep passes
// its largest m here so single rows can be reproduced exactly.
TrialRecord run_trial(const ConfigPoint& point, int trial, int resample,
                      std::uint64_t master_seed, int basis_depth = 0);

using ProgressFn = std::function<void(std::string_view)>;

// Rows come out in config_less order, then trial, then resample, however
// many workers run. A failing graph or point marks its rows and the sweep
// continues.
SweepResult run_sweep(const SweepConfig& cfg, const ProgressFn& progress = {});

// Smallest k in the record set with mean error <= threshold at (n, m, eta).
// Throws ParameterError when no record matches or when the matching records
// mix other configuration coordinates.
std::optional<int> k_emp(const std::vector<TrialRecord>& records, VertexId n, int m,
                         std::string_view eta, double threshold = 0.1);

struct KempRow {
  ConfigPoint group;  // k unused
  std::optional<int> k_emp;
  std::optional<double> rho;
  double image_frac = 0;
  double mean_preimage = 0;
  double codebook_size = 0;
};

// One row per (n, r, m, eta, quantizer, scaling, feature, strategy) group.
std::vector<KempRow> kemp_table(const std::vector<TrialRecord>& records, double threshold);

// Fixed column order of the trial CSV.
const std::vector<std::string>& csv_columns();

void write_csv(const std::vector<TrialRecord>& records, std::ostream& out);
void write_csv(const SweepResult& result, const std::filesystem::path& path);
std::vector<TrialRecord> read_csv(std::istream& in);

}  // namespace obsmap
