#include "obsmap/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

#include "obsmap/errors.hpp"
#include "obsmap/rng.hpp"

namespace obsmap {

namespace {

constexpr std::string_view kNotApplicable = "n/a";
constexpr std::string_view kFailed = "failed";

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(std::string_view text) {
  std::string body = trim(text);
  if (!body.empty() && body.front() == '[') {
    if (body.back() != ']') throw ParameterError("unterminated list: " + body);
    body = body.substr(1, body.size() - 2);
  }
  std::vector<std::string> items;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.size() >= 2 && item.front() == '"' && item.back() == '"') {
      item = item.substr(1, item.size() - 2);
    }
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

template <typename T>
T parse_number(std::string_view text) {
  T value{};
  const auto s = trim(text);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParameterError("not a number: \"" + s + "\"");
  }
  return value;
}

bool parse_bool(std::string_view text) {
  const auto s = trim(text);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ParameterError("not a boolean: \"" + s + "\"");
}

auto key_of(const ConfigPoint& p) {
  return std::make_tuple(p.n, p.r, p.k, p.m, p.eta.value, std::string_view(p.eta.text),
                         static_cast<int>(p.quantizer), p.scaled, static_cast<int>(p.feature),
                         static_cast<int>(p.strategy));
}

// Same as key_of with k left out: the grouping used for anchor thresholds.
auto group_key_of(const ConfigPoint& p) {
  return std::make_tuple(p.n, p.r, p.m, p.eta.value, std::string_view(p.eta.text),
                         static_cast<int>(p.quantizer), p.scaled, static_cast<int>(p.feature),
                         static_cast<int>(p.strategy));
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_optional(const std::optional<double>& x) {
  return x ? format_double(*x) : std::string(kNotApplicable);
}

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

// RFC 4180 record reader; returns false at end of input.
bool read_csv_record(std::istream& in, std::vector<std::string>& fields) {
  fields.clear();
  if (in.peek() == std::char_traits<char>::eof()) return false;
  std::string field;
  bool quoted = false;
  char c;
  while (in.get(c)) {
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      break;
    } else if (c != '\r') {
      field += c;
    }
  }
  fields.push_back(std::move(field));
  return true;
}

std::optional<double> parse_optional(const std::string& s) {
  if (s == kNotApplicable) return std::nullopt;
  return parse_number<double>(s);
}

void summarize(MetricSummary& out, const std::vector<double>& xs) {
  out.count = xs.size();
  if (xs.empty()) return;
  out.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  if (xs.size() < 2) return;
  double ss = 0;
  for (double x : xs) ss += (x - out.mean) * (x - out.mean);
  out.stdev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

std::size_t hardware_jobs() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace

std::string_view to_string(Feature f) noexcept {
  switch (f) {
    case Feature::nope: return "nope";
    case Feature::distance: return "distance";
    case Feature::spectral: return "spectral";
    case Feature::full: return "full";
  }
  return "full";
}

std::string_view to_string(AnchorStrategy s) noexcept {
  switch (s) {
    case AnchorStrategy::random: return "random";
    case AnchorStrategy::farthest: return "farthest";
    case AnchorStrategy::degree: return "degree";
  }
  return "random";
}

Feature parse_feature(std::string_view text) {
  for (auto f : {Feature::nope, Feature::distance, Feature::spectral, Feature::full}) {
    if (text == to_string(f)) return f;
  }
  throw ParameterError("unknown feature: " + std::string(text));
}

AnchorStrategy parse_strategy(std::string_view text) {
  for (auto s : {AnchorStrategy::random, AnchorStrategy::farthest, AnchorStrategy::degree}) {
    if (text == to_string(s)) return s;
  }
  throw ParameterError("unknown anchor strategy: " + std::string(text));
}

Eta Eta::parse(std::string_view text) {
  Eta eta;
  eta.text = trim(text);
  eta.value = parse_number<double>(eta.text);
  if (!(eta.value > 0) || !std::isfinite(eta.value)) {
    throw ParameterError("eta must be a positive number, got \"" + eta.text + "\"");
  }
  return eta;
}

bool config_less(const ConfigPoint& a, const ConfigPoint& b) { return key_of(a) < key_of(b); }
bool config_equal(const ConfigPoint& a, const ConfigPoint& b) { return key_of(a) == key_of(b); }

void SweepConfig::validate() const {
  if (n_list.empty() || k_list.empty() || m_list.empty() || eta_list.empty() ||
      features.empty() || strategies.empty()) {
    throw ParameterError("sweep grid lists must be non-empty");
  }
  if (trials < 1) throw ParameterError("trials must be at least 1");
  if (anchor_resamples < 1) throw ParameterError("anchor resamples must be at least 1");
  if (!(error_threshold > 0 && error_threshold < 1)) {
    throw ParameterError("error threshold must lie in (0, 1)");
  }
  for (int k : k_list) {
    if (k < 0) throw ParameterError("anchor counts must be non-negative");
  }
  for (int m : m_list) {
    if (m < 0) throw ParameterError("spectral dimensions must be non-negative");
  }
  for (VertexId n : n_list) {
    if (n < 2) throw ParameterError("graph sizes must be at least 2");
  }
}

std::vector<ConfigPoint> SweepConfig::points() const {
  std::vector<ConfigPoint> out;
  for (VertexId n : n_list)
    for (int k : k_list)
      for (int m : m_list)
        for (const Eta& eta : eta_list)
          for (Feature f : features)
            for (AnchorStrategy s : strategies) {
              out.push_back({n, r, k, m, eta, quantizer, scaled, f, s});
            }
  std::sort(out.begin(), out.end(), config_less);
  out.erase(std::unique(out.begin(), out.end(), config_equal), out.end());
  return out;
}

SweepConfig parse_sweep_config(std::istream& in) {
  SweepConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const std::string body = trim(line.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected key = value");
    const std::string key = trim(body.substr(0, eq));
    std::vector<std::string> items;
    try {
      items = split_list(body.substr(eq + 1));
    } catch (const ParameterError& e) {
      throw ParseError(line_no, e.what());
    }
    if (items.empty()) throw ParseError(line_no, "empty value for " + key);
    auto single = [&]() -> const std::string& {
      if (items.size() != 1) throw ParseError(line_no, key + " takes a single value");
      return items.front();
    };
    try {
      if (key == "n") {
        cfg.n_list.clear();
        for (const auto& s : items) cfg.n_list.push_back(parse_number<VertexId>(s));
      } else if (key == "k") {
        cfg.k_list.clear();
        for (const auto& s : items) cfg.k_list.push_back(parse_number<int>(s));
      } else if (key == "m") {
        cfg.m_list.clear();
        for (const auto& s : items) cfg.m_list.push_back(parse_number<int>(s));
      } else if (key == "eta") {
        cfg.eta_list.clear();
        for (const auto& s : items) cfg.eta_list.push_back(Eta::parse(s));
      } else if (key == "trials") {
        cfg.trials = parse_number<int>(single());
      } else if (key == "resamples" || key == "anchor_resamples") {
        cfg.anchor_resamples = parse_number<int>(single());
      } else if (key == "r") {
        cfg.r = parse_number<int>(single());
      } else if (key == "quantizer") {
        cfg.quantizer = parse_quantizer(single());
      } else if (key == "scaled") {
        cfg.scaled = parse_bool(single());
      } else if (key == "feature" || key == "features") {
        cfg.features.clear();
        for (const auto& s : items) cfg.features.push_back(parse_feature(s));
      } else if (key == "strategy" || key == "anchor_strategy") {
        cfg.strategies.clear();
        for (const auto& s : items) cfg.strategies.push_back(parse_strategy(s));
      } else if (key == "seed") {
        cfg.seed = parse_number<std::uint64_t>(single());
      } else if (key == "threshold" || key == "error_threshold") {
        cfg.error_threshold = parse_number<double>(single());
      } else if (key == "wall_time") {
        cfg.record_wall_time = parse_bool(single());
      } else if (key == "jobs") {
        cfg.jobs = parse_number<unsigned>(single());
      } else {
        throw ParseError(line_no, "unknown key: " + key);
      }
    } catch (const ParameterError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return cfg;
}

std::uint64_t graph_seed(std::uint64_t master, VertexId n, int r, int trial) {
  return mix_seed({master, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(r),
                   static_cast<std::uint64_t>(trial)});
}

std::uint64_t anchor_seed(std::uint64_t graph_seed, int k, int resample, AnchorStrategy s) {
  return mix_seed({graph_seed, static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(resample),
                   static_cast<std::uint64_t>(s)});
}

AnchorSet select_anchors(const Graph& g, int k, AnchorStrategy strategy, std::uint64_t seed) {
  const VertexId n = g.n();
  if (k < 0) throw ParameterError("anchor count must be non-negative");
  if (k > n) {
    throw ParameterError("cannot choose " + std::to_string(k) + " anchors from " +
                         std::to_string(n) + " vertices");
  }
  std::vector<VertexId> chosen;
  chosen.reserve(static_cast<std::size_t>(k));
  if (k == 0) return AnchorSet(chosen, n);

  switch (strategy) {
    case AnchorStrategy::random: {
      Rng rng(seed);
      std::vector<VertexId> pool(static_cast<std::size_t>(n));
      std::iota(pool.begin(), pool.end(), VertexId{0});
      for (int i = 0; i < k; ++i) {
        const auto j = static_cast<std::size_t>(i) + rng.below(static_cast<std::uint64_t>(n - i));
        std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
        chosen.push_back(pool[static_cast<std::size_t>(i)]);
      }
      break;
    }
    case AnchorStrategy::degree: {
      std::vector<VertexId> order(static_cast<std::size_t>(n));
      std::iota(order.begin(), order.end(), VertexId{0});
      std::stable_sort(order.begin(), order.end(),
                       [&](VertexId a, VertexId b) { return g.degree(a) > g.degree(b); });
      chosen.assign(order.begin(), order.begin() + k);
      break;
    }
    case AnchorStrategy::farthest: {
      Rng rng(seed);
      chosen.push_back(static_cast<VertexId>(rng.below(static_cast<std::uint64_t>(n))));
      std::vector<std::int32_t> nearest = bfs_distances(g, chosen.front());
      while (static_cast<int>(chosen.size()) < k) {
        // Strict comparison keeps the smaller id on ties; chosen vertices sit at 0.
        VertexId best = 0;
        for (VertexId v = 1; v < n; ++v) {
          if (nearest[v] > nearest[best]) best = v;
        }
        chosen.push_back(best);
        const auto dist = bfs_distances(g, best);
        for (VertexId v = 0; v < n; ++v) nearest[v] = std::min(nearest[v], dist[v]);
      }
      break;
    }
  }
  return AnchorSet(std::move(chosen), n);
}

PreparedGraph prepare_graph(Graph graph, int max_m, std::uint64_t seed) {
  PreparedGraph pg;
  pg.seed = seed;
  pg.basis = low_frequency_basis(normalized_laplacian(graph), max_m);
  pg.graph = std::move(graph);
  return pg;
}

TrialRecord evaluate_point(const PreparedGraph& pg, const ConfigPoint& point, int trial,
                           int resample, bool timed) {
  const auto start = std::chrono::steady_clock::now();
  TrialRecord rec;
  rec.point = point;
  rec.trial = trial;
  rec.resample = resample;
  rec.seed = pg.seed;

  const bool use_distance = point.feature == Feature::distance || point.feature == Feature::full;
  const bool use_spectral = point.feature == Feature::spectral || point.feature == Feature::full;
  const VertexId n = pg.graph.n();

  AnchorSet anchors;
  if (use_distance) {
    anchors = select_anchors(pg.graph, point.k, point.strategy,
                             anchor_seed(pg.seed, point.k, resample, point.strategy));
  }
  QuantizedCodes codes = QuantizedCodes::empty(n);
  if (use_spectral && point.m > 0) {
    const auto emb = energy_embedding(pg.basis, point.m, point.scaled);
    codes = quantize(emb, point.quantizer, point.eta.value);
  }
  if (use_spectral) {
    // Degeneracy within the first m nontrivial pairs or at their upper edge.
    const auto& ev = pg.basis.eigenvalues;
    auto close = [](double a, double b) { return std::abs(a - b) < 1e-9; };
    for (int i = 1; i < point.m; ++i) rec.degenerate |= close(ev(i), ev(i + 1));
    if (point.m >= 1) {
      if (point.m + 1 < ev.size()) {
        rec.degenerate |= close(ev(point.m), ev(point.m + 1));
      } else if (pg.basis.next_eigenvalue) {
        rec.degenerate |= close(ev(point.m), *pg.basis.next_eigenvalue);
      }
    }
  }

  const ObservationTable table = build_observation(pg.graph, anchors, codes);
  const FiberStats fs = fiber_stats(table);
  const BucketDiagnostics diag = bucket_diagnostics(table);
  const BoundReport bounds = bound_report(table);

  rec.image_size = fs.image_size;
  rec.image_frac = fs.success;
  rec.error = 1.0 - rec.image_frac;
  rec.mean_preimage = fs.vertex_mean_preimage;
  rec.singleton_frac = fs.singleton_fraction;
  rec.codebook_size = bounds.generic.codebook_size;
  rec.profile_count = table.profile_count();
  rec.singleton_bucket_frac = diag.singleton_bucket_fraction;
  rec.weighted_collision = diag.all.weighted_collision;
  rec.median_code_ratio = diag.all.median_code_ratio;
  rec.q90_balance = diag.all.q90_balance;
  rec.generic_bound = bounds.generic.bound;
  if (bounds.refined) rec.refined_bound = bounds.refined->bound;
  rec.bounds_ok = bounds.all_satisfied() &&
                  std::all_of(diag.buckets.begin(), diag.buckets.end(), per_bucket_bound_holds);
  if (timed) {
    rec.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
  }
  return rec;
}

TrialRecord run_trial(const ConfigPoint& point, int trial, int resample,
                      std::uint64_t master_seed, int basis_depth) {
  const std::uint64_t seed = graph_seed(master_seed, point.n, point.r, trial);
  PreparedGraph pg = prepare_graph(random_regular(point.n, point.r, seed),
                                   std::max(point.m, basis_depth), seed);
  return evaluate_point(pg, point, trial, resample);
}

SweepResult run_sweep(const SweepConfig& cfg, const ProgressFn& progress) {
  cfg.validate();
  const auto points = cfg.points();
  const int max_m = *std::max_element(cfg.m_list.begin(), cfg.m_list.end());

  struct Job {
    VertexId n;
    int trial;
    std::vector<TrialRecord> rows;
  };
  std::vector<Job> jobs;
  std::vector<VertexId> sizes = cfg.n_list;
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  for (VertexId n : sizes)
    for (int t = 0; t < cfg.trials; ++t) jobs.push_back({n, t, {}});

  std::mutex progress_mutex;
  auto report = [&](const std::string& msg) {
    if (!progress) return;
    std::lock_guard lock(progress_mutex);
    progress(msg);
  };

  auto failed_row = [&](const ConfigPoint& p, int trial, int resample, std::uint64_t seed,
                        const std::string& why) {
    TrialRecord rec;
    rec.point = p;
    rec.trial = trial;
    rec.resample = resample;
    rec.seed = seed;
    rec.failure = why;
    return rec;
  };

  auto run_job = [&](Job& job) {
    const std::uint64_t seed = graph_seed(cfg.seed, job.n, cfg.r, job.trial);
    std::optional<PreparedGraph> pg;
    std::string graph_failure;
    try {
      pg = prepare_graph(random_regular(job.n, cfg.r, seed), max_m, seed);
    } catch (const std::exception& e) {
      graph_failure = e.what();
    }
    for (const auto& p : points) {
      if (p.n != job.n) continue;
      for (int s = 0; s < cfg.anchor_resamples; ++s) {
        if (!pg) {
          job.rows.push_back(failed_row(p, job.trial, s, seed, graph_failure));
          continue;
        }
        try {
          job.rows.push_back(evaluate_point(*pg, p, job.trial, s, cfg.record_wall_time));
        } catch (const std::exception& e) {
          job.rows.push_back(failed_row(p, job.trial, s, seed, e.what()));
        }
      }
    }
    report("n=" + std::to_string(job.n) + " trial " + std::to_string(job.trial + 1) + "/" +
           std::to_string(cfg.trials) + (pg ? "" : " FAILED: " + graph_failure));
  };

  const std::size_t workers =
      std::min<std::size_t>(cfg.jobs == 0 ? hardware_jobs() : cfg.jobs, jobs.size());
  if (workers <= 1) {
    for (auto& job : jobs) run_job(job);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) run_job(jobs[i]);
      });
    }
    for (auto& t : pool) t.join();
  }

  SweepResult result;
  for (auto& job : jobs) {
    for (auto& row : job.rows) result.records.push_back(std::move(row));
  }
  std::stable_sort(result.records.begin(), result.records.end(),
                   [](const TrialRecord& a, const TrialRecord& b) {
                     if (!config_equal(a.point, b.point)) return config_less(a.point, b.point);
                     return std::tie(a.trial, a.resample) < std::tie(b.trial, b.resample);
                   });
  result.aggregates = aggregate_records(result.records);
  return result;
}

std::vector<ConfigAggregate> aggregate_records(const std::vector<TrialRecord>& records) {
  std::vector<const TrialRecord*> sorted;
  for (const auto& r : records) sorted.push_back(&r);
  std::stable_sort(sorted.begin(), sorted.end(), [](const TrialRecord* a, const TrialRecord* b) {
    return config_less(a->point, b->point);
  });

  std::vector<ConfigAggregate> out;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && config_equal(sorted[i]->point, sorted[j]->point)) ++j;
    ConfigAggregate agg;
    agg.point = sorted[i]->point;
    agg.count = j - i;
    std::vector<double> err, frac, pre, single, code, prof, sbf, wc, mcr, q90;
    for (std::size_t t = i; t < j; ++t) {
      const TrialRecord& r = *sorted[t];
      if (r.failure) {
        ++agg.failures;
        continue;
      }
      err.push_back(r.error);
      frac.push_back(r.image_frac);
      pre.push_back(r.mean_preimage);
      single.push_back(r.singleton_frac);
      code.push_back(static_cast<double>(r.codebook_size));
      prof.push_back(static_cast<double>(r.profile_count));
      sbf.push_back(r.singleton_bucket_frac);
      if (r.weighted_collision) wc.push_back(*r.weighted_collision);
      if (r.median_code_ratio) mcr.push_back(*r.median_code_ratio);
      if (r.q90_balance) q90.push_back(*r.q90_balance);
    }
    summarize(agg.error, err);
    summarize(agg.image_frac, frac);
    summarize(agg.mean_preimage, pre);
    summarize(agg.singleton_frac, single);
    summarize(agg.codebook_size, code);
    summarize(agg.profile_count, prof);
    summarize(agg.singleton_bucket_frac, sbf);
    summarize(agg.weighted_collision, wc);
    summarize(agg.median_code_ratio, mcr);
    summarize(agg.q90_balance, q90);
    out.push_back(std::move(agg));
    i = j;
  }
  return out;
}

std::optional<int> k_emp(const std::vector<TrialRecord>& records, VertexId n, int m,
                         std::string_view eta, double threshold) {
  const double eta_value = Eta::parse(eta).value;
  std::vector<TrialRecord> subset;
  for (const auto& r : records) {
    if (r.point.n == n && r.point.m == m && r.point.eta.value == eta_value) subset.push_back(r);
  }
  if (subset.empty()) {
    throw ParameterError("no records cover n=" + std::to_string(n) + ", m=" + std::to_string(m) +
                         ", eta=" + std::string(eta));
  }
  const auto rows = kemp_table(subset, threshold);
  if (rows.size() != 1) {
    throw ParameterError("records at (n, m, eta) mix several configurations");
  }
  return rows.front().k_emp;
}

std::vector<KempRow> kemp_table(const std::vector<TrialRecord>& records, double threshold) {
  auto aggregates = aggregate_records(records);
  std::stable_sort(aggregates.begin(), aggregates.end(),
                   [](const ConfigAggregate& a, const ConfigAggregate& b) {
                     return std::make_pair(group_key_of(a.point), a.point.k) <
                            std::make_pair(group_key_of(b.point), b.point.k);
                   });
  std::vector<KempRow> rows;
  for (std::size_t i = 0; i < aggregates.size();) {
    std::size_t j = i;
    while (j < aggregates.size() &&
           group_key_of(aggregates[j].point) == group_key_of(aggregates[i].point)) {
      ++j;
    }
    KempRow row;
    row.group = aggregates[i].point;
    for (std::size_t t = i; t < j; ++t) {
      const auto& a = aggregates[t];
      if (a.error.count == 0) continue;
      if (a.error.mean <= threshold) {
        row.k_emp = a.point.k;
        row.image_frac = a.image_frac.mean;
        row.mean_preimage = a.mean_preimage.mean;
        row.codebook_size = a.codebook_size.mean;
        if (a.point.n >= 16) {
          row.rho = rho_eng({static_cast<double>(a.point.n), static_cast<double>(a.point.k),
                             static_cast<double>(a.point.m), a.point.eta.value});
        }
        break;
      }
    }
    rows.push_back(std::move(row));
    i = j;
  }
  return rows;
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> columns = {
      "n",          "r",          "k",           "m",
      "eta",        "quantizer",  "scaled",      "feature",
      "anchor_strategy", "trial", "resample",    "seed",
      "error",      "image_frac", "mean_preimage", "singleton_frac",
      "codebook_size", "profile_count", "singleton_bucket_frac", "weighted_collision",
      "median_code_ratio", "q90_balance", "generic_bound", "refined_bound",
      "bounds_ok",  "wall_time_ms"};
  return columns;
}

void write_csv(const std::vector<TrialRecord>& records, std::ostream& out) {
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const auto& r : records) {
    const auto& p = r.point;
    std::vector<std::string> f = {
        std::to_string(p.n),        std::to_string(p.r),
        std::to_string(p.k),        std::to_string(p.m),
        p.eta.text,                 std::string(to_string(p.quantizer)),
        p.scaled ? "true" : "false", std::string(to_string(p.feature)),
        std::string(to_string(p.strategy)), std::to_string(r.trial),
        std::to_string(r.resample), std::to_string(r.seed)};
    if (r.failure) {
      f.emplace_back(kFailed);
      while (f.size() < cols.size()) f.emplace_back(kNotApplicable);
    } else {
      f.push_back(format_double(r.error));
      f.push_back(format_double(r.image_frac));
      f.push_back(format_double(r.mean_preimage));
      f.push_back(format_double(r.singleton_frac));
      f.push_back(std::to_string(r.codebook_size));
      f.push_back(std::to_string(r.profile_count));
      f.push_back(format_double(r.singleton_bucket_frac));
      f.push_back(format_optional(r.weighted_collision));
      f.push_back(format_optional(r.median_code_ratio));
      f.push_back(format_optional(r.q90_balance));
      f.push_back(std::to_string(r.generic_bound));
      f.push_back(format_optional(r.refined_bound));
      f.emplace_back(r.bounds_ok ? "true" : "false");
      f.push_back(format_optional(r.wall_time_ms));
    }
    for (std::size_t i = 0; i < f.size(); ++i) out << (i ? "," : "") << csv_quote(f[i]);
    out << '\n';
  }
  if (!out) throw IoError("failed to write CSV");
}

void write_csv(const SweepResult& result, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_csv(result.records, out);
  out.close();
  if (!out) throw IoError("failed to write " + path.string());
}

std::vector<TrialRecord> read_csv(std::istream& in) {
  const auto& cols = csv_columns();
  std::vector<std::string> fields;
  if (!read_csv_record(in, fields)) throw ParseError(1, "empty CSV");
  if (fields != cols) throw ParseError(1, "unexpected CSV header");

  std::vector<TrialRecord> records;
  std::size_t line = 1;
  while (read_csv_record(in, fields)) {
    ++line;
    if (fields.size() == 1 && fields.front().empty()) continue;
    if (fields.size() != cols.size()) {
      throw ParseError(line, "expected " + std::to_string(cols.size()) + " fields, got " +
                                 std::to_string(fields.size()));
    }
    try {
      TrialRecord r;
      auto& p = r.point;
      p.n = parse_number<VertexId>(fields[0]);
      p.r = parse_number<int>(fields[1]);
      p.k = parse_number<int>(fields[2]);
      p.m = parse_number<int>(fields[3]);
      p.eta = Eta::parse(fields[4]);
      p.quantizer = parse_quantizer(fields[5]);
      p.scaled = parse_bool(fields[6]);
      p.feature = parse_feature(fields[7]);
      p.strategy = parse_strategy(fields[8]);
      r.trial = parse_number<int>(fields[9]);
      r.resample = parse_number<int>(fields[10]);
      r.seed = parse_number<std::uint64_t>(fields[11]);
      if (fields[12] == kFailed) {
        r.failure = "failed";
      } else {
        r.error = parse_number<double>(fields[12]);
        r.image_frac = parse_number<double>(fields[13]);
        r.mean_preimage = parse_number<double>(fields[14]);
        r.singleton_frac = parse_number<double>(fields[15]);
        r.codebook_size = parse_number<std::size_t>(fields[16]);
        r.profile_count = parse_number<std::size_t>(fields[17]);
        r.singleton_bucket_frac = parse_number<double>(fields[18]);
        r.weighted_collision = parse_optional(fields[19]);
        r.median_code_ratio = parse_optional(fields[20]);
        r.q90_balance = parse_optional(fields[21]);
        r.generic_bound = parse_number<std::size_t>(fields[22]);
        r.refined_bound = parse_optional(fields[23]);
        r.bounds_ok = parse_bool(fields[24]);
        r.wall_time_ms = parse_optional(fields[25]);
        r.image_size = static_cast<std::size_t>(std::llround(r.image_frac * p.n));
      }
      records.push_back(std::move(r));
    } catch (const ParameterError& e) {
      throw ParseError(line, e.what());
    }
  }
  return records;
}

}  // namespace obsmap
