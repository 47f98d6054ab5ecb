// One line per acceptance criterion. Exit status is the number of failures.
//
//   acceptance [--full] [--only N[,N...]]
//
// --full runs the statistical criteria at 20 trials instead of 5.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "obsmap/graph.hpp"
#include "obsmap/harness.hpp"
#include "obsmap/observation.hpp"
#include "obsmap/rng.hpp"
#include "obsmap/spectral.hpp"
#include "obsmap/theory.hpp"

using namespace obsmap;

namespace {

// Pinned tolerances.
constexpr double kRhoDecimals = 1e-3;           // table entries are printed to 3 decimals
constexpr int kTrialsReduced = 5;
constexpr int kTrialsFull = 20;
constexpr double kRegimeErrorTol = 0.1;          // absolute, on mean error
constexpr double kRegimeLowCollision = 0.01;
constexpr double kCalibrationRelTol = 0.5;      // relative, on endpoint errors
constexpr double kRealGraphTol = 0.02;          // absolute, on mean error

struct Outcome {
  bool pass = false;
  bool skipped = false;
  std::string detail;
};

struct Context {
  int trials = kTrialsReduced;
  // Every record produced by the statistical sweeps, for the bound criteria.
  std::vector<TrialRecord> pool;
};

double mean_of(const std::vector<TrialRecord>& rows,
               const std::function<bool(const TrialRecord&)>& keep,
               const std::function<std::optional<double>(const TrialRecord&)>& value) {
  double sum = 0;
  std::size_t count = 0;
  for (const auto& r : rows) {
    if (r.failure || !keep(r)) continue;
    if (const auto v = value(r)) {
      sum += *v;
      ++count;
    }
  }
  return count ? sum / static_cast<double>(count) : std::nan("");
}

std::optional<double> error_of(const TrialRecord& r) { return r.error; }

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

void absorb(Context& ctx, const std::vector<TrialRecord>& rows) {
  ctx.pool.insert(ctx.pool.end(), rows.begin(), rows.end());
}

// ---------------------------------------------------------------------------
// 1. Budget ratio recomputed over the full empirical threshold table.

struct RhoEntry {
  int n, m;
  double eta;
  int k;
  double rho;
};

std::vector<RhoEntry> rho_table() {
  const std::array<int, 4> ns{500, 1000, 2000, 4000};
  const std::array<int, 4> ms{0, 1, 2, 5};
  const std::array<double, 5> etas{0.9, 0.7, 0.5, 0.3, 0.1};
  const int k[4][4][5] = {
      {{6, 6, 6, 6, 6}, {4, 4, 4, 4, 3}, {4, 4, 3, 3, 2}, {3, 2, 1, 1, 1}},
      {{6, 6, 6, 6, 6}, {6, 6, 6, 4, 4}, {4, 4, 4, 3, 2}, {3, 2, 2, 1, 1}},
      {{6, 6, 6, 6, 6}, {6, 6, 6, 6, 4}, {6, 4, 4, 4, 3}, {3, 3, 2, 1, 1}},
      {{6, 6, 6, 6, 6}, {6, 6, 6, 6, 6}, {6, 6, 6, 4, 3}, {4, 3, 2, 1, 1}},
  };
  const double rho[4][4][5] = {
      {{1.764, 1.764, 1.764, 1.764, 1.764},
       {1.304, 1.345, 1.399, 1.481, 1.364},
       {1.433, 1.514, 1.328, 1.492, 1.552},
       {1.524, 1.433, 1.409, 1.820, 2.704}},
      {{1.679, 1.679, 1.679, 1.679, 1.679},
       {1.794, 1.831, 1.879, 1.394, 1.553},
       {1.350, 1.423, 1.520, 1.389, 1.427},
       {1.417, 1.319, 1.563, 1.653, 2.448}},
      {{1.601, 1.601, 1.601, 1.601, 1.601},
       {1.706, 1.739, 1.783, 1.851, 1.462},
       {1.811, 1.344, 1.432, 1.567, 1.589},
       {1.326, 1.491, 1.446, 1.515, 2.237}},
      {{1.530, 1.530, 1.530, 1.530, 1.530},
       {1.627, 1.657, 1.698, 1.759, 1.892},
       {1.723, 1.784, 1.865, 1.478, 1.488},
       {1.502, 1.398, 1.346, 1.399, 2.061}},
  };
  std::vector<RhoEntry> out;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 5; ++c) out.push_back({ns[a], ms[b], etas[c], k[a][b][c], rho[a][b][c]});
  return out;
}

Outcome budget_ratio(Context&) {
  std::size_t ok = 0;
  std::string first_bad;
  const auto table = rho_table();
  for (const auto& e : table) {
    const double r = rho_eng({static_cast<double>(e.n), static_cast<double>(e.k),
                              static_cast<double>(e.m), e.eta});
    const bool match = std::abs(std::round(r * 1000) / 1000 - e.rho) < kRhoDecimals / 2;
    ok += match ? 1 : 0;
    if (!match && first_bad.empty()) {
      first_bad = " first mismatch n=" + std::to_string(e.n) + " m=" + std::to_string(e.m) +
                  " got " + fmt("%.4f", r) + " want " + fmt("%.3f", e.rho);
    }
  }
  auto anchored = [](double n, double k, double m, double eta, double want) {
    return std::abs(std::round(rho_eng({n, k, m, eta}) * 1000) / 1000 - want) < kRhoDecimals / 2;
  };
  const bool anchors = anchored(500, 6, 0, 0.1, 1.764) && anchored(500, 1, 5, 0.1, 2.704) &&
                       anchored(4000, 1, 5, 0.1, 2.061);
  return {ok == table.size() && anchors, false,
          std::to_string(ok) + "/" + std::to_string(table.size()) +
              " entries match to 3 decimals; anchors 1.764/2.704/2.061 " +
              (anchors ? "match" : "DIFFER") + first_bad};
}

// ---------------------------------------------------------------------------
// 2. Empirical anchor thresholds at n = 500, eta = 0.1.

SweepConfig threshold_sweep(Quantizer q) {
  SweepConfig cfg;
  cfg.n_list = {500};
  cfg.k_list = {1, 2, 3, 4, 6, 8};
  cfg.m_list = {0, 1, 2, 5};
  cfg.eta_list = {Eta::parse("0.1")};
  cfg.trials = kTrialsFull;
  cfg.quantizer = q;
  cfg.scaled = true;
  return cfg;
}

std::string kemp_text(const std::optional<int>& k) { return k ? std::to_string(*k) : "none"; }

Outcome anchor_thresholds(Context& ctx) {
  // Codes are floor(n * phi^2 / eta): the step is relative to the mean
  // energy 1/n rather than to the per-coordinate peak.
  const auto result = run_sweep(threshold_sweep(Quantizer::absolute));
  absorb(ctx, result.records);
  const std::map<int, int> want{{0, 6}, {1, 3}, {2, 2}, {5, 1}};
  const std::map<int, int> slack{{0, 0}, {1, 1}, {2, 1}, {5, 0}};
  bool pass = true;
  std::string detail = "k_emp by m:";
  for (const auto& [m, k] : want) {
    const auto got = k_emp(result.records, 500, m, "0.1");
    detail += " " + std::to_string(m) + "->" + kemp_text(got);
    // One grid step of slack on the tested grid {1,2,3,4,6,8}.
    if (!got) {
      pass = false;
      continue;
    }
    const std::vector<int> grid{1, 2, 3, 4, 6, 8};
    const auto pos = [&](int v) { return std::find(grid.begin(), grid.end(), v) - grid.begin(); };
    if (std::abs(pos(*got) - pos(k)) > slack.at(m)) pass = false;
  }
  const double codebook = mean_of(
      result.records, [](const TrialRecord& r) { return r.point.m == 5 && r.point.k == 1; },
      [](const TrialRecord& r) { return std::optional<double>(r.codebook_size); });
  detail += "; codebook at m=5 " + fmt("%.1f", codebook);

  // Peak-relative step, reported only.
  const auto peak = run_sweep(threshold_sweep(Quantizer::relative));
  absorb(ctx, peak.records);
  detail += "; [peak-relative step: ";
  for (const auto& [m, k] : want) {
    detail += std::to_string(m) + "->" + kemp_text(k_emp(peak.records, 500, m, "0.1")) + " ";
  }
  detail.back() = ']';
  return {pass, false, detail};
}

// ---------------------------------------------------------------------------
// 3. Optimal error equals the image fraction.

double best_map_success(const ObservationTable& t) {
  const std::size_t image = t.image_size();
  const int n = t.n();
  std::vector<int> choice(image, 0);
  int best = 0;
  while (true) {
    int hits = 0;
    for (int v = 0; v < n; ++v) hits += choice[t.fiber_of(v)] == v ? 1 : 0;
    best = std::max(best, hits);
    std::size_t i = 0;
    while (i < image && ++choice[i] == n) choice[i++] = 0;
    if (i == image) break;
  }
  return static_cast<double>(best) / n;
}

// Random tree plus chords.
Graph small_connected(VertexId n, Rng& rng) {
  std::set<Edge> edges;
  for (VertexId v = 1; v < n; ++v) edges.emplace(static_cast<VertexId>(rng.below(v)), v);
  const int extra = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
  for (int i = 0; i < extra; ++i) {
    auto u = static_cast<VertexId>(rng.below(n));
    auto v = static_cast<VertexId>(rng.below(n));
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    edges.emplace(u, v);
  }
  return Graph::from_edges(n, std::vector<Edge>(edges.begin(), edges.end()));
}

Outcome optimal_error_identity(Context&) {
  Rng rng(mix_seed({3, 1}));
  const std::array<const char*, 4> etas{"0.9", "0.5", "0.25", "0.1"};
  int exact = 0;
  for (int i = 0; i < 200; ++i) {
    const VertexId n = 2 * static_cast<VertexId>(10 + rng.below(141));  // even, 20..300
    ConfigPoint p;
    p.n = n;
    p.k = static_cast<int>(rng.below(7));
    p.m = static_cast<int>(rng.below(6));
    p.eta = Eta::parse(etas[rng.below(etas.size())]);
    p.quantizer = rng.below(2) ? Quantizer::absolute : Quantizer::relative;
    const std::uint64_t seed = rng.next();
    const Graph g = random_regular(n, 3, seed);
    const auto basis = low_frequency_basis(normalized_laplacian(g), p.m);
    const auto anchors = select_anchors(g, p.k, AnchorStrategy::random, seed);
    const auto codes = p.m ? quantize(energy_embedding(basis, p.m, true), p.quantizer, p.eta.value)
                           : QuantizedCodes::empty(n);
    const auto t = build_observation(g, anchors, codes);
    int hits = 0;
    for (VertexId v = 0; v < n; ++v) hits += t.fibers()[t.fiber_of(v)].front() == v ? 1 : 0;
    exact += static_cast<std::size_t>(hits) == t.image_size() ? 1 : 0;
  }

  int enumerated = 0, beaten = 0;
  for (int attempt = 0; attempt < 5000 && enumerated < 100; ++attempt) {
    const auto n = static_cast<VertexId>(4 + rng.below(7));
    const Graph g = small_connected(n, rng);
    const int k = static_cast<int>(rng.below(2));
    const int m = std::min<int>(static_cast<int>(rng.below(3)), n - 2);
    const auto anchors = select_anchors(g, k, AnchorStrategy::random, rng.next());
    QuantizedCodes codes = QuantizedCodes::empty(n);
    if (m > 0) {
      const auto basis = low_frequency_basis(normalized_laplacian(g), m);
      codes = quantize_absolute(energy_embedding(basis, m, false), 0.25);
    }
    const auto t = build_observation(g, anchors, codes);
    if (t.image_size() > 4) continue;
    ++enumerated;
    const double best = best_map_success(t);
    if (best > 1.0 - optimal_error(t) + 1e-12 ||
        best < static_cast<double>(t.image_size()) / n - 1e-12) {
      ++beaten;
    }
  }
  return {exact == 200 && enumerated >= 50 && beaten == 0, false,
          "min-id section exact on " + std::to_string(exact) + "/200; exhaustive optimum equals "
              "image fraction on " + std::to_string(enumerated - beaten) + "/" +
              std::to_string(enumerated) + " small instances"};
}

// ---------------------------------------------------------------------------
// 4 and 5. Counting bounds over every record of the statistical sweeps plus
// randomized instances inspected bucket by bucket.

Outcome counting_bounds(Context& ctx) {
  std::size_t generic_ok = 0, refined_applicable = 0, refined_ok = 0, all_ok = 0;
  std::size_t rows = 0;
  for (const auto& r : ctx.pool) {
    if (r.failure) continue;
    ++rows;
    generic_ok += r.image_size <= r.generic_bound ? 1 : 0;
    if (r.refined_bound) {
      ++refined_applicable;
      refined_ok += static_cast<double>(r.image_size) <= *r.refined_bound ? 1 : 0;
    }
    all_ok += r.bounds_ok ? 1 : 0;
  }
  return {rows > 0 && generic_ok == rows && refined_ok == refined_applicable && all_ok == rows,
          false,
          "generic " + std::to_string(generic_ok) + "/" + std::to_string(rows) + ", refined " +
              std::to_string(refined_ok) + "/" + std::to_string(refined_applicable) +
              " where applicable, exact flags " + std::to_string(all_ok) + "/" +
              std::to_string(rows)};
}

Outcome per_bucket(Context& ctx) {
  std::size_t buckets = 0, holding = 0;
  Rng rng(mix_seed({5, 1}));
  const std::array<const char*, 5> etas{"2.0", "1.0", "0.5", "0.3", "0.1"};
  for (int i = 0; i < 200; ++i) {
    const VertexId n = 2 * static_cast<VertexId>(50 + rng.below(451));
    const int k = 1 + static_cast<int>(rng.below(4));
    const int m = 1 + static_cast<int>(rng.below(5));
    const double eta = Eta::parse(etas[rng.below(etas.size())]).value;
    const std::uint64_t seed = rng.next();
    const Graph g = random_regular(n, 3, seed);
    const auto basis = low_frequency_basis(normalized_laplacian(g), m);
    const auto t = build_observation(g, select_anchors(g, k, AnchorStrategy::random, seed),
                                     quantize_absolute(energy_embedding(basis, m, true), eta));
    for (const auto& b : bucket_diagnostics(t).buckets) {
      ++buckets;
      holding += per_bucket_bound_holds(b) ? 1 : 0;
    }
  }
  std::size_t rows = 0, rows_ok = 0;
  for (const auto& r : ctx.pool) {
    if (r.failure) continue;
    ++rows;
    rows_ok += r.bounds_ok ? 1 : 0;
  }
  return {buckets > 0 && holding == buckets && rows_ok == rows, false,
          std::to_string(holding) + "/" + std::to_string(buckets) +
              " non-singleton buckets on 200 random instances; every bucket of " +
              std::to_string(rows_ok) + "/" + std::to_string(rows) + " sweep rows"};
}

// ---------------------------------------------------------------------------
// 6. Codebook size against the bin-count bound.

Outcome codebook_bound(Context&) {
  std::size_t checks = 0, ok = 0;
  double worst = 0;
  for (std::uint64_t g = 0; g < 50; ++g) {
    const VertexId n = 100 + 20 * static_cast<VertexId>(g % 10);
    const Graph graph = random_regular(n, 3, mix_seed({6, g}));
    const auto basis = low_frequency_basis(normalized_laplacian(graph), 10);
    for (int m : {1, 2, 3, 5, 10}) {
      const auto emb = energy_embedding(basis, m, false);
      for (double eta : {0.9, 0.5, 0.25, 0.1}) {
        const double cap = std::pow(2.0 / eta, m);
        const auto size = static_cast<double>(codebook_size(quantize_absolute(emb, eta)));
        ++checks;
        ok += size <= cap ? 1 : 0;
        worst = std::max(worst, size / cap);
      }
    }
  }
  return {ok == checks, false,
          std::to_string(ok) + "/" + std::to_string(checks) +
              " (graph, m, eta) cases; largest codebook/cap ratio " + fmt("%.3g", worst)};
}

// ---------------------------------------------------------------------------
// 7. Eigenvector sign flips.

Outcome sign_flips(Context&) {
  int identical = 0;
  for (std::uint64_t i = 0; i < 50; ++i) {
    const std::uint64_t seed = mix_seed({7, i});
    const VertexId n = 200 + 40 * static_cast<VertexId>(i % 5);
    PreparedGraph pg = prepare_graph(random_regular(n, 3, seed), 6, seed);
    PreparedGraph flipped = pg;
    Rng rng(seed);
    for (Eigen::Index j = 0; j < flipped.basis.vectors.cols(); ++j) {
      if (rng.below(2)) flipped.basis.vectors.col(j) *= -1.0;
    }
    std::vector<TrialRecord> a, b;
    for (auto q : {Quantizer::absolute, Quantizer::relative}) {
      for (int m : {1, 3, 6}) {
        ConfigPoint p;
        p.n = n;
        p.k = static_cast<int>(i % 4);
        p.m = m;
        p.eta = Eta::parse("0.3");
        p.quantizer = q;
        a.push_back(evaluate_point(pg, p, 0, 0));
        b.push_back(evaluate_point(flipped, p, 0, 0));
      }
    }
    std::ostringstream sa, sb;
    write_csv(a, sa);
    write_csv(b, sb);
    const auto ca = quantize_relative(energy_embedding(pg.basis, 6, true), 0.3);
    const auto cb = quantize_relative(energy_embedding(flipped.basis, 6, true), 0.3);
    const bool codes_equal = std::equal(ca.data().begin(), ca.data().end(), cb.data().begin());
    identical += sa.str() == sb.str() && codes_equal ? 1 : 0;
  }
  return {identical == 50, false,
          std::to_string(identical) + "/50 instances with identical codes and CSV rows"};
}

// ---------------------------------------------------------------------------
// 8. Bucketwise regimes at n = 2000.

Outcome regimes(Context& ctx) {
  struct Regime {
    int k, m;
    const char* eta;
    double error;
  };
  const std::array<Regime, 3> table{{{2, 1, "2.0", 0.89}, {2, 2, "1.0", 0.70}, {2, 5, "0.3", 0.02}}};
  std::array<double, 3> err{}, coll{};
  for (std::size_t i = 0; i < table.size(); ++i) {
    SweepConfig cfg;
    cfg.n_list = {2000};
    cfg.k_list = {table[i].k};
    cfg.m_list = {table[i].m};
    cfg.eta_list = {Eta::parse(table[i].eta)};
    cfg.trials = ctx.trials;
    cfg.anchor_resamples = 5;
    cfg.quantizer = Quantizer::absolute;
    const auto result = run_sweep(cfg);
    absorb(ctx, result.records);
    const auto all = [](const TrialRecord&) { return true; };
    err[i] = mean_of(result.records, all, error_of);
    coll[i] = mean_of(result.records, all,
                      [](const TrialRecord& r) { return r.weighted_collision; });
  }
  bool pass = coll[0] > coll[1] && coll[1] > coll[2] && coll[2] < kRegimeLowCollision &&
              err[0] > err[1] && err[1] > err[2];
  std::string detail;
  for (std::size_t i = 0; i < table.size(); ++i) {
    pass = pass && std::abs(err[i] - table[i].error) <= kRegimeErrorTol;
    detail += (i ? "; " : "") + std::string("(") + std::to_string(table[i].k) + "," +
              std::to_string(table[i].m) + "," + table[i].eta + ") error " +
              fmt("%.4f", err[i]) + " collision " + fmt("%.3g", coll[i]);
  }
  return {pass, false, detail};
}

// ---------------------------------------------------------------------------
// 9. Feature ablation ordering.

Outcome ablation(Context& ctx) {
  const std::array<Feature, 4> order{Feature::full, Feature::distance, Feature::spectral,
                                     Feature::nope};
  bool pass = true;
  std::string detail;
  for (auto q : {Quantizer::absolute, Quantizer::relative}) {
    SweepConfig cfg;
    cfg.n_list = {500, 1000};
    cfg.k_list = {1, 2, 3, 4, 6, 8};
    cfg.m_list = {0, 2, 5, 10};
    cfg.eta_list = {Eta::parse("0.9"), Eta::parse("0.5"), Eta::parse("0.25"), Eta::parse("0.1")};
    cfg.features = {order.begin(), order.end()};
    cfg.trials = ctx.trials;
    cfg.quantizer = q;
    const auto result = run_sweep(cfg);
    absorb(ctx, result.records);
    detail += std::string(detail.empty() ? "" : "; ") +
              (q == Quantizer::absolute ? "mean-relative step:" : "peak-relative step:");
    for (VertexId n : {0, 500, 1000}) {
      std::array<double, 4> mean{};
      for (std::size_t f = 0; f < order.size(); ++f) {
        mean[f] = mean_of(
            result.records,
            [&](const TrialRecord& r) { return r.point.feature == order[f] && (!n || r.point.n == n); },
            error_of);
      }
      pass = pass && mean[0] < mean[1] && mean[1] < mean[2] && mean[2] < mean[3];
      detail += std::string(" ") + (n ? "n=" + std::to_string(n) : std::string("all")) + " " +
                fmt("%.3f", mean[0]) + "<" + fmt("%.3f", mean[1]) + "<" + fmt("%.3f", mean[2]) +
                "<" + fmt("%.4f", mean[3]);
    }
  }
  return {pass, false, detail};
}

// ---------------------------------------------------------------------------
// 10. Absolute-step calibration on unscaled energies.

Outcome calibration(Context& ctx) {
  const std::array<const char*, 5> etas{"5e-3", "2e-3", "1e-3", "5e-4", "2e-4"};
  SweepConfig cfg;
  cfg.n_list = {500, 1000, 2000};
  cfg.k_list = {4, 6, 8};
  cfg.m_list = {5, 10};
  cfg.eta_list.clear();
  for (const char* e : etas) cfg.eta_list.push_back(Eta::parse(e));
  cfg.trials = ctx.trials;
  cfg.quantizer = Quantizer::absolute;
  cfg.scaled = false;
  const auto result = run_sweep(cfg);
  absorb(ctx, result.records);

  std::array<double, 5> err{}, ratio{};
  for (std::size_t i = 0; i < etas.size(); ++i) {
    const double eta = Eta::parse(etas[i]).value;
    const auto at = [&](const TrialRecord& r) { return r.point.eta.value == eta; };
    err[i] = mean_of(result.records, at, error_of);
    ratio[i] = mean_of(result.records, at, [](const TrialRecord& r) {
      return std::optional<double>(static_cast<double>(r.codebook_size) / r.point.n);
    });
  }
  bool monotone = true;
  for (std::size_t i = 1; i < err.size(); ++i) monotone = monotone && err[i] < err[i - 1];
  const bool top = std::abs(err.front() - 0.1686) <= kCalibrationRelTol * 0.1686;
  const bool bottom = std::abs(err.back() - 1e-4) <= kCalibrationRelTol * 1e-4;
  std::string detail = "errors";
  for (double e : err) detail += " " + fmt("%.3g", e);
  detail += "; code ratios";
  for (double r : ratio) detail += " " + fmt("%.3f", r);
  detail += std::string("; monotone ") + (monotone ? "yes" : "NO") + ", endpoints " +
            (top ? "in" : "OUT OF") + "/" + (bottom ? "in" : "OUT OF") + " window";

  // The same steps on n-scaled energies, reported only.
  cfg.scaled = true;
  cfg.n_list = {500, 1000};
  const auto scaled = run_sweep(cfg);
  detail += "; [n-scaled energies: errors";
  for (const char* e : etas) {
    const double eta = Eta::parse(e).value;
    detail += " " + fmt("%.3g", mean_of(scaled.records,
                                        [&](const TrialRecord& r) { return r.point.eta.value == eta; },
                                        error_of));
  }
  detail += "]";
  return {monotone && top && bottom, false, detail};
}

// ---------------------------------------------------------------------------
// 11. Byte-identical sweep files.

Outcome determinism(Context&) {
  SweepConfig cfg;
  cfg.n_list = {300, 600};
  cfg.k_list = {1, 3};
  cfg.m_list = {0, 2};
  cfg.eta_list = {Eta::parse("0.5")};
  cfg.trials = 3;
  cfg.anchor_resamples = 2;
  cfg.seed = 20260101;
  const auto dir = std::filesystem::temp_directory_path();
  const auto a = dir / "obsmap_acceptance_a.csv";
  const auto b = dir / "obsmap_acceptance_b.csv";
  cfg.jobs = 1;
  write_csv(run_sweep(cfg), a);
  cfg.jobs = 4;
  write_csv(run_sweep(cfg), b);
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  };
  const std::string sa = slurp(a), sb = slurp(b);
  std::filesystem::remove(a);
  std::filesystem::remove(b);
  return {!sa.empty() && sa == sb, false,
          std::to_string(sa.size()) + " bytes, " + (sa == sb ? "identical" : "DIFFERENT") +
              " across 1 and 4 workers"};
}

// ---------------------------------------------------------------------------
// 12. Real drug-interaction graphs, when supplied.

Outcome real_graphs(Context&) {
  struct Dataset {
    const char* env;
    const char* name;
    double error;
  };
  const std::array<Dataset, 2> sets{{{"OBSMAP_DRUGBANK_EDGES", "drugbank", 0.9023},
                                     {"OBSMAP_DECAGON_EDGES", "decagon", 0.0158}}};
  bool any = false, pass = true;
  std::string detail;
  for (const auto& d : sets) {
    const char* path = std::getenv(d.env);
    if (!path || !*path) {
      detail += std::string(detail.empty() ? "" : "; ") + d.name + " not supplied (" + d.env + ")";
      continue;
    }
    any = true;
    std::ifstream in(path);
    if (!in) {
      pass = false;
      detail += std::string(detail.empty() ? "" : "; ") + d.name + " unreadable";
      continue;
    }
    Graph g = from_edge_list(in).graph;
    if (!is_connected(g)) g = largest_connected_component(g).graph;
    PreparedGraph pg = prepare_graph(std::move(g), 10, 0);
    ConfigPoint p;
    p.n = pg.graph.n();
    p.r = 0;
    p.k = 8;
    p.m = 10;
    p.eta = Eta::parse("0.1");
    p.quantizer = Quantizer::absolute;
    std::vector<TrialRecord> rows, peak;
    for (int s = 0; s < 30; ++s) rows.push_back(evaluate_point(pg, p, 0, s));
    p.quantizer = Quantizer::relative;
    for (int s = 0; s < 30; ++s) peak.push_back(evaluate_point(pg, p, 0, s));
    const auto all = [](const TrialRecord&) { return true; };
    const double err = mean_of(rows, all, error_of);
    pass = pass && std::abs(err - d.error) <= kRealGraphTol;
    detail += std::string(detail.empty() ? "" : "; ") + d.name + " n=" +
              std::to_string(pg.graph.n()) + " error " + fmt("%.4f", err) + " (target " +
              fmt("%.4f", d.error) + ", peak-relative step " +
              fmt("%.4f", mean_of(peak, all, error_of)) + ")";
  }
  return {pass, !any, detail};
}

}  // namespace

int main(int argc, char** argv) {
  Context ctx;
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--full") == 0) {
      ctx.trials = kTrialsFull;
    } else if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      std::stringstream list(argv[++i]);
      for (std::string item; std::getline(list, item, ',');) only.insert(std::stoi(item));
    } else {
      std::cerr << "usage: acceptance [--full] [--only N[,N...]]\n";
      return 2;
    }
  }

  // Bound criteria run last so that they see every sweep record.
  const std::vector<std::pair<int, std::pair<const char*, Outcome (*)(Context&)>>> criteria{
      {1, {"budget ratio over the threshold table", budget_ratio}},
      {2, {"empirical anchor thresholds at n=500, eta=0.1", anchor_thresholds}},
      {3, {"optimal error equals the image fraction", optimal_error_identity}},
      {6, {"codebook within the bin-count bound", codebook_bound}},
      {7, {"eigenvector sign-flip invariance", sign_flips}},
      {8, {"bucketwise regimes at n=2000", regimes}},
      {9, {"feature ablation ordering", ablation}},
      {10, {"absolute-step calibration trend", calibration}},
      {11, {"byte-identical sweep output", determinism}},
      {12, {"real interaction graphs", real_graphs}},
      {4, {"generic and refined counting bounds", counting_bounds}},
      {5, {"per-bucket occupancy inequality", per_bucket}},
  };

  std::map<int, std::string> lines;
  int failures = 0;
  for (const auto& [id, entry] : criteria) {
    if (!only.empty() && !only.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = entry.second(ctx);
    } catch (const std::exception& e) {
      o = {false, false, std::string("threw: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const char* tag = o.skipped ? "SKIP" : o.pass ? "PASS" : "FAIL";
    failures += (!o.skipped && !o.pass) ? 1 : 0;
    std::ostringstream line;
    line << "[" << tag << "] " << id << ". " << entry.first << ": " << o.detail << " ("
         << fmt("%.1f", secs) << "s)";
    std::cout << line.str() << std::endl;
    lines[id] = line.str();
  }
  std::cout << "\nsummary (trials per configuration: " << ctx.trials << ")\n";
  for (const auto& [id, line] : lines) std::cout << line << '\n';
  std::cout << (failures ? std::to_string(failures) + " criteria failed\n" : "all criteria passed\n");
  return failures;
}
