#include "obsmap/observation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "obsmap/errors.hpp"

namespace obsmap {

namespace {

template <typename T>
bool row_less(std::span<const T> a, std::span<const T> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

template <typename T>
bool row_equal(std::span<const T> a, std::span<const T> b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end());
}

double median_of(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

double nearest_rank(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(values.size())));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  return values[rank - 1];
}

}  // namespace

ObservationTable::ObservationTable(DistanceProfiles distances, QuantizedCodes codes)
    : distances_(std::move(distances)), codes_(std::move(codes)) {
  const VertexId n = distances_.n;
  if (codes_.n() != n) {
    throw ParameterError("observation: " + std::to_string(codes_.n()) + " code rows for " +
                         std::to_string(n) + " vertices");
  }

  std::vector<VertexId> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), VertexId{0});
  std::sort(order.begin(), order.end(), [this](VertexId a, VertexId b) {
    const auto da = distances_.row(a);
    const auto db = distances_.row(b);
    if (!row_equal(da, db)) return row_less(da, db);
    const auto sa = codes_.row(a);
    const auto sb = codes_.row(b);
    if (!row_equal(sa, sb)) return row_less(sa, sb);
    return a < b;
  });

  fiber_of_.assign(static_cast<std::size_t>(n), 0);
  bucket_of_.assign(static_cast<std::size_t>(n), 0);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const VertexId v = order[i];
    const bool new_bucket = i == 0 || !row_equal(distances_.row(order[i - 1]), distances_.row(v));
    const bool new_fiber = new_bucket || !row_equal(codes_.row(order[i - 1]), codes_.row(v));
    if (new_bucket) {
      buckets_.emplace_back();
      bucket_fiber_begin_.push_back(fibers_.size());
    }
    if (new_fiber) fibers_.emplace_back();
    buckets_.back().push_back(v);
    fibers_.back().push_back(v);
    bucket_of_[v] = buckets_.size() - 1;
    fiber_of_[v] = fibers_.size() - 1;
  }
  bucket_fiber_begin_.push_back(fibers_.size());
  for (auto& b : buckets_) std::sort(b.begin(), b.end());
}

ObservationTable build_observation(const Graph& g, const AnchorSet& anchors,
                                   const QuantizedCodes& codes) {
  if (codes.n() != g.n()) {
    throw ParameterError("build_observation: codes have " + std::to_string(codes.n()) +
                         " rows, graph has " + std::to_string(g.n()) + " vertices");
  }
  return ObservationTable(anchor_profile(g, anchors), codes);
}

FiberStats fiber_stats(const ObservationTable& t) {
  FiberStats s;
  const auto n = static_cast<double>(t.n());
  s.image_size = t.image_size();
  if (t.n() == 0) return s;
  s.success = static_cast<double>(s.image_size) / n;
  s.error = 1.0 - s.success;
  std::uint64_t squares = 0;
  std::size_t singletons = 0;
  for (const auto& fiber : t.fibers()) {
    squares += static_cast<std::uint64_t>(fiber.size()) * fiber.size();
    if (fiber.size() == 1) ++singletons;
  }
  // E_v |fiber(v)| = sum_f |f|^2 / n.
  s.vertex_mean_preimage = static_cast<double>(squares) / n;
  s.singleton_fraction = static_cast<double>(singletons) / n;
  return s;
}

double optimal_error(const ObservationTable& t) {
  if (t.n() == 0) return 0.0;
  return 1.0 - static_cast<double>(t.image_size()) / static_cast<double>(t.n());
}

BucketSummary summarize_bucket(std::span<const VertexId> bucket, const QuantizedCodes& codes) {
  BucketSummary s;
  s.size = bucket.size();
  if (bucket.empty()) return s;
  std::vector<VertexId> sorted(bucket.begin(), bucket.end());
  for (VertexId v : sorted) {
    if (v < 0 || v >= codes.n()) throw ParameterError("bucket vertex out of range");
  }
  std::sort(sorted.begin(), sorted.end(), [&](VertexId a, VertexId b) {
    return row_less(codes.row(a), codes.row(b));
  });
  std::size_t run = 0;
  auto close_run = [&] {
    ++s.code_count;
    s.max_occupancy = std::max(s.max_occupancy, run);
    s.colliding_pairs += static_cast<std::uint64_t>(run) * (run - 1);
  };
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i > 0 && !row_equal(codes.row(sorted[i - 1]), codes.row(sorted[i]))) {
      close_run();
      run = 0;
    }
    ++run;
  }
  close_run();
  const auto b = static_cast<double>(s.size);
  s.collision = s.size >= 2 ? static_cast<double>(s.colliding_pairs) / (b * (b - 1.0)) : 0.0;
  s.balance = static_cast<double>(s.code_count) / b * static_cast<double>(s.max_occupancy);
  return s;
}

double bucket_collision(std::span<const VertexId> bucket, const QuantizedCodes& codes) {
  if (bucket.size() < 2) throw ParameterError("collision density needs a bucket of size >= 2");
  return summarize_bucket(bucket, codes).collision;
}

double bucket_balance(std::span<const VertexId> bucket, const QuantizedCodes& codes) {
  if (bucket.empty()) throw ParameterError("balance needs a non-empty bucket");
  return summarize_bucket(bucket, codes).balance;
}

BucketAggregate aggregate_buckets(std::span<const BucketSummary> buckets, std::size_t cutoff) {
  BucketAggregate agg;
  agg.cutoff = cutoff;
  std::vector<double> ratios, balances, collisions;
  std::uint64_t pair_weight = 0;
  std::uint64_t colliding = 0;
  for (const auto& b : buckets) {
    if (b.size < std::max<std::size_t>(cutoff, 2)) continue;
    ++agg.bucket_count;
    pair_weight += static_cast<std::uint64_t>(b.size) * (b.size - 1);
    colliding += b.colliding_pairs;
    ratios.push_back(static_cast<double>(b.code_count) / static_cast<double>(b.size));
    balances.push_back(b.balance);
    collisions.push_back(b.collision);
  }
  if (agg.bucket_count == 0) return agg;
  // sum b(b-1) Coll(B) / sum b(b-1) reduces to a ratio of pair counts.
  agg.weighted_collision = static_cast<double>(colliding) / static_cast<double>(pair_weight);
  agg.median_code_ratio = median_of(ratios);
  agg.q90_balance = nearest_rank(balances, 0.9);
  agg.median_collision = median_of(collisions);
  agg.median_balance = median_of(balances);
  return agg;
}

BucketDiagnostics bucket_diagnostics(const ObservationTable& t) {
  BucketDiagnostics d;
  std::size_t singleton_vertices = 0;
  for (const auto& bucket : t.buckets()) {
    if (bucket.size() == 1) {
      ++singleton_vertices;
      continue;
    }
    d.buckets.push_back(summarize_bucket(bucket, t.codes()));
  }
  d.singleton_bucket_fraction =
      t.n() == 0 ? 0.0 : static_cast<double>(singleton_vertices) / static_cast<double>(t.n());
  d.all = aggregate_buckets(d.buckets, 2);
  d.large3 = aggregate_buckets(d.buckets, 3);
  d.large10 = aggregate_buckets(d.buckets, 10);
  return d;
}

}  // namespace obsmap
