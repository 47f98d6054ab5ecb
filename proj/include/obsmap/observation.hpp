#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "obsmap/graph.hpp"
#include "obsmap/spectral.hpp"

namespace obsmap {

// Per-vertex observation code (anchor distances, spectral bin indices) with
// its fiber and distance-bucket partitions.
//
// Vertices are ordered by (distance tuple, spectral tuple, id). Buckets and
// fibers are runs of that order, so every fiber sits inside one bucket and
// the fibers of bucket b are fibers [fiber_begin(b), fiber_begin(b+1)).
class ObservationTable {
 public:
  ObservationTable(DistanceProfiles distances, QuantizedCodes codes);

  VertexId n() const noexcept { return distances_.n; }
  std::size_t k() const noexcept { return distances_.k; }
  std::size_t m() const noexcept { return static_cast<std::size_t>(codes_.m()); }

  std::span<const std::int32_t> distance_code(VertexId v) const noexcept {
    return distances_.row(v);
  }
  std::span<const std::int64_t> spectral_code(VertexId v) const noexcept {
    return codes_.row(v);
  }
  const DistanceProfiles& distances() const noexcept { return distances_; }
  const QuantizedCodes& codes() const noexcept { return codes_; }

  std::size_t image_size() const noexcept { return fibers_.size(); }
  // D(G, A): number of attained distance tuples.
  std::size_t profile_count() const noexcept { return buckets_.size(); }

  // Each list is sorted by vertex id.
  const std::vector<std::vector<VertexId>>& fibers() const noexcept { return fibers_; }
  const std::vector<std::vector<VertexId>>& buckets() const noexcept { return buckets_; }
  std::size_t fiber_of(VertexId v) const noexcept { return fiber_of_[v]; }
  std::size_t bucket_of(VertexId v) const noexcept { return bucket_of_[v]; }
  std::size_t fiber_begin(std::size_t bucket) const noexcept { return bucket_fiber_begin_[bucket]; }

 private:
  DistanceProfiles distances_;
  QuantizedCodes codes_;
  std::vector<std::vector<VertexId>> fibers_;
  std::vector<std::vector<VertexId>> buckets_;
  std::vector<std::size_t> fiber_of_;
  std::vector<std::size_t> bucket_of_;
  std::vector<std::size_t> bucket_fiber_begin_;  // size buckets + 1
};

ObservationTable build_observation(const Graph& g, const AnchorSet& anchors,
                                   const QuantizedCodes& codes);

struct FiberStats {
  std::size_t image_size = 0;
  double success = 0;
  double error = 0;
  double vertex_mean_preimage = 0;
  double singleton_fraction = 0;
};

FiberStats fiber_stats(const ObservationTable& t);

// Smallest achievable error of any reconstruction map: 1 - |Im F| / n.
double optimal_error(const ObservationTable& t);

// Occupancy summary of one bucket's spectral codes.
struct BucketSummary {
  std::size_t size = 0;             // |B|
  std::size_t code_count = 0;       // M(B)
  std::size_t max_occupancy = 0;    // max_z N(B; z)
  std::uint64_t colliding_pairs = 0;  // ordered pairs u != v with equal codes
  double collision = 0;             // colliding_pairs / (|B| (|B| - 1)); 0 when |B| = 1
  double balance = 0;               // M(B) / |B| * max_z N(B; z)
};

BucketSummary summarize_bucket(std::span<const VertexId> bucket, const QuantizedCodes& codes);

// Fraction of ordered pairs in the bucket with identical codes. Needs |B| >= 2.
double bucket_collision(std::span<const VertexId> bucket, const QuantizedCodes& codes);
double bucket_balance(std::span<const VertexId> bucket, const QuantizedCodes& codes);

// Aggregates over buckets with |B| >= cutoff. Empty optionals mean no bucket
// qualified.
struct BucketAggregate {
  std::size_t cutoff = 2;
  std::size_t bucket_count = 0;
  std::optional<double> weighted_collision;  // weights |B|(|B| - 1)
  std::optional<double> median_code_ratio;   // median of M(B) / |B|
  std::optional<double> q90_balance;         // nearest-rank 0.9 quantile
  std::optional<double> median_collision;
  std::optional<double> median_balance;
};

struct BucketDiagnostics {
  std::vector<BucketSummary> buckets;  // non-singleton buckets in table order
  double singleton_bucket_fraction = 0;  // vertices in size-1 buckets / n
  BucketAggregate all;                   // |B| >= 2
  BucketAggregate large3;                // |B| >= 3
  BucketAggregate large10;               // |B| >= 10
};

BucketDiagnostics bucket_diagnostics(const ObservationTable& t);
BucketAggregate aggregate_buckets(std::span<const BucketSummary> buckets, std::size_t cutoff);

}  // namespace obsmap
