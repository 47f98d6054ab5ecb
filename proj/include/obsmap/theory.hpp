#pragma once

#include <cstddef>
#include <optional>

#include "obsmap/observation.hpp"

namespace obsmap {

// Inputs to the information-budget ratio. Natural logarithms throughout.
struct BudgetInputs {
  double n = 0;
  double k = 0;
  double m = 0;
  double eta = 0;
  double c_ent = 1.0;
  double C_ent = 2.0;
};

// (k ln ln n + c_ent m ln(C_ent / eta)) / ln n. Requires n >= 16, eta > 0.
double rho_eng(const BudgetInputs& b);

// k ln ln n + c_ent m ln(C_ent / eta) <= (1 - epsilon0) ln n, boundary
// included. epsilon0 must lie in (0, 1).
bool subcritical_check(const BudgetInputs& b, double epsilon0);

// |Im F| <= D(G, A) * |codebook|, with the measured profile count D.
struct GenericBound {
  std::size_t image_size = 0;
  std::size_t profile_count = 0;
  std::size_t codebook_size = 0;
  std::size_t bound = 0;
  bool satisfied = false;
};

GenericBound generic_image_bound(const ObservationTable& t);

// |Im F| <= D * (1 + beta / c) with beta the largest bucket balance and c the
// smallest bucket collision density over non-singleton buckets.
struct RefinedBound {
  std::size_t image_size = 0;
  std::size_t profile_count = 0;
  double max_balance = 0;
  double min_collision = 0;
  double bound = 0;
  bool satisfied = false;  // decided in exact integer arithmetic
};

// Empty when no bucket has two or more vertices, or when some non-singleton
// bucket has zero collision density (no positive lower bound exists).
std::optional<RefinedBound> refined_image_bound(const ObservationTable& t);

// M(B) <= Bal(B) |B| / (1 + (|B| - 1) Coll(B)), checked exactly.
bool per_bucket_bound_holds(const BucketSummary& b);

// Right-hand side of the per-bucket inequality as a double.
double per_bucket_bound(const BucketSummary& b);

struct BoundReport {
  GenericBound generic;
  std::optional<RefinedBound> refined;

  bool all_satisfied() const noexcept {
    return generic.satisfied && (!refined || refined->satisfied);
  }
};

BoundReport bound_report(const ObservationTable& t);

// 1 - |Im F| / n; identical to optimal_error.
double impossibility_floor(const ObservationTable& t);

}  // namespace obsmap
