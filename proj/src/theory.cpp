#include "obsmap/theory.hpp"

#include <cmath>
#include <limits>

#include "obsmap/errors.hpp"
#include "obsmap/spectral.hpp"

namespace obsmap {

namespace {

__extension__ typedef __int128 Wide;

struct Ratio {
  Wide num = 0;
  Wide den = 1;
};

bool ratio_less(const Ratio& a, const Ratio& b) { return a.num * b.den < b.num * a.den; }

void validate(const BudgetInputs& b) {
  if (!(b.n >= 16)) throw ParameterError("budget ratio needs n >= 16");
  if (!(b.eta > 0)) throw ParameterError("eta must be positive");
  if (b.k < 0 || b.m < 0) throw ParameterError("k and m must be non-negative");
  if (!(b.c_ent > 0) || !(b.C_ent >= 1)) {
    throw ParameterError("entropy constants need c_ent > 0 and C_ent >= 1");
  }
}

double budget_numerator(const BudgetInputs& b) {
  return b.k * std::log(std::log(b.n)) + b.c_ent * b.m * std::log(b.C_ent / b.eta);
}

}  // namespace

double rho_eng(const BudgetInputs& b) {
  validate(b);
  return budget_numerator(b) / std::log(b.n);
}

bool subcritical_check(const BudgetInputs& b, double epsilon0) {
  validate(b);
  if (!(epsilon0 > 0 && epsilon0 < 1)) throw ParameterError("epsilon0 must lie in (0, 1)");
  const double lhs = budget_numerator(b);
  const double rhs = (1.0 - epsilon0) * std::log(b.n);
  // A few ulps of slack so that a boundary case computed two ways still counts.
  return lhs <= rhs + 8 * std::numeric_limits<double>::epsilon() * std::abs(rhs);
}

GenericBound generic_image_bound(const ObservationTable& t) {
  GenericBound g;
  g.image_size = t.image_size();
  g.profile_count = t.profile_count();
  g.codebook_size = codebook_size(t.codes());
  g.bound = g.profile_count * g.codebook_size;
  g.satisfied = g.image_size <= g.bound;
  return g;
}

std::optional<RefinedBound> refined_image_bound(const ObservationTable& t) {
  const auto diag = bucket_diagnostics(t);
  if (diag.buckets.empty()) return std::nullopt;

  Ratio beta{0, 1};
  Ratio coll{1, 1};
  for (const auto& b : diag.buckets) {
    const Ratio bal{static_cast<Wide>(b.code_count) * static_cast<Wide>(b.max_occupancy),
                    static_cast<Wide>(b.size)};
    const Ratio c{static_cast<Wide>(b.colliding_pairs),
                  static_cast<Wide>(b.size) * static_cast<Wide>(b.size - 1)};
    if (ratio_less(beta, bal)) beta = bal;
    if (ratio_less(c, coll)) coll = c;
  }
  if (coll.num == 0) return std::nullopt;

  RefinedBound r;
  r.image_size = t.image_size();
  r.profile_count = t.profile_count();
  r.max_balance = static_cast<double>(beta.num) / static_cast<double>(beta.den);
  r.min_collision = static_cast<double>(coll.num) / static_cast<double>(coll.den);
  r.bound = static_cast<double>(r.profile_count) * (1.0 + r.max_balance / r.min_collision);
  // |Im| <= D (1 + beta / c)  <=>  |Im| beta.den c.num <= D (beta.den c.num + beta.num c.den)
  const Wide lhs = static_cast<Wide>(r.image_size) * beta.den * coll.num;
  const Wide rhs = static_cast<Wide>(r.profile_count) * (beta.den * coll.num + beta.num * coll.den);
  r.satisfied = lhs <= rhs;
  return r;
}

bool per_bucket_bound_holds(const BucketSummary& b) {
  if (b.size < 2) return true;
  // Multiply both sides by |B| / M(B): |B| + pairs <= max_occupancy |B|.
  const Wide size = static_cast<Wide>(b.size);
  return size + static_cast<Wide>(b.colliding_pairs) <= static_cast<Wide>(b.max_occupancy) * size;
}

double per_bucket_bound(const BucketSummary& b) {
  const auto size = static_cast<double>(b.size);
  return b.balance * size / (1.0 + (size - 1.0) * b.collision);
}

BoundReport bound_report(const ObservationTable& t) {
  return {generic_image_bound(t), refined_image_bound(t)};
}

double impossibility_floor(const ObservationTable& t) { return optimal_error(t); }

}  // namespace obsmap
