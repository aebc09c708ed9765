// Copyright 2026 The dpqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPQC_GRID_H_
#define DPQC_GRID_H_

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "dpqc/rational.h"

namespace dpqc {

// The candidate set {s/t : |s| <= s_max, 1 <= t <= t_max}. Grids are never
// materialized implicitly; enumeration streams distinct values in increasing
// order by merging the denominator classes of lowest-terms fractions.
class RationalGrid {
 public:
  RationalGrid(mpz_class s_max, mpz_class t_max);

  const mpz_class& s_max() const { return s_max_; }
  const mpz_class& t_max() const { return t_max_; }

  // (2 s_max + 1) * t_max, the bound before deduplication.
  mpz_class PreDedupBound() const;

  // Exact number of distinct values. Requires t_max to fit in the sieve
  // (<= 2^23); all domains this library materializes or sizes do.
  mpz_class DistinctSize() const;

  // True iff value belongs to the grid (constant-time on the canonical form).
  bool Contains(const Rational& value) const;

  // Smallest grid element in [lo, hi] if any; O(t_max) denominator sweep.
  // `open_lo` / `open_hi` exclude the endpoints.
  std::optional<Rational> SmallestInRange(const Rational& lo,
                                          const Rational& hi,
                                          bool open_lo = false,
                                          bool open_hi = false) const;

  // Whether any grid value lies in the range; bounds default to the grid's
  // own extremes. Sweeps denominators with an early exit on the first hit.
  bool HasValueIn(const std::optional<Rational>& lo,
                  const std::optional<Rational>& hi, bool open_lo = false,
                  bool open_hi = false) const;

  // Visits every distinct grid value in strictly increasing order. Stops
  // early when `visit` returns false. Requires t_max <= 2^23.
  void Enumerate(const std::function<bool(const Rational&)>& visit) const;

  // Materializes the full ordered value list. Throws ParameterError when the
  // distinct size exceeds `cap`.
  std::vector<Rational> Materialize(int64_t cap = 1 << 22) const;

 private:
  mpz_class s_max_;
  mpz_class t_max_;
};

// The rational with the smallest denominator inside the interval, if the
// interval is nonempty; among equal denominators the one closest to zero.
// Runs in O(log max denominator) continued-fraction steps.
std::optional<Rational> SimplestRationalInInterval(const Rational& lo,
                                                   const Rational& hi,
                                                   bool open_lo = false,
                                                   bool open_hi = false);

// Per-coordinate overrides that shrink (or enlarge) a domain below the
// provable bounds, for runtime control. Keys are 1-based coordinate indices.
struct GridOverride {
  std::optional<mpz_class> s_max;
  std::optional<mpz_class> t_max;
};
using GridConfig = std::map<int, GridOverride>;

// Candidate domain for coordinate i of a d-variable linear feasibility
// problem with integer coefficients bounded by x_bound. The denominator
// bound cascades through prev_denominator, the denominator of the
// previously fixed coordinate (ignored for i == 1).
RationalGrid LfDomain(int i, int d, const mpz_class& x_bound,
                      const mpz_class& prev_denominator);

// Same construction specialized to Tukey-depth optimization over integer
// points with coordinates bounded by x_bound: slice maximizers lie at
// intersections of hyperplanes spanned by input points, whose coefficients
// are bounded by d! * (2 x_bound)^d; that bound feeds the cascade. For
// d == 1 the maximizer is a data point, so the grid is the integers [-X, X].
// `config` applies per-coordinate overrides after the defaults.
RationalGrid TukeyDomain(int i, int d, const mpz_class& x_bound,
                         const mpz_class& prev_denominator,
                         const GridConfig& config = {});

// LfDomain with overrides applied, mirroring TukeyDomain's config handling.
RationalGrid LfDomainConfigured(int i, int d, const mpz_class& x_bound,
                                const mpz_class& prev_denominator,
                                const GridConfig& config);

}  // namespace dpqc

#endif  // DPQC_GRID_H_
