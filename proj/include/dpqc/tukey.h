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
//
// Tukey (halfspace) depth over integer point sets, exact for d <= 3, and a
// differentially private approximate Tukey median built on the generic
// optimizer. Closed-halfspace convention throughout: the depth of p is the
// minimum over directions v != 0 of |{s in S : <v, s - p> >= 0}|, which makes
// the center-point bound n/(d+1) hold with its stated constant.

#ifndef DPQC_TUKEY_H_
#define DPQC_TUKEY_H_

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "dpqc/dp_core.h"
#include "dpqc/geometry.h"
#include "dpqc/grid.h"
#include "dpqc/optimizer.h"

namespace dpqc {

// A multiset of integer points with coordinates bounded by x_bound.
class PointSet {
 public:
  PointSet(int d, int64_t x_bound, std::vector<std::vector<int64_t>> rows);

  int d() const { return d_; }
  int64_t x_bound() const { return x_bound_; }
  int64_t size() const { return static_cast<int64_t>(coords_.size()) / d_; }
  std::span<const int64_t> point(int64_t i) const {
    return {coords_.data() + i * d_, static_cast<size_t>(d_)};
  }

 private:
  int d_;
  int64_t x_bound_;
  std::vector<int64_t> coords_;  // row major
};

// Exact Tukey depth of p among the subset rows of s (all rows when subset is
// empty-spanned via TukeyDepth(s, p)). Throws DimensionError for d > 3.
int64_t TukeyDepth(const PointSet& s, std::span<const int64_t> subset,
                   const RationalPoint& p);
int64_t TukeyDepth(const PointSet& s, const RationalPoint& p);

// Tukey depth normalized by the subset size, in [0, 1].
double QTd(const PointSet& s, std::span<const int64_t> subset,
           const RationalPoint& p);

// max over x_{i+1},...,x_d in the cascading candidate grids of
// Q_td(subset, prefix + [x] + suffix). Exact for d <= 2; d == 3 maximizes
// over materialized suffix grids (best effort).
double TdSliceMax(const PointSet& s, std::span<const int64_t> subset,
                  const RationalPoint& prefix, const Rational& x,
                  const GridConfig& grid_config);

// Q_td as an optimizer target with the Tukey domain cascade.
class TukeyTarget : public TargetFunction {
 public:
  explicit TukeyTarget(const PointSet& points, GridConfig grid_config = {},
                       int64_t domain_cap = 1 << 22);

  int dimension() const override { return points_.d(); }
  int64_t dataset_size() const override { return points_.size(); }
  double Eval(std::span<const int64_t> subset,
              const RationalPoint& point) const override;
  double SliceEval(std::span<const int64_t> subset, const RationalPoint& prefix,
                   const Rational& x) const override;
  std::shared_ptr<const OrderedDomain> Domain(
      int i, const RationalPoint& prefix) const override;

  const PointSet& points() const { return points_; }
  const GridConfig& grid_config() const { return grid_config_; }

 private:
  const PointSet& points_;
  GridConfig grid_config_;
  int64_t domain_cap_;
  // Materialized suffix-grid values keyed by the prefix denominator.
  mutable std::mutex mu_;
  mutable std::map<std::string, std::shared_ptr<const std::vector<Rational>>>
      suffix_cache_;
};

struct TukeyMedianOptions {
  GridConfig grid_config;
  std::optional<int64_t> t_override;
  int64_t domain_cap = 1 << 22;
};

struct TukeyResult {
  RationalPoint point;
  int64_t depth = 0;  // recomputed from scratch on the full input
  int64_t t = 0;
  int64_t n_min_baseline = 0;   // executable requirement: n >= t
  double n_min_theory = 0;      // subset-size bound times block count
  OptimizerTrace trace;
  CompositionLedger ledger;
};

// Differentially private approximate Tukey median: optimizes Q_td coordinate
// by coordinate under the substituted per-coordinate budget so that the whole
// run is (epsilon, delta)-DP. On the success event the output depth is at
// least (1 - alpha) n / (d + 1).
TukeyResult PrivateTukeyMedian(const PointSet& s, double alpha, double beta,
                               const PrivacyParams& privacy, RandomSource& rng,
                               const TukeyMedianOptions& options = {});

}  // namespace dpqc

#endif  // DPQC_TUKEY_H_
