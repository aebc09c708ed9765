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
// Private optimization of quasi-concave objectives by sample-and-aggregate:
// partition the data, maximize each block exactly, and privately release an
// interior point of the block maximizers. Only the aggregation step touches
// the privacy budget, because one input element influences one block.

#ifndef DPQC_OPTIMIZER_H_
#define DPQC_OPTIMIZER_H_

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "dpqc/dp_core.h"
#include "dpqc/interior_point.h"
#include "dpqc/ordered_domain.h"

namespace dpqc {

// A d-dimensional objective Q(S, x) bound to a dataset. Subsets are index
// views into the bound dataset, so the optimizer never copies data.
//
// SliceEval(subset, prefix, x) evaluates the one-dimensional function
// obtained by fixing coordinates 1..|prefix| to `prefix`, coordinate
// |prefix|+1 to `x`, and maximizing over the remaining coordinates' candidate
// domains. For |prefix| == d-1 it must equal Eval(subset, prefix + [x]).
class TargetFunction {
 public:
  virtual ~TargetFunction() = default;

  virtual int dimension() const = 0;
  virtual int64_t dataset_size() const = 0;

  virtual double Eval(std::span<const int64_t> subset,
                      const RationalPoint& point) const = 0;

  virtual double SliceEval(std::span<const int64_t> subset,
                           const RationalPoint& prefix,
                           const Rational& x) const = 0;

  // Candidate domain for coordinate i (1-based), given the previously fixed
  // coordinates. Constructions may depend only on the prefix, never on the
  // dataset.
  virtual std::shared_ptr<const OrderedDomain> Domain(
      int i, const RationalPoint& prefix) const = 0;
};

// Disjoint blocks covering [0, n), each of size at least floor(n/t).
struct Partition {
  int64_t t = 0;
  std::vector<std::vector<int64_t>> blocks;
  std::vector<int64_t> block_of;  // size n

  int64_t n() const { return static_cast<int64_t>(block_of.size()); }
};

// Uniformly random partition: shuffle, then split into t consecutive blocks
// of size floor(n/t), distributing the remainder one element per block to
// the first n mod t blocks. Throws InsufficientSamplesError when n < t.
Partition MakePartition(int64_t n, int64_t t, RandomSource& rng);

struct OptimizerConfig {
  double alpha = 0.1;
  double beta = 0.05;
  PrivacyParams privacy;
  int64_t t = 0;
  std::optional<Partition> fixed_partition;
};

// Exact maximizer of `value` over the domain by full enumeration; ties break
// to the smallest element (domain order is increasing).
Rational ArgmaxOverDomain(const std::function<double(const Rational&)>& value,
                          const OrderedDomain& domain);

// Per-coordinate diagnostics of a high-dimensional run.
struct OptimizerTrace {
  struct Coordinate {
    Rational chosen;
    double slice_value_full = 0;       // slice value of the choice on all of S
    std::vector<Rational> block_argmaxes;
  };
  std::vector<Coordinate> coordinates;
};

// One-dimensional private optimizer. Partitions the bound dataset (or uses
// config.fixed_partition), computes each block's exact maximizer over
// `domain`, and aggregates them with a private interior point under
// config.privacy. (epsilon, delta)-DP in the dataset. Requires
// Q.dimension() == 1.
Rational IpConcave(const TargetFunction& q, const OrderedDomain& domain,
                   const OptimizerConfig& config, RandomSource& rng,
                   CompositionLedger* ledger = nullptr,
                   OptimizerTrace* trace = nullptr);

// Coordinate-by-coordinate driver for d-dimensional targets. One partition
// is drawn up front and reused for every coordinate, so a good partition
// stays good for all iterations. Total privacy by advanced composition:
// (epsilon sqrt(2 d ln(1/delta')), d delta + delta') for any delta' > 0.
RationalPoint IpConcaveHighDim(const TargetFunction& q,
                               const OptimizerConfig& config,
                               RandomSource& rng,
                               CompositionLedger* ledger = nullptr,
                               OptimizerTrace* trace = nullptr);

}  // namespace dpqc

#endif  // DPQC_OPTIMIZER_H_
