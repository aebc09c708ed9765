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
// Private linear feasibility and halfspace learning. depth counts satisfied
// constraints; cdepth is its convexification, evaluated exactly for d == 2
// through the nested hulls of the constraint-line arrangement's superlevel
// sets. Hull tests use stratum closures, so boundary points carry their
// closed-count depth.

#ifndef DPQC_LINFEAS_H_
#define DPQC_LINFEAS_H_

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

// One linear predicate <a, x> >= w with integer coefficients.
struct Constraint {
  std::vector<int64_t> a;
  int64_t w = 0;
};

// A multiset of constraints of uniform arity d with coefficients in [[X]].
class ConstraintSet {
 public:
  ConstraintSet(int d, int64_t x_bound, std::vector<Constraint> constraints);

  int d() const { return d_; }
  int64_t x_bound() const { return x_bound_; }
  int64_t size() const { return static_cast<int64_t>(constraints_.size()); }
  const Constraint& at(int64_t i) const { return constraints_[i]; }
  const std::vector<Constraint>& constraints() const { return constraints_; }

 private:
  int d_;
  int64_t x_bound_;
  std::vector<Constraint> constraints_;
};

// Number of satisfied constraints among the subset rows, exact rational
// evaluation. Any dimension.
int64_t Depth(const ConstraintSet& s, std::span<const int64_t> subset,
              const RationalPoint& x);
int64_t Depth(const ConstraintSet& s, const RationalPoint& x);

// Exact cdepth evaluation for d == 2: level structure of depth over the
// boundary-line arrangement, one convex region per distinct superlevel.
class CdepthOracle {
 public:
  CdepthOracle(const ConstraintSet& s, std::span<const int64_t> subset);

  int64_t Cdepth(const RationalPoint& x) const;
  int64_t Depth(const RationalPoint& x) const;

  struct Level {
    int64_t value;
    ConvexRegion region;
  };
  // Decreasing by value; regions grow as the value decreases.
  const std::vector<Level>& levels() const { return levels_; }

 private:
  struct Predicate {
    int64_t a1, a2, w, weight;
  };
  std::vector<Predicate> predicates_;
  std::vector<Level> levels_;
};

// Convenience wrapper; builds a fresh oracle, so prefer CdepthOracle for
// repeated queries. Throws DimensionError for d != 2.
int64_t Cdepth(const ConstraintSet& s, std::span<const int64_t> subset,
               const RationalPoint& x);

// Definition-faithful route for cross-checking the oracle on small inputs:
// walks the superlevel sets and decides hull membership by enumerating
// Caratheodory combinations of stratum generators and recession rays.
int64_t CdepthBruteForce(const ConstraintSet& s,
                         std::span<const int64_t> subset,
                         const RationalPoint& x);

// cdepth normalized by the subset size, in [0, 1].
double QLf(const ConstraintSet& s, std::span<const int64_t> subset,
           const RationalPoint& x);

// Probes at which the sup over the plane of |Q_lf(full) - Q_lf(subset)| is
// attained: every level-hull vertex of both structures plus the strata of
// the boundary-line arrangement. The minimum of a quasi-concave function
// over a convex level set sits at one of its vertices, which pins the sup
// of the difference to these points.
std::vector<RationalPoint> LfGapProbes(const ConstraintSet& s,
                                       std::span<const int64_t> subset);

// Q_lf as an optimizer target over the feasibility domain cascade. Oracles
// are cached per subset, so fixed partitions amortize arrangement builds.
class LinFeasTarget : public TargetFunction {
 public:
  explicit LinFeasTarget(const ConstraintSet& constraints,
                         GridConfig grid_config = {},
                         int64_t domain_cap = 1 << 22,
                         bool exclude_zero_first_coordinate = false);

  int dimension() const override { return constraints_.d(); }
  int64_t dataset_size() const override { return constraints_.size(); }
  double Eval(std::span<const int64_t> subset,
              const RationalPoint& point) const override;
  double SliceEval(std::span<const int64_t> subset, const RationalPoint& prefix,
                   const Rational& x) const override;
  std::shared_ptr<const OrderedDomain> Domain(
      int i, const RationalPoint& prefix) const override;

 private:
  std::shared_ptr<const CdepthOracle> OracleFor(
      std::span<const int64_t> subset) const;
  std::shared_ptr<const OrderedDomain> SuffixDomain(const Rational& x) const;

  const ConstraintSet& constraints_;
  GridConfig grid_config_;
  int64_t domain_cap_;
  bool exclude_zero_first_coordinate_;
  mutable std::mutex mu_;
  mutable std::map<std::vector<int64_t>, std::shared_ptr<const CdepthOracle>>
      oracle_cache_;
  mutable std::map<std::string, std::shared_ptr<const OrderedDomain>>
      suffix_cache_;
};

struct LinFeasOptions {
  GridConfig grid_config;
  std::optional<int64_t> t_override;
  int64_t domain_cap = 1 << 22;
  // Drops 0 from the first coordinate's candidate domain. The halfspace
  // reduction produces homogeneous constraints, all satisfied by the zero
  // vector; removing the value keeps the argmax off that degenerate point.
  bool exclude_zero_first_coordinate = false;
};

struct LinFeasResult {
  RationalPoint point;
  int64_t satisfied = 0;  // depth of the output on the full input
  int64_t t = 0;
  int64_t n_min_baseline = 0;
  double n_min_theory = 0;
  OptimizerTrace trace;
  CompositionLedger ledger;
};

// (epsilon, delta)-DP solver: on feasible inputs of sufficient size the
// output satisfies at least (1 - alpha) n constraints with probability
// 1 - beta. Infeasible inputs run fine (privacy holds; the utility claim is
// void). Requires d == 2 for exact slice evaluation.
LinFeasResult PrivateLinearFeasibility(const ConstraintSet& s, double alpha,
                                       double beta,
                                       const PrivacyParams& privacy,
                                       RandomSource& rng,
                                       const LinFeasOptions& options = {});

struct LabeledExample {
  std::vector<int64_t> x;
  int label = 1;  // +1 or -1
};

// ((x_1..x_d), y) -> constraint <y (x_1..x_d, -1), z> >= 0 in d+1 variables.
ConstraintSet ReduceExamplesToConstraints(
    const std::vector<LabeledExample>& examples, int64_t x_bound);

struct Hypothesis {
  RationalPoint weights;
  Rational threshold;
  // +1 iff <weights, x> >= threshold.
  int Predict(std::span<const int64_t> x) const;
};

struct LearnResult {
  Hypothesis hypothesis;
  double training_error = 0;
  int64_t pac_sample_bound = 0;
  LinFeasResult solver;
};

// PAC halfspace learner by reduction to private linear feasibility with
// empirical error target alpha/10. Exact evaluation restricts the reduction
// to d == 1 examples (two feasibility variables).
LearnResult LearnHalfspace(const std::vector<LabeledExample>& examples,
                           int64_t x_bound, double alpha, double beta,
                           const PrivacyParams& privacy, RandomSource& rng,
                           const LinFeasOptions& options = {});

}  // namespace dpqc

#endif  // DPQC_LINFEAS_H_
