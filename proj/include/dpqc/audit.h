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
// Empirical differential-privacy auditing: event-frequency lower bounds on
// epsilon over neighboring inputs, plus a reference reimplementation of a
// published halfspace-learning pipeline whose composition step leaks its
// input, together with the dataset pair that exposes the leak.

#ifndef DPQC_AUDIT_H_
#define DPQC_AUDIT_H_

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dpqc/dp_core.h"
#include "dpqc/stats.h"

namespace dpqc {

// The uniform angle grid {k gamma : 0 <= k < ceil(2 pi / gamma)}.
struct AngleGrid {
  double gamma = 0;
  int64_t size = 0;

  // gamma = 2 pi / count. An odd count keeps pi itself off the grid, which
  // keeps the antipodal pair of degenerate datasets cleanly separated.
  static AngleGrid FromCount(int64_t count);
  double Angle(int64_t k) const { return gamma * static_cast<double>(k); }
};

// A labeled integer point in the plane; (0, 0) is rejected at ingestion
// because its angle is undefined.
struct LabeledPlanePoint {
  int64_t x = 0, y = 0;
  int label = 1;  // +1 or -1
};

// Noisy per-angle agreement counts: angle k receives
// max(ceil(n_k + Lap(1/epsilon)), 1) copies, where n_k counts examples
// within angular distance gamma of angle k that the halfspace at angle k
// labels correctly. Returned as (angle index, copies) with copies >= 1.
std::vector<std::pair<int64_t, int64_t>> MakeData(
    double epsilon, const AngleGrid& grid,
    std::span<const LabeledPlanePoint> s, RandomSource& rng);

struct ThrData {
  struct Item {
    int64_t original_index;
    int64_t rotated_index;
    int label;  // +1 iff rotated angle <= rotated argmax angle
  };
  std::vector<Item> items;
  int64_t rotation_index = 0;        // the angle mapped to zero
  int64_t argmax_original_index = 0;
  int64_t argmax_rotated_index = 0;
};

// Selects the c elements of s_h largest in the lexicographic order of
// (q(s, angle), angle), where q counts examples the angle's halfspace labels
// correctly; rotates coordinates so a randomly chosen non-selected element
// maps to zero; labels the selected elements against the rotated argmax.
// Requires |s_h| > c (element count with multiplicity).
ThrData MakeThrData(std::span<const std::pair<int64_t, int64_t>> s_h,
                    const AngleGrid& grid,
                    std::span<const LabeledPlanePoint> s, int64_t c,
                    RandomSource& rng);

// The full pipeline: grid -> MakeData -> MakeThrData -> threshold learner.
// The learner is a private interior point over the selected elements'
// rotated indices; its output is rotated back. `c` is the selected-element
// count handed to the threshold stage (its sample size). `alpha` is accepted
// for signature compatibility with the published learner; the interior-point
// realization has no accuracy knob to spend it on.
double ASimpleH(std::span<const LabeledPlanePoint> s, const AngleGrid& grid,
                int64_t c, double epsilon, double delta, double alpha,
                double beta, RandomSource& rng);

// The neighboring pair exposing the leak: n/2 + 1 copies of ((1,0),-1) with
// n/2 - 1 copies of ((-1,0),-1), and the dataset with one of the former
// replaced by the latter. Requires even n >= 4.
std::pair<std::vector<LabeledPlanePoint>, std::vector<LabeledPlanePoint>>
CounterexampleDatasets(int64_t n);

struct AuditReport {
  int64_t trials = 0;
  int64_t hits_s = 0, hits_s_prime = 0;
  double p_s = 0, p_s_prime = 0;
  BinomialCi ci_s, ci_s_prime;
  double claimed_epsilon = 0, claimed_delta = 0;
  // max over input orderings and over the event/complement of
  // ln((p_hi_side_lo - delta) / p_lo_side_hi) at the pessimistic CI ends.
  double epsilon_hat = 0;
  // Some ordering had a positive point-estimate numerator against a zero
  // point-estimate denominator.
  bool unbounded_at_resolution = false;
  std::string verdict;  // "consistent" or "DP violated"
};

// Runs `event` `trials` times on each input (argument selects S or S') with
// per-trial derived seeds and assembles the report. Requires trials >= 100.
AuditReport EstimateEpsilonLowerBound(
    const std::function<bool(bool use_s_prime, RandomSource&)>& event,
    int64_t trials, double claimed_epsilon, double claimed_delta,
    RandomSource& rng, double confidence = 0.95);

}  // namespace dpqc

#endif  // DPQC_AUDIT_H_
