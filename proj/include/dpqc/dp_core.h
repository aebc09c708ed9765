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

#ifndef DPQC_DP_CORE_H_
#define DPQC_DP_CORE_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace dpqc {

// An (epsilon, delta) privacy budget. delta == 0 is pure DP.
struct PrivacyParams {
  double epsilon = 0.0;
  double delta = 0.0;

  PrivacyParams() = default;
  // Throws ParameterError unless epsilon > 0 and 0 <= delta < 1.
  PrivacyParams(double epsilon, double delta);
};

// Deterministic pseudo-random source: a 64-bit seed plus an internal draw
// counter. Identical seeds give bit-identical draw sequences. The generator
// is splitmix64 over the counter. It is not cryptographically secure, and
// the floating-point Laplace noise derived from it is not hardened against
// side channels; this library targets reproducible experiments, not
// adversarial deployments.
class RandomSource {
 public:
  explicit RandomSource(uint64_t seed) : seed_(seed), counter_(0) {}

  uint64_t NextU64();

  // Uniform double strictly inside (0, 1).
  double NextUnit();

  // Uniform integer in [0, bound). bound must be positive.
  uint64_t NextBelow(uint64_t bound);

  // A new source with a seed derived deterministically from (seed, stream).
  // Streams with distinct indices are independent for practical purposes.
  RandomSource Fork(uint64_t stream) const;

  uint64_t seed() const { return seed_; }
  uint64_t counter() const { return counter_; }

 private:
  uint64_t seed_;
  uint64_t counter_;
};

// Records the privacy cost of each mechanism invocation and aggregates the
// entries into a total budget.
class CompositionLedger {
 public:
  struct Entry {
    double epsilon;
    double delta;
    std::string label;
  };

  void Record(const PrivacyParams& params, const std::string& label);

  const std::vector<Entry>& entries() const { return entries_; }
  int64_t size() const { return static_cast<int64_t>(entries_.size()); }

  // Sequential composition: (sum of epsilons, sum of deltas).
  PrivacyParams BasicTotal() const;

  // k-fold advanced composition of the entries, treating each entry as
  // (max epsilon, max delta)-DP, plus the slack delta_prime.
  PrivacyParams AdvancedTotal(double delta_prime) const;

 private:
  std::vector<Entry> entries_;
};

// One draw from Laplace(0, scale), density (1/2b) exp(-|x|/b), via the
// inverse CDF of a single uniform draw. Throws ParameterError if scale <= 0.
double LaplaceSample(double scale, RandomSource& rng);

// Stabilized weights exp(epsilon * (score - max_score) / (2 * sensitivity)).
// Exposed so tests can assert scale invariance analytically.
std::vector<double> ExpMechanismWeights(const std::vector<double>& scores,
                                        double sensitivity, double epsilon);

// Selects index i with probability proportional to
// exp(epsilon * score_i / (2 * sensitivity)). Scores must be finite;
// the candidate list must be nonempty.
int64_t ExpMechanism(const std::vector<double>& scores, double sensitivity,
                     double epsilon, RandomSource& rng);

// Streaming form for domains too large to materialize: `score` is evaluated
// lazily (three passes: max, normalizer, selection) and must be pure.
int64_t ExpMechanismStream(int64_t count,
                           const std::function<double(int64_t)>& score,
                           double sensitivity, double epsilon,
                           RandomSource& rng);

// k-fold advanced composition of (epsilon, delta)-DP mechanisms:
// (sqrt(2k ln(1/delta')) * epsilon, k*delta + delta').
PrivacyParams AdvancedComposition(double epsilon, double delta, int64_t k,
                                  double delta_prime);

// Per-step budget (epsilon / sqrt(2k ln(2/delta_target)), delta_target/(2k))
// such that advanced composition of k steps with delta' = delta_target / 2
// stays within (epsilon_target, delta_target).
PrivacyParams InverseComposition(double epsilon_target, double delta_target,
                                 int64_t k);

}  // namespace dpqc

#endif  // DPQC_DP_CORE_H_
