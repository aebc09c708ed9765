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

#include "dpqc/dp_core.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dpqc/error.h"

namespace dpqc {
namespace {

uint64_t SplitMix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

PrivacyParams::PrivacyParams(double epsilon, double delta)
    : epsilon(epsilon), delta(delta) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw ParameterError("PrivacyParams: epsilon must be positive");
  }
  if (!(delta >= 0.0 && delta < 1.0)) {
    throw ParameterError("PrivacyParams: delta must be in [0, 1)");
  }
}

uint64_t RandomSource::NextU64() {
  ++counter_;
  return SplitMix64(seed_ + 0x9E3779B97F4A7C15ULL * counter_);
}

double RandomSource::NextUnit() {
  // 53 random bits, offset by half an ulp so the result is never 0 or 1.
  return (static_cast<double>(NextU64() >> 11) + 0.5) * 0x1.0p-53;
}

uint64_t RandomSource::NextBelow(uint64_t bound) {
  if (bound == 0) throw ParameterError("NextBelow: bound must be positive");
  // Rejection sampling over a multiple of bound, so the result is exactly
  // uniform.
  const uint64_t limit = std::numeric_limits<uint64_t>::max() -
                         std::numeric_limits<uint64_t>::max() % bound;
  uint64_t draw;
  do {
    draw = NextU64();
  } while (draw >= limit);
  return draw % bound;
}

RandomSource RandomSource::Fork(uint64_t stream) const {
  return RandomSource(SplitMix64(seed_ ^ (0xA24BAED4963EE407ULL * (stream + 1))));
}

void CompositionLedger::Record(const PrivacyParams& params,
                               const std::string& label) {
  entries_.push_back(Entry{params.epsilon, params.delta, label});
}

PrivacyParams CompositionLedger::BasicTotal() const {
  double eps = 0.0, del = 0.0;
  for (const Entry& e : entries_) {
    eps += e.epsilon;
    del += e.delta;
  }
  PrivacyParams p;
  p.epsilon = eps;
  p.delta = del;
  return p;
}

PrivacyParams CompositionLedger::AdvancedTotal(double delta_prime) const {
  if (entries_.empty()) return PrivacyParams();
  double eps_max = 0.0, del_max = 0.0;
  for (const Entry& e : entries_) {
    eps_max = std::max(eps_max, e.epsilon);
    del_max = std::max(del_max, e.delta);
  }
  return AdvancedComposition(eps_max, del_max,
                             static_cast<int64_t>(entries_.size()),
                             delta_prime);
}

double LaplaceSample(double scale, RandomSource& rng) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw ParameterError("LaplaceSample: scale must be positive");
  }
  // Inverse CDF of one uniform draw. u is strictly inside (0, 1), so the
  // logarithm argument is strictly positive.
  const double u = rng.NextUnit() - 0.5;
  const double sign = u < 0.0 ? -1.0 : 1.0;
  return -scale * sign * std::log1p(-2.0 * std::abs(u));
}

std::vector<double> ExpMechanismWeights(const std::vector<double>& scores,
                                        double sensitivity, double epsilon) {
  if (scores.empty()) {
    throw ParameterError("ExpMechanism: empty candidate list");
  }
  if (!(sensitivity > 0.0) || !(epsilon > 0.0)) {
    throw ParameterError("ExpMechanism: sensitivity and epsilon must be positive");
  }
  double max_score = -std::numeric_limits<double>::infinity();
  for (double s : scores) {
    if (!std::isfinite(s)) throw ParameterError("ExpMechanism: non-finite score");
    max_score = std::max(max_score, s);
  }
  std::vector<double> weights(scores.size());
  const double coef = epsilon / (2.0 * sensitivity);
  for (size_t i = 0; i < scores.size(); ++i) {
    weights[i] = std::exp(coef * (scores[i] - max_score));
  }
  return weights;
}

int64_t ExpMechanism(const std::vector<double>& scores, double sensitivity,
                     double epsilon, RandomSource& rng) {
  return ExpMechanismStream(
      static_cast<int64_t>(scores.size()),
      [&scores](int64_t i) { return scores[static_cast<size_t>(i)]; },
      sensitivity, epsilon, rng);
}

int64_t ExpMechanismStream(int64_t count,
                           const std::function<double(int64_t)>& score,
                           double sensitivity, double epsilon,
                           RandomSource& rng) {
  if (count <= 0) throw ParameterError("ExpMechanism: empty candidate list");
  if (!(sensitivity > 0.0) || !(epsilon > 0.0)) {
    throw ParameterError("ExpMechanism: sensitivity and epsilon must be positive");
  }
  const double coef = epsilon / (2.0 * sensitivity);

  double max_score = -std::numeric_limits<double>::infinity();
  for (int64_t i = 0; i < count; ++i) {
    const double s = score(i);
    if (!std::isfinite(s)) throw ParameterError("ExpMechanism: non-finite score");
    max_score = std::max(max_score, s);
  }
  double total = 0.0;
  for (int64_t i = 0; i < count; ++i) {
    total += std::exp(coef * (score(i) - max_score));
  }
  const double target = rng.NextUnit() * total;
  double acc = 0.0;
  for (int64_t i = 0; i < count; ++i) {
    acc += std::exp(coef * (score(i) - max_score));
    if (acc >= target) return i;
  }
  // Rounding can leave acc marginally below target; the last candidate is
  // the correct choice then.
  return count - 1;
}

PrivacyParams AdvancedComposition(double epsilon, double delta, int64_t k,
                                  double delta_prime) {
  if (k < 1) throw ParameterError("AdvancedComposition: k must be >= 1");
  if (!(epsilon > 0.0)) {
    throw ParameterError("AdvancedComposition: epsilon must be positive");
  }
  if (!(delta_prime > 0.0 && delta_prime < 1.0)) {
    throw ParameterError("AdvancedComposition: delta' must be in (0, 1)");
  }
  if (!(delta >= 0.0)) {
    throw ParameterError("AdvancedComposition: delta must be nonnegative");
  }
  PrivacyParams total;
  total.epsilon =
      std::sqrt(2.0 * static_cast<double>(k) * std::log(1.0 / delta_prime)) *
      epsilon;
  total.delta = static_cast<double>(k) * delta + delta_prime;
  return total;
}

PrivacyParams InverseComposition(double epsilon_target, double delta_target,
                                 int64_t k) {
  if (k < 1) throw ParameterError("InverseComposition: k must be >= 1");
  if (!(epsilon_target > 0.0) || !(delta_target > 0.0)) {
    throw ParameterError("InverseComposition: targets must be positive");
  }
  PrivacyParams step;
  step.epsilon = epsilon_target /
                 std::sqrt(2.0 * static_cast<double>(k) *
                           std::log(2.0 / delta_target));
  step.delta = delta_target / (2.0 * static_cast<double>(k));
  return step;
}

}  // namespace dpqc
