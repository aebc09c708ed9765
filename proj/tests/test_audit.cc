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

#include "dpqc/audit.h"

#include <cmath>

#include "doctest.h"
#include "dpqc/error.h"
#include "dpqc/interior_point.h"

namespace dpqc {
namespace {

constexpr double kPi = 3.14159265358979323846;

TEST_CASE("counterexample datasets") {
  const auto [s, s_prime] = CounterexampleDatasets(4);
  REQUIRE(s.size() == 4);
  REQUIRE(s_prime.size() == 4);
  int plus = 0, minus = 0;
  for (const auto& p : s) {
    CHECK(p.label == -1);
    CHECK(p.y == 0);
    if (p.x == 1) ++plus;
    if (p.x == -1) ++minus;
  }
  CHECK(plus == 3);
  CHECK(minus == 1);
  int diffs = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i].x != s_prime[i].x) ++diffs;
  }
  CHECK(diffs == 1);
  CHECK_THROWS_AS(CounterexampleDatasets(3), ParameterError);
  CHECK_THROWS_AS(CounterexampleDatasets(2), ParameterError);
}

TEST_CASE("make_data clamps every angle to at least one copy") {
  const AngleGrid grid = AngleGrid::FromCount(101);
  RandomSource rng(443);
  const std::vector<LabeledPlanePoint> empty;
  const auto s_h = MakeData(1.0, grid, empty, rng);
  REQUIRE(static_cast<int64_t>(s_h.size()) == grid.size);
  int64_t total = 0;
  for (const auto& [k, copies] : s_h) {
    CHECK(copies >= 1);
    total += copies;
  }
  CHECK(total >= grid.size);
}

TEST_CASE("make_data with huge epsilon recovers the exact count") {
  const AngleGrid grid = AngleGrid::FromCount(101);
  RandomSource rng(449);
  // One example aligned with angle index 25, label matching its halfspace.
  const double phi = grid.Angle(25);
  const LabeledPlanePoint p{
      static_cast<int64_t>(std::llround(std::cos(phi) * 1000)),
      static_cast<int64_t>(std::llround(std::sin(phi) * 1000)), 1};
  const std::vector<LabeledPlanePoint> s = {p};
  const auto s_h = MakeData(1e9, grid, s, rng);
  for (const auto& [k, copies] : s_h) {
    if (k == 25) {
      CHECK(copies == 1);  // max(ceil(1 + tiny noise), 1) = 1
    } else {
      CHECK(copies >= 1);
    }
  }
}

TEST_CASE("make_data count law matches the clamped ceiling analytically") {
  // For a fixed angle with true count n_phi, the copy count is
  // max(ceil(n_phi + Lap(1/eps)), 1); compare frequencies at 10^4 draws.
  const double eps = 1.0;
  const int64_t n_phi = 3;
  RandomSource rng(457);
  const int64_t draws = 10000;
  std::map<int64_t, int64_t> freq;
  for (int64_t i = 0; i < draws; ++i) {
    const double noisy = n_phi + LaplaceSample(1.0 / eps, rng);
    ++freq[std::max<int64_t>(static_cast<int64_t>(std::ceil(noisy)), 1)];
  }
  auto laplace_cdf = [&](double x) {
    return x < 0 ? 0.5 * std::exp(x * eps) : 1.0 - 0.5 * std::exp(-x * eps);
  };
  for (int64_t k = 1; k <= 7; ++k) {
    double p;
    if (k == 1) {
      p = laplace_cdf(1 - n_phi);  // all mass at or below 1
    } else {
      p = laplace_cdf(k - n_phi) - laplace_cdf(k - 1 - n_phi);
    }
    const double sigma = std::sqrt(draws * p * (1 - p));
    CHECK(std::abs(freq[k] - draws * p) <= 4 * sigma + 2);
  }
}

TEST_CASE("make_thr_data selects the lexicographically largest elements") {
  const AngleGrid grid = AngleGrid::FromCount(11);
  RandomSource rng(461);
  // Empty example set: all q equal zero, so the tie rule selects the largest
  // angles.
  std::vector<std::pair<int64_t, int64_t>> s_h;
  for (int64_t k = 0; k < grid.size; ++k) s_h.push_back({k, 1});
  const std::vector<LabeledPlanePoint> empty;
  const ThrData thr = MakeThrData(s_h, grid, empty, 3, rng);
  REQUIRE(thr.items.size() == 3);
  for (const auto& item : thr.items) {
    CHECK(item.original_index >= grid.size - 3);
  }
  CHECK_THROWS_AS(MakeThrData(std::span(s_h.data(), 2), grid, empty, 5, rng),
                  ParameterError);
}

TEST_CASE("make_thr_data on the counterexample pair") {
  const auto [s, s_prime] = CounterexampleDatasets(40);
  const AngleGrid grid = AngleGrid::FromCount(101);
  std::vector<std::pair<int64_t, int64_t>> s_h;
  for (int64_t k = 0; k < grid.size; ++k) s_h.push_back({k, 1});
  RandomSource rng(463);
  const int64_t c = 20;
  const ThrData on_s = MakeThrData(s_h, grid, s, c, rng);
  for (const auto& item : on_s.items) {
    const double phi = grid.Angle(item.original_index);
    CHECK(phi > 0.0);
    CHECK(phi < kPi);
  }
  const ThrData on_s_prime = MakeThrData(s_h, grid, s_prime, c, rng);
  for (const auto& item : on_s_prime.items) {
    const double phi = grid.Angle(item.original_index);
    CHECK(phi > kPi);
    CHECK(phi < 2 * kPi);
  }
}

TEST_CASE("a_simple_h outputs stay in the loaded half circle") {
  const auto [s, s_prime] = CounterexampleDatasets(40);
  const AngleGrid grid = AngleGrid::FromCount(501);
  RandomSource rng(467);
  for (int trial = 0; trial < 150; ++trial) {
    RandomSource trial_rng = rng.Fork(trial);
    const double phi = ASimpleH(s, grid, 60, 1.0, 0.0, 0.1, 0.05, trial_rng);
    CHECK(phi > 0.0);
    CHECK(phi < kPi);
  }
  for (int trial = 0; trial < 150; ++trial) {
    RandomSource trial_rng = rng.Fork(1000 + trial);
    const double phi =
        ASimpleH(s_prime, grid, 60, 1.0, 0.0, 0.1, 0.05, trial_rng);
    CHECK(phi > kPi);
    CHECK(phi < 2 * kPi);
  }
}

TEST_CASE("input-oblivious mechanisms audit near zero") {
  RandomSource rng(479);
  const AuditReport report = EstimateEpsilonLowerBound(
      [](bool, RandomSource& r) { return r.NextUnit() < 0.5; }, 100000, 1.0,
      0.0, rng);
  CHECK(report.epsilon_hat <= 0.1);
  CHECK(report.verdict == "consistent");
}

TEST_CASE("exp-mech interior point audits within its budget") {
  // Neighboring 20-element multisets differing in one extreme element; the
  // event {output <= median of the domain} cannot reveal more than epsilon.
  const double eps = 1.0;
  std::vector<Rational> s_values, s_prime_values;
  for (int i = 0; i < 10; ++i) s_values.push_back(Rational(-8));
  for (int i = 0; i < 10; ++i) s_values.push_back(Rational(8));
  s_prime_values = s_values;
  s_prime_values[0] = Rational(8);
  IntRangeDomain domain(-16, 16);
  IpSolverSpec spec;
  spec.privacy = PrivacyParams(eps, 0.0);
  spec.beta = 0.45;  // 20 samples meet the baseline bound at this beta
  RandomSource rng(487);
  const AuditReport report = EstimateEpsilonLowerBound(
      [&](bool use_s_prime, RandomSource& trial_rng) {
        const auto& values = use_s_prime ? s_prime_values : s_values;
        const Rational out =
            PrivateInteriorPoint(values, domain, spec, trial_rng);
        return out <= Rational(0);
      },
      100000, eps, 0.0, rng);
  CHECK(report.epsilon_hat <= eps + 0.3);
  CHECK(report.verdict == "consistent");
}

TEST_CASE("the counterexample pair is flagged as a violation") {
  const auto [s, s_prime] = CounterexampleDatasets(40);
  const AngleGrid grid = AngleGrid::FromCount(501);
  RandomSource rng(491);
  const AuditReport report = EstimateEpsilonLowerBound(
      [&](bool use_s_prime, RandomSource& trial_rng) {
        const auto& data = use_s_prime ? s_prime : s;
        const double phi =
            ASimpleH(data, grid, 60, 1.0, 0.0, 0.1, 0.05, trial_rng);
        return phi > 0.0 && phi < kPi;
      },
      200, 1.0, 0.0, rng);
  CHECK(report.p_s == 1.0);
  CHECK(report.p_s_prime == 0.0);
  CHECK(report.unbounded_at_resolution);
  CHECK(report.verdict == "DP violated");
  CHECK(report.epsilon_hat > 1.0);
}

TEST_CASE("audit rejects tiny trial counts and origin points") {
  RandomSource rng(499);
  CHECK_THROWS_AS(EstimateEpsilonLowerBound(
                      [](bool, RandomSource&) { return true; }, 50, 1.0, 0.0,
                      rng),
                  ParameterError);
  const AngleGrid grid = AngleGrid::FromCount(11);
  const std::vector<LabeledPlanePoint> bad = {{0, 0, 1}};
  CHECK_THROWS_AS(MakeData(1.0, grid, bad, rng), ParameterError);
}

}  // namespace
}  // namespace dpqc
