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

#include "dpqc/approximation.h"

#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "dpqc/error.h"
#include "dpqc/linfeas.h"

namespace dpqc {
namespace {

std::vector<int64_t> AllIdx(int64_t n) {
  std::vector<int64_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  return idx;
}

TEST_CASE("subset size bound") {
  ApproxSpec spec;
  spec.alpha = 0.1;
  spec.beta = 0.05;
  spec.vc_dimension = 2;
  spec.c_vc = 8.0;
  CHECK(MSubsetSize(spec) == 7190);

  // Halving alpha roughly quadruples the size.
  ApproxSpec half = spec;
  half.alpha = 0.05;
  const double ratio = static_cast<double>(MSubsetSize(half)) / 7190.0;
  CHECK(ratio > 3.5);
  CHECK(ratio < 5.0);

  // Monotonicity: smaller alpha or beta, or larger d, never shrink m.
  ApproxSpec larger_d = spec;
  larger_d.vc_dimension = 3;
  CHECK(MSubsetSize(larger_d) >= MSubsetSize(spec));
  ApproxSpec smaller_beta = spec;
  smaller_beta.beta = 0.01;
  CHECK(MSubsetSize(smaller_beta) >= MSubsetSize(spec));
}

TEST_CASE("pac sample size") {
  // 48/alpha (10 vc ln(48e/alpha) + ln(5/beta)) at vc=2, alpha=0.2, beta=0.1.
  const int64_t m = PacSampleSize(2, 0.2, 0.1);
  CHECK(m >= 31000);
  CHECK(m <= 33500);
  CHECK_THROWS_AS(PacSampleSize(0, 0.2, 0.1), ParameterError);
}

TEST_CASE("alpha approximation: identity subset has zero gap") {
  RandomSource rng(419);
  std::vector<std::vector<int64_t>> rows;
  for (int i = 0; i < 40; ++i) {
    rows.push_back({static_cast<int64_t>(rng.NextBelow(5)) - 2,
                    static_cast<int64_t>(rng.NextBelow(5)) - 2});
  }
  const PointSet s(2, 2, rows);
  TukeyTarget target(s);
  const auto probes = TukeyGapProbes(s);
  const GapCheckResult r =
      CheckAlphaApprox(target, AllIdx(s.size()), probes, 0.01);
  CHECK(r.pass);
  CHECK(r.worst_gap == 0.0);
}

TEST_CASE("alpha approximation: adversarial one-sided subset fails") {
  // All subset points from one halfplane: the halfplane count gap is large.
  std::vector<std::vector<int64_t>> rows;
  for (int i = 0; i < 20; ++i) rows.push_back({2, i % 3 - 1});
  for (int i = 0; i < 20; ++i) rows.push_back({-2, i % 3 - 1});
  const PointSet s(2, 2, rows);
  TukeyTarget target(s);
  std::vector<int64_t> one_sided;
  for (int64_t i = 0; i < 20; ++i) one_sided.push_back(i);
  const auto probes = TukeyGapProbes(s);
  const GapCheckResult r = CheckAlphaApprox(target, one_sided, probes, 0.1);
  CHECK(!r.pass);
  CHECK(r.worst_gap > 0.1);
}

TEST_CASE("random subsets at the VC size rarely fail (1-D)") {
  RandomSource rng(421);
  std::vector<std::vector<int64_t>> rows;
  const int64_t n = 4000;
  for (int64_t i = 0; i < n; ++i) {
    rows.push_back({static_cast<int64_t>(rng.NextBelow(201)) - 100});
  }
  const PointSet s(1, 100, rows);
  TukeyTarget target(s);
  const auto probes = TukeyGapProbes1D(s);
  std::vector<double> full_values;
  for (const auto& p : probes) full_values.push_back(target.Eval(AllIdx(n), p));

  ApproxSpec spec;
  spec.alpha = 0.1;
  spec.beta = 0.05;
  spec.vc_dimension = 1;
  const int64_t m = std::min<int64_t>(MSubsetSize(spec), n);
  int fails = 0;
  const int trials = 40;
  for (int trial = 0; trial < trials; ++trial) {
    std::vector<int64_t> idx = AllIdx(n);
    for (int64_t i = 0; i < m; ++i) {
      const int64_t j =
          i + static_cast<int64_t>(rng.NextBelow(static_cast<uint64_t>(n - i)));
      std::swap(idx[i], idx[j]);
    }
    std::vector<int64_t> subset(idx.begin(), idx.begin() + m);
    std::sort(subset.begin(), subset.end());
    if (!CheckAlphaApprox(target, subset, probes, spec.alpha, &full_values)
             .pass) {
      ++fails;
    }
  }
  CHECK(fails <= 2);
}

TEST_CASE("sensitivity gap: identical datasets give zero") {
  RandomSource rng(431);
  std::vector<std::vector<int64_t>> rows;
  for (int i = 0; i < 30; ++i) {
    rows.push_back({static_cast<int64_t>(rng.NextBelow(5)) - 2,
                    static_cast<int64_t>(rng.NextBelow(5)) - 2});
  }
  const PointSet s(2, 2, rows);
  TukeyTarget a(s), b(s);
  CHECK(SensitivityGap(a, b, TukeyGapProbes(s)) == 0.0);
}

TEST_CASE("neighboring datasets move the normalized depth by at most 2/n") {
  // Direct sensitivity of normalized Tukey depth is 1/n per replacement;
  // the approximation-theoretic bound 2 alpha is far looser. Check the
  // tight version on random neighbor pairs.
  RandomSource rng(433);
  for (int trial = 0; trial < 6; ++trial) {
    const int64_t n = 30;
    std::vector<std::vector<int64_t>> rows;
    for (int64_t i = 0; i < n; ++i) {
      rows.push_back({static_cast<int64_t>(rng.NextBelow(5)) - 2,
                      static_cast<int64_t>(rng.NextBelow(5)) - 2});
    }
    auto changed_rows = rows;
    changed_rows[rng.NextBelow(n)] = {2, -2};
    const PointSet s1(2, 2, rows), s2(2, 2, changed_rows);
    TukeyTarget q1(s1), q2(s2);
    // Union probe set captures both functions' cell structures.
    std::vector<std::vector<int64_t>> union_rows = rows;
    union_rows.push_back({2, -2});
    const PointSet union_set(2, 2, union_rows);
    const double gap = SensitivityGap(q1, q2, TukeyGapProbes(union_set));
    CHECK(gap <= 1.0 / n + 1e-12);
  }
}

TEST_CASE("dichotomy counts") {
  // Two axis halfplanes shatter: 4 membership vectors.
  CHECK(CountRealizedDichotomies({{1, 0, 0}, {0, 1, 0}}) == 4);
  // One halfplane: 2.
  CHECK(CountRealizedDichotomies({{1, 0, 0}}) == 2);
  // Three generic halfplanes realize at most 7 < 8 vectors.
  CHECK(CountRealizedDichotomies({{1, 0, 0}, {0, 1, 0}, {1, 1, 3}}) == 7);
  // Degeneracies are rejected with a hint.
  CHECK_THROWS_AS(CountRealizedDichotomies({{1, 0, 0}, {1, 0, 2}}),
                  DegeneracyError);
  CHECK_THROWS_AS(
      CountRealizedDichotomies({{1, 0, 0}, {0, 1, 0}, {1, 1, 0}}),
      DegeneracyError);
}

TEST_CASE("three random halfplanes never shatter") {
  RandomSource rng(439);
  int done = 0;
  while (done < 60) {
    std::vector<Halfplane> hs;
    for (int i = 0; i < 3; ++i) {
      Halfplane h{static_cast<int64_t>(rng.NextBelow(9)) - 4,
                  static_cast<int64_t>(rng.NextBelow(9)) - 4,
                  static_cast<int64_t>(rng.NextBelow(9)) - 4};
      if (h.a1 == 0 && h.a2 == 0) h.a1 = 1;
      hs.push_back(h);
    }
    try {
      const int64_t count = CountRealizedDichotomies(hs);
      CHECK(count <= 7);
      ++done;
    } catch (const DegeneracyError&) {
      // Degenerate draw; try another instance.
    }
  }
}

}  // namespace
}  // namespace dpqc
