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

#include "dpqc/linfeas.h"

#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "dpqc/approximation.h"
#include "dpqc/error.h"

namespace dpqc {
namespace {

std::vector<int64_t> All(const ConstraintSet& s) {
  std::vector<int64_t> idx(s.size());
  std::iota(idx.begin(), idx.end(), 0);
  return idx;
}

ConstraintSet RandomConstraints(int64_t x, int64_t n, RandomSource& rng) {
  std::vector<Constraint> cs;
  while (static_cast<int64_t>(cs.size()) < n) {
    Constraint c;
    c.a = {static_cast<int64_t>(rng.NextBelow(2 * x + 1)) - x,
           static_cast<int64_t>(rng.NextBelow(2 * x + 1)) - x};
    if (c.a[0] == 0 && c.a[1] == 0) continue;
    c.w = static_cast<int64_t>(rng.NextBelow(2 * x + 1)) - x;
    cs.push_back(std::move(c));
  }
  return ConstraintSet(2, x, std::move(cs));
}

TEST_CASE("depth counts satisfied constraints") {
  // 1-D: {x >= 0, -x >= 0, x >= 1} at x = 0 satisfies the first two.
  ConstraintSet s(1, 1, {{{1}, 0}, {{-1}, 0}, {{1}, 1}});
  CHECK(Depth(s, {Rational(0)}) == 2);
  CHECK(Depth(s, {Rational(1)}) == 2);
  CHECK(Depth(s, {Rational(1, 2)}) == 1);
  ConstraintSet empty(1, 1, {});
  CHECK(Depth(empty, {Rational(0)}) == 0);
}

TEST_CASE("opposing slabs: the figure example") {
  // y >= 1 and -y >= 1: no point satisfies both, but the hull of the two
  // depth-1 halfplanes is the whole plane, so cdepth at the origin is 1.
  ConstraintSet s(2, 1, {{{0, 1}, 1}, {{0, -1}, 1}});
  CHECK(Depth(s, {Rational(0), Rational(2)}) == 1);
  CHECK(Depth(s, {Rational(0), Rational(0)}) == 0);
  CHECK(Cdepth(s, All(s), {Rational(0), Rational(0)}) == 1);
  CHECK(QLf(s, All(s), {Rational(0), Rational(0)}) == 0.5);
  // Fact: depth >= (d+1) cdepth - d |S| must hold: 0 >= 3*1 - 2*2 = -1.
  CHECK(Depth(s, {Rational(0), Rational(0)}) >=
        3 * Cdepth(s, All(s), {Rational(0), Rational(0)}) - 2 * s.size());
}

TEST_CASE("cdepth dominates depth and satisfies the conversion bound") {
  RandomSource rng(353);
  for (int trial = 0; trial < 12; ++trial) {
    const ConstraintSet s = RandomConstraints(2, 5, rng);
    const CdepthOracle oracle(s, All(s));
    for (const RationalPoint& p : LfGapProbes(s, All(s))) {
      const int64_t depth = oracle.Depth(p);
      const int64_t cdepth = oracle.Cdepth(p);
      CHECK(cdepth >= depth);
      CHECK(depth >= 3 * cdepth - 2 * s.size());
    }
  }
}

TEST_CASE("cdepth oracle equals the definition brute force") {
  RandomSource rng(359);
  for (int trial = 0; trial < 40; ++trial) {
    const int64_t n = 2 + static_cast<int64_t>(rng.NextBelow(5));
    const ConstraintSet s = RandomConstraints(2, n, rng);
    const CdepthOracle oracle(s, All(s));
    for (int probe = 0; probe < 6; ++probe) {
      const RationalPoint p = {
          Rational(static_cast<int64_t>(rng.NextBelow(17)) - 8, 2),
          Rational(static_cast<int64_t>(rng.NextBelow(17)) - 8, 2)};
      CHECK(oracle.Cdepth(p) == CdepthBruteForce(s, All(s), p));
    }
  }
}

TEST_CASE("q_lf on a feasible system at a feasible point") {
  RandomSource rng(367);
  ConstraintSet s(2, 3, [&] {
    std::vector<Constraint> cs;
    for (int i = 0; i < 12; ++i) {
      Constraint c;
      c.a = {static_cast<int64_t>(rng.NextBelow(7)) - 3,
             static_cast<int64_t>(rng.NextBelow(7)) - 3};
      if (c.a[0] == 0 && c.a[1] == 0) c.a[0] = 1;
      c.w = -3;  // every constraint holds at the origin with margin
      cs.push_back(c);
    }
    return cs;
  }());
  CHECK(QLf(s, All(s), {Rational(0), Rational(0)}) == 1.0);
  // Invariance under duplication.
  std::vector<Constraint> doubled = s.constraints();
  doubled.insert(doubled.end(), s.constraints().begin(), s.constraints().end());
  ConstraintSet s2(2, 3, doubled);
  CHECK(QLf(s2, All(s2), {Rational(0), Rational(0)}) == 1.0);
  CHECK_THROWS_AS(QLf(s, std::span<const int64_t>{}, {Rational(0), Rational(0)}),
                  ParameterError);
}

TEST_CASE("cdepth convex combinations keep their level") {
  RandomSource rng(373);
  for (int trial = 0; trial < 10; ++trial) {
    const ConstraintSet s = RandomConstraints(2, 6, rng);
    const CdepthOracle oracle(s, All(s));
    const RationalPoint p1 = {Rational(static_cast<int64_t>(rng.NextBelow(9)) - 4),
                              Rational(static_cast<int64_t>(rng.NextBelow(9)) - 4)};
    const RationalPoint p2 = {Rational(static_cast<int64_t>(rng.NextBelow(9)) - 4),
                              Rational(static_cast<int64_t>(rng.NextBelow(9)) - 4)};
    const int64_t floor_level =
        std::min(oracle.Cdepth(p1), oracle.Cdepth(p2));
    for (const Rational lambda : {Rational(1, 3), Rational(1, 2), Rational(2, 3)}) {
      const RationalPoint mid = {
          p1[0] * lambda + p2[0] * (Rational(1) - lambda),
          p1[1] * lambda + p2[1] * (Rational(1) - lambda)};
      CHECK(oracle.Cdepth(mid) >= floor_level);
    }
  }
}

TEST_CASE("depth sensitivity under single constraint replacement") {
  RandomSource rng(379);
  for (int trial = 0; trial < 10; ++trial) {
    const int64_t n = 4 + static_cast<int64_t>(rng.NextBelow(3));
    ConstraintSet base = RandomConstraints(2, n, rng);
    std::vector<Constraint> changed_rows = base.constraints();
    const size_t replace = rng.NextBelow(changed_rows.size());
    changed_rows[replace].a = {1, 1};
    changed_rows[replace].w = 0;
    const ConstraintSet changed(2, 2, changed_rows);
    for (const RationalPoint& p : LfGapProbes(base, All(base))) {
      CHECK(std::abs(Depth(base, p) - Depth(changed, p)) <= 1);
    }
  }
}

TEST_CASE("reduction from labeled examples") {
  CHECK_THROWS_AS(ReduceExamplesToConstraints({}, 3), ParameterError);
  const std::vector<LabeledExample> ex = {{{3}, 1}, {{3}, -1}, {{-2}, 1}};
  const ConstraintSet s = ReduceExamplesToConstraints(ex, 3);
  CHECK(s.d() == 2);
  CHECK(s.at(0).a == std::vector<int64_t>{3, -1});
  CHECK(s.at(0).w == 0);
  CHECK(s.at(1).a == std::vector<int64_t>{-3, 1});
  CHECK(s.at(1).w == 0);
  CHECK(s.at(2).a == std::vector<int64_t>{-2, -1});

  // A realizable sample yields a feasible system: the separator (w, theta)
  // satisfies every constraint.
  RandomSource rng(383);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<LabeledExample> sample;
    const int64_t theta = static_cast<int64_t>(rng.NextBelow(9)) - 4;
    for (int i = 0; i < 30; ++i) {
      const int64_t x = static_cast<int64_t>(rng.NextBelow(17)) - 8;
      sample.push_back({{x}, x >= theta ? 1 : -1});
    }
    const ConstraintSet reduced = ReduceExamplesToConstraints(sample, 8);
    CHECK(Depth(reduced, {Rational(1), Rational(theta)}) == reduced.size());
  }
}

TEST_CASE("private feasibility on identical satisfied constraints") {
  // All constraints the same halfplane: any output in it satisfies n.
  std::vector<Constraint> cs(260, Constraint{{1, 0}, -2});  // x >= -2
  const ConstraintSet s(2, 2, cs);
  GridConfig grid;
  grid[1] = GridOverride{mpz_class(8), mpz_class(2)};
  grid[2] = GridOverride{mpz_class(8), mpz_class(2)};
  LinFeasOptions options;
  options.grid_config = grid;
  RandomSource rng(389);
  int ok = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const LinFeasResult r = PrivateLinearFeasibility(
        s, 0.2, 0.1, PrivacyParams(4.0, 0.1), rng, options);
    if (r.satisfied == s.size()) ++ok;
  }
  CHECK(ok >= 9);
}

TEST_CASE("solver output stays in the domain product") {
  std::vector<Constraint> cs(260, Constraint{{0, 1}, 0});  // y >= 0
  const ConstraintSet s(2, 1, cs);
  GridConfig grid;
  grid[1] = GridOverride{mpz_class(6), mpz_class(2)};
  grid[2] = GridOverride{mpz_class(6), mpz_class(2)};
  LinFeasOptions options;
  options.grid_config = grid;
  RandomSource rng(397);
  const LinFeasResult r =
      PrivateLinearFeasibility(s, 0.3, 0.1, PrivacyParams(4.0, 0.1), rng,
                               options);
  const RationalGrid g1(6, 2), g2(6, 2);
  CHECK(g1.Contains(r.point[0]));
  CHECK(g2.Contains(r.point[1]));
}

TEST_CASE("halfspace learner separates 1-D thresholds") {
  RandomSource rng(401);
  const int64_t theta = 3;
  std::vector<LabeledExample> train;
  const int64_t m = PacSampleSize(2, 0.4, 0.3);
  for (int64_t i = 0; i < m; ++i) {
    const int64_t x = static_cast<int64_t>(rng.NextBelow(17)) - 8;
    train.push_back({{x}, x >= theta ? 1 : -1});
  }
  GridConfig grid;
  grid[1] = GridOverride{mpz_class(16), mpz_class(4)};
  grid[2] = GridOverride{mpz_class(32), mpz_class(4)};
  LinFeasOptions options;
  options.grid_config = grid;
  const LearnResult r = LearnHalfspace(train, 8, 0.4, 0.3,
                                       PrivacyParams(4.0, 0.1), rng, options);
  // The returned threshold may graze one integer data value (boundary
  // points satisfy their constraint at equality yet classify as +1), so the
  // error bound carries one value's worth of mass beyond alpha/10.
  CHECK(r.training_error <= 0.4 / 10 + 1.0 / 17 + 1e-9);

  // All-same-label data is learned with zero error.
  std::vector<LabeledExample> one_sided;
  for (int64_t i = 0; i < m; ++i) {
    one_sided.push_back({{static_cast<int64_t>(rng.NextBelow(17)) - 8}, 1});
  }
  const LearnResult r2 = LearnHalfspace(one_sided, 8, 0.4, 0.3,
                                        PrivacyParams(4.0, 0.1), rng, options);
  CHECK(r2.training_error == 0.0);
}

TEST_CASE("learner enforces the sample bound") {
  std::vector<LabeledExample> tiny = {{{1}, 1}, {{-1}, -1}};
  RandomSource rng(409);
  CHECK_THROWS_AS(LearnHalfspace(tiny, 2, 0.2, 0.1, PrivacyParams(1.0, 0.01),
                                 rng),
                  InsufficientSamplesError);
}

}  // namespace
}  // namespace dpqc
