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

#include "dpqc/optimizer.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "dpqc/error.h"
#include "dpqc/interior_point.h"

namespace dpqc {
namespace {

// Minimal 1-D target: the interior-point score over a bound value multiset,
// normalized by the subset size.
class IpTarget : public TargetFunction {
 public:
  IpTarget(std::vector<int64_t> values, int64_t lo, int64_t hi)
      : values_(std::move(values)), lo_(lo), hi_(hi) {}
  int dimension() const override { return 1; }
  int64_t dataset_size() const override {
    return static_cast<int64_t>(values_.size());
  }
  double Eval(std::span<const int64_t> subset,
              const RationalPoint& point) const override {
    std::vector<int64_t> vals;
    vals.reserve(subset.size());
    for (int64_t i : subset) vals.push_back(values_[i]);
    std::sort(vals.begin(), vals.end());
    int64_t le = 0, ge = 0;
    for (int64_t v : vals) {
      if (Rational(v) <= point[0]) ++le;
      if (Rational(v) >= point[0]) ++ge;
    }
    return static_cast<double>(std::min(le, ge)) / subset.size();
  }
  double SliceEval(std::span<const int64_t> subset, const RationalPoint& prefix,
                   const Rational& x) const override {
    RationalPoint p = prefix;
    p.push_back(x);
    return Eval(subset, p);
  }
  std::shared_ptr<const OrderedDomain> Domain(
      int, const RationalPoint&) const override {
    return std::make_shared<IntRangeDomain>(lo_, hi_);
  }

 private:
  std::vector<int64_t> values_;
  int64_t lo_, hi_;
};

TEST_CASE("partition sizes") {
  RandomSource rng(211);
  const Partition p = MakePartition(10, 3, rng);
  REQUIRE(p.blocks.size() == 3);
  CHECK(p.blocks[0].size() == 4);
  CHECK(p.blocks[1].size() == 3);
  CHECK(p.blocks[2].size() == 3);
  // Blocks disjoint and covering.
  std::vector<int64_t> seen;
  for (const auto& b : p.blocks) seen.insert(seen.end(), b.begin(), b.end());
  std::sort(seen.begin(), seen.end());
  for (int64_t i = 0; i < 10; ++i) CHECK(seen[i] == i);
  for (int64_t i = 0; i < 10; ++i) {
    CHECK(p.block_of[i] >= 0);
    CHECK(p.block_of[i] < 3);
  }

  const Partition q = MakePartition(5, 5, rng);
  for (const auto& b : q.blocks) CHECK(b.size() == 1);

  CHECK_THROWS_AS(MakePartition(2, 3, rng), InsufficientSamplesError);
}

TEST_CASE("partition block membership is uniform") {
  RandomSource rng(223);
  const int64_t n = 9, t = 3, shuffles = 10000;
  // With equal block sizes every element lands in each block 1/3rd of the
  // time; check each cell within 4 sigma.
  std::vector<std::vector<int64_t>> counts(n, std::vector<int64_t>(t, 0));
  for (int64_t s = 0; s < shuffles; ++s) {
    const Partition p = MakePartition(n, t, rng);
    for (int64_t i = 0; i < n; ++i) ++counts[i][p.block_of[i]];
  }
  const double expect = shuffles / 3.0;
  const double sigma = std::sqrt(shuffles * (1.0 / 3) * (2.0 / 3));
  for (int64_t i = 0; i < n; ++i) {
    for (int64_t b = 0; b < t; ++b) {
      CHECK(std::abs(counts[i][b] - expect) < 4 * sigma);
    }
  }
}

TEST_CASE("argmax over domain") {
  IntRangeDomain domain(-6, 6);
  // Constant value: smallest element wins.
  CHECK(ArgmaxOverDomain([](const Rational&) { return 1.0; }, domain) ==
        Rational(-6));
  // Unique maximizer of the interior score over {1, 3, 5}.
  std::vector<Rational> vals = {Rational(1), Rational(3), Rational(5)};
  CHECK(ArgmaxOverDomain(
            [&](const Rational& x) {
              return static_cast<double>(QIpScore(vals, x));
            },
            domain) == Rational(3));
}

TEST_CASE("argmax matches a randomized hill-climb oracle") {
  RandomSource rng(227);
  for (int trial = 0; trial < 100; ++trial) {
    // Random quasi-concave sequence over a small domain: rise then fall.
    const int64_t size = 5 + static_cast<int64_t>(rng.NextBelow(40));
    const int64_t peak = static_cast<int64_t>(rng.NextBelow(size));
    // Strictly increasing then strictly decreasing, so plain hill climbing
    // is a sound maximization oracle.
    std::vector<double> f(size);
    double v = 0;
    for (int64_t i = 0; i <= peak; ++i) {
      v += 1.0 + static_cast<double>(rng.NextBelow(3));
      f[i] = v;
    }
    for (int64_t i = peak + 1; i < size; ++i) {
      v -= 1.0 + static_cast<double>(rng.NextBelow(3));
      f[i] = v;
    }
    IntRangeDomain domain(0, size - 1);
    const Rational got = ArgmaxOverDomain(
        [&](const Rational& x) {
          return f[static_cast<size_t>(x.NumI64())];
        },
        domain);
    // Hill climbing with random restarts; the domain is small enough for
    // restarts to always find the global maximum.
    double best = -1;
    int64_t best_arg = 0;
    for (int restart = 0; restart < 20; ++restart) {
      int64_t pos = static_cast<int64_t>(rng.NextBelow(size));
      for (;;) {
        const double here = f[pos];
        const double left = pos > 0 ? f[pos - 1] : -1e18;
        const double right = pos + 1 < size ? f[pos + 1] : -1e18;
        if (left > here) {
          --pos;
        } else if (right > here) {
          ++pos;
        } else {
          break;
        }
      }
      if (f[pos] > best) {
        best = f[pos];
        best_arg = pos;
      }
    }
    // The returned element attains the oracle's maximum (ties break small).
    CHECK(f[static_cast<size_t>(got.NumI64())] == best);
    CHECK(got.NumI64() <= best_arg);
  }
}

TEST_CASE("ip_concave returns the common value on constant data") {
  IpSolverSpec probe_spec;
  const int64_t need = NIp(2 * 32 + 1, 0.05, 1e6, 0.0);
  std::vector<int64_t> values(static_cast<size_t>(need), 7);
  IpTarget target(values, -32, 32);
  OptimizerConfig config;
  config.beta = 0.05;
  config.privacy = PrivacyParams(1e6, 0.0);
  config.t = need;
  RandomSource rng(229);
  const Rational out = IpConcave(target, *target.Domain(1, {}), config, rng);
  CHECK(out == Rational(7));
  (void)probe_spec;
}

TEST_CASE("d=1 high-dim run is bitwise identical to ip_concave") {
  std::vector<int64_t> values;
  RandomSource data_rng(233);
  for (int i = 0; i < 80; ++i) {
    values.push_back(static_cast<int64_t>(data_rng.NextBelow(41)) - 20);
  }
  IpTarget target(values, -20, 20);
  OptimizerConfig config;
  config.beta = 0.1;
  config.privacy = PrivacyParams(2.0, 0.0);
  config.t = 60;
  RandomSource rng1(239), rng2(239);
  const Rational direct = IpConcave(target, *target.Domain(1, {}), config, rng1);
  const RationalPoint highdim = IpConcaveHighDim(target, config, rng2);
  REQUIRE(highdim.size() == 1);
  CHECK(direct == highdim[0]);
  CHECK(rng1.counter() == rng2.counter());
}

TEST_CASE("changing one element moves at most one block argmax") {
  // Fixed partition by index; exhaustive over replacements on n=12, t=4.
  std::vector<int64_t> base = {3, -5, 8, 0, 1, -2, 7, 4, -6, 2, 5, -1};
  Partition partition;
  partition.t = 4;
  partition.block_of.resize(12);
  partition.blocks.resize(4);
  for (int64_t i = 0; i < 12; ++i) {
    partition.blocks[i / 3].push_back(i);
    partition.block_of[i] = i / 3;
  }
  OptimizerConfig config;
  config.beta = 0.1;
  config.privacy = PrivacyParams(1.0, 0.0);
  config.t = 4;
  config.fixed_partition = partition;

  auto block_argmaxes = [&](const std::vector<int64_t>& values) {
    IpTarget target(values, -10, 10);
    std::vector<Rational> out;
    for (const auto& block : partition.blocks) {
      out.push_back(ArgmaxOverDomain(
          [&](const Rational& x) { return target.SliceEval(block, {}, x); },
          *target.Domain(1, {})));
    }
    return out;
  };
  const auto baseline = block_argmaxes(base);
  for (int64_t replace = 0; replace < 12; ++replace) {
    for (int64_t alt : {-9, 0, 9}) {
      std::vector<int64_t> changed = base;
      changed[replace] = alt;
      const auto moved = block_argmaxes(changed);
      int diffs = 0;
      for (size_t b = 0; b < 4; ++b) {
        if (!(moved[b] == baseline[b])) ++diffs;
      }
      CHECK(diffs <= 1);
    }
  }
}

TEST_CASE("conditional interiority on the success event") {
  // Whenever the released point is interior to the block argmaxes, its value
  // under a quasi-concave objective is at least the weakest block's value.
  RandomSource rng(241);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<int64_t> values;
    for (int i = 0; i < 60; ++i) {
      values.push_back(static_cast<int64_t>(rng.NextBelow(21)) - 10);
    }
    IpTarget target(values, -10, 10);
    OptimizerConfig config;
    config.beta = 0.1;
    config.privacy = PrivacyParams(3.0, 0.0);
    config.t = 30;
    OptimizerTrace trace;
    const Rational out =
        IpConcave(target, *target.Domain(1, {}), config, rng, nullptr, &trace);
    const auto& y = trace.coordinates[0].block_argmaxes;
    const Rational lo = *std::min_element(y.begin(), y.end());
    const Rational hi = *std::max_element(y.begin(), y.end());
    if (lo <= out && out <= hi) {
      std::vector<int64_t> all(values.size());
      std::iota(all.begin(), all.end(), 0);
      double min_block_value = 1e18;
      for (const Rational& yi : y) {
        min_block_value = std::min(min_block_value, target.Eval(all, {yi}));
      }
      CHECK(target.Eval(all, {out}) >= min_block_value - 1e-12);
    }
  }
}

TEST_CASE("fixed seed gives identical optimizer output") {
  std::vector<int64_t> values;
  RandomSource data_rng(251);
  for (int i = 0; i < 100; ++i) {
    values.push_back(static_cast<int64_t>(data_rng.NextBelow(65)) - 32);
  }
  IpTarget target(values, -32, 32);
  OptimizerConfig config;
  config.beta = 0.05;
  config.privacy = PrivacyParams(1.0, 0.0);
  config.t = 70;
  RandomSource a(257), b(257);
  CHECK(IpConcave(target, *target.Domain(1, {}), config, a) ==
        IpConcave(target, *target.Domain(1, {}), config, b));
}

TEST_CASE("plateau objectives accept any plateau point") {
  // Half the values at each end: the interior score is a flat plateau of
  // 1/2 across [-4, 4], and any returned point attains it.
  std::vector<int64_t> values;
  for (int i = 0; i < 20; ++i) values.push_back(-4);
  for (int i = 0; i < 20; ++i) values.push_back(4);
  IpTarget target(values, -4, 4);
  OptimizerConfig config;
  config.beta = 0.05;
  config.privacy = PrivacyParams(1e6, 0.0);
  config.t = 40;
  RandomSource rng(263);
  std::vector<int64_t> all(values.size());
  std::iota(all.begin(), all.end(), 0);
  const Rational out = IpConcave(target, *target.Domain(1, {}), config, rng);
  CHECK(target.Eval(all, {out}) == doctest::Approx(0.5));
}

}  // namespace
}  // namespace dpqc
