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

#include <set>
#include <vector>

#include "doctest.h"
#include "dpqc/dp_core.h"
#include "dpqc/error.h"
#include "dpqc/grid.h"
#include "dpqc/rational.h"

namespace dpqc {
namespace {

TEST_CASE("rational arithmetic is exact and canonical") {
  const Rational a(6, 8);
  CHECK(a.num() == 3);
  CHECK(a.den() == 4);
  CHECK(a.ToString() == "3/4");
  const Rational b(-2, 6);
  CHECK(b.ToString() == "-1/3");
  CHECK((a + b).ToString() == "5/12");
  CHECK((a * b) == Rational(-1, 4));
  CHECK((a / b) == Rational(-9, 4));
  CHECK(Rational::FromString(" -9/4 ") == a / b);
  CHECK(Rational::FromString("7") == Rational(7));
  CHECK_THROWS_AS(Rational(1, 0), ParameterError);
  CHECK_THROWS_AS(Rational::FromString("x/y"), ParameterError);
  CHECK(Rational(1, 2) < Rational(2, 3));
  CHECK(Rational(-5, 3) < Rational(-3, 2));
}

// Cross-check reduced arithmetic against a non-reducing implementation.
TEST_CASE("rational ops agree with unreduced bignum arithmetic") {
  RandomSource rng(31);
  for (int i = 0; i < 500; ++i) {
    const int64_t an = static_cast<int64_t>(rng.NextBelow(4001)) - 2000;
    const int64_t ad = 1 + static_cast<int64_t>(rng.NextBelow(50));
    const int64_t bn = static_cast<int64_t>(rng.NextBelow(4001)) - 2000;
    const int64_t bd = 1 + static_cast<int64_t>(rng.NextBelow(50));
    const Rational a(an, ad), b(bn, bd);
    // Unreduced sum: (an*bd + bn*ad) / (ad*bd); compare cross-multiplied.
    const mpz_class sum_num = mpz_class(an) * bd + mpz_class(bn) * ad;
    const mpz_class sum_den = mpz_class(ad) * bd;
    const Rational s = a + b;
    CHECK(s.num() * sum_den == sum_num * s.den());
    const mpz_class prod_num = mpz_class(an) * bn;
    const mpz_class prod_den = mpz_class(ad) * bd;
    const Rational p = a * b;
    CHECK(p.num() * prod_den == prod_num * p.den());
  }
}

TEST_CASE("grid enumeration: tiny cases") {
  // {s/t : |s| <= 1, t = 1} = {-1, 0, 1}.
  RationalGrid g1(1, 1);
  std::vector<Rational> v1;
  g1.Enumerate([&](const Rational& r) { v1.push_back(r); return true; });
  REQUIRE(v1.size() == 3);
  CHECK(v1[0] == Rational(-1));
  CHECK(v1[1] == Rational(0));
  CHECK(v1[2] == Rational(1));

  // {s/t : |s| <= 2, t <= 2}: integers -2..2 and odd halves +-1/2.
  RationalGrid g2(2, 2);
  std::vector<Rational> v2;
  g2.Enumerate([&](const Rational& r) { v2.push_back(r); return true; });
  const std::vector<Rational> expect = {
      Rational(-2), Rational(-1), Rational(-1, 2), Rational(0),
      Rational(1, 2), Rational(1), Rational(2)};
  REQUIRE(v2.size() == expect.size());
  for (size_t i = 0; i < expect.size(); ++i) CHECK(v2[i] == expect[i]);
  CHECK(g2.DistinctSize() == 7);
}

TEST_CASE("grid enumeration matches set-based brute force") {
  for (int64_t s_max : {3, 10}) {
    for (int64_t t_max : {1, 4, 10}) {
      RationalGrid g(s_max, t_max);
      std::set<Rational> brute;
      for (int64_t s = -s_max; s <= s_max; ++s) {
        for (int64_t t = 1; t <= t_max; ++t) brute.insert(Rational(s, t));
      }
      std::vector<Rational> out;
      g.Enumerate([&](const Rational& r) { out.push_back(r); return true; });
      REQUIRE(out.size() == brute.size());
      CHECK(g.DistinctSize() == static_cast<int64_t>(brute.size()));
      size_t i = 0;
      for (const Rational& r : brute) CHECK(out[i++] == r);
    }
  }
}

TEST_CASE("grid enumeration is strictly increasing and duplicate free") {
  for (int64_t s_max = 1; s_max <= 50; s_max += 7) {
    for (int64_t t_max = 1; t_max <= 50; t_max += 7) {
      RationalGrid g(s_max, t_max);
      Rational prev;
      bool first = true;
      int64_t count = 0;
      g.Enumerate([&](const Rational& r) {
        if (!first) CHECK(prev < r);
        prev = r;
        first = false;
        ++count;
        return true;
      });
      CHECK(g.DistinctSize() == count);
    }
  }
}

TEST_CASE("grid membership and range queries") {
  RationalGrid g(16, 8);
  CHECK(g.Contains(Rational(3, 8)));
  CHECK(g.Contains(Rational(16, 1)));
  CHECK(!g.Contains(Rational(1, 9)));
  CHECK(!g.Contains(Rational(17, 8)));  // 17 > s_max
  auto r = g.SmallestInRange(Rational(1, 3), Rational(1, 2));
  REQUIRE(r.has_value());
  CHECK(*r == Rational(1, 3));
  auto r2 = g.SmallestInRange(Rational(1, 3), Rational(1, 2), true, true);
  REQUIRE(r2.has_value());
  CHECK(*r2 == Rational(3, 8));
  auto r3 = g.SmallestInRange(Rational(1, 2), Rational(1, 2));
  REQUIRE(r3.has_value());
  CHECK(*r3 == Rational(1, 2));
  auto r4 = g.SmallestInRange(Rational(1, 2), Rational(1, 2), true, false);
  CHECK(!r4.has_value());
  auto r5 = g.SmallestInRange(Rational(33, 2), Rational(40));
  CHECK(!r5.has_value());  // numerator bound excludes (16, 20] values
}

TEST_CASE("lf domain bounds") {
  // i=1, d=2, X=2: numerators (2*2!)*2^2 = 16, denominators 2!*2^2 = 8.
  RationalGrid g1 = LfDomain(1, 2, 2, 1);
  CHECK(g1.s_max() == 16);
  CHECK(g1.t_max() == 8);
  // i=2, d=2, X=2, prev denominator 3: 4^2*2^4 = 256 and 2*3*4 = 24.
  RationalGrid g2 = LfDomain(2, 2, 2, 3);
  CHECK(g2.s_max() == 256);
  CHECK(g2.t_max() == 24);
  // i=1, d=1, X=1: {-1, 0, 1}.
  RationalGrid g3 = LfDomain(1, 1, 1, 1);
  CHECK(g3.s_max() == 1);
  CHECK(g3.t_max() == 1);
  CHECK(g3.DistinctSize() == 3);
  CHECK_THROWS_AS(LfDomain(3, 2, 2, 1), ParameterError);
}

TEST_CASE("tukey domain") {
  // d=1 contains every input value.
  RationalGrid g1 = TukeyDomain(1, 1, 8, 1);
  CHECK(g1.t_max() == 1);
  for (int64_t v = -8; v <= 8; ++v) CHECK(g1.Contains(Rational(v)));

  // d=2 default construction is data independent at i=1 and contains all
  // pairwise line intersections (checked structurally via the bounds).
  RationalGrid g2 = TukeyDomain(1, 2, 4, 1);
  const mpz_class coeff_bound = 2 * 8 * 4;  // d! (2X)^(d-1) X
  CHECK(g2.s_max() == 4 * coeff_bound * coeff_bound);
  CHECK(g2.t_max() == 2 * coeff_bound * coeff_bound);

  // Overrides replace the provable bounds.
  GridConfig config;
  config[1] = GridOverride{mpz_class(18), mpz_class(4)};
  RationalGrid g3 = TukeyDomain(1, 2, 4, 1, config);
  CHECK(g3.s_max() == 18);
  CHECK(g3.t_max() == 4);
}

TEST_CASE("grid materialize cap") {
  RationalGrid g(1000000, 1000);
  CHECK_THROWS_AS(g.Materialize(1000), ParameterError);
}

}  // namespace
}  // namespace dpqc

namespace dpqc {
namespace {

TEST_CASE("simplest rational in interval") {
  // Frozen example: the simplest fraction in [41/200, 21/100] is 5/24.
  auto r = SimplestRationalInInterval(Rational(41, 200), Rational(21, 100));
  REQUIRE(r.has_value());
  CHECK(*r == Rational(5, 24));
  CHECK(*SimplestRationalInInterval(Rational(-1, 2), Rational(1, 3)) ==
        Rational(0));
  CHECK(*SimplestRationalInInterval(Rational(3, 2), Rational(8, 3)) ==
        Rational(2));
  CHECK(*SimplestRationalInInterval(Rational(2), Rational(2)) == Rational(2));
  CHECK(!SimplestRationalInInterval(Rational(2), Rational(2), true, false)
           .has_value());
  auto neg = SimplestRationalInInterval(Rational(-21, 100), Rational(-41, 200));
  REQUIRE(neg.has_value());
  CHECK(*neg == Rational(-5, 24));
  // Openness: the simplest in (1, 2) is 3/2.
  CHECK(*SimplestRationalInInterval(Rational(1), Rational(2), true, true) ==
        Rational(3, 2));

  // Against brute force: the returned fraction has the minimum denominator.
  RandomSource rng(541);
  for (int trial = 0; trial < 300; ++trial) {
    const int64_t an = static_cast<int64_t>(rng.NextBelow(801)) - 400;
    const int64_t ad = 1 + static_cast<int64_t>(rng.NextBelow(60));
    const int64_t width_n = 1 + static_cast<int64_t>(rng.NextBelow(50));
    const Rational lo(an, ad);
    const Rational hi = lo + Rational(width_n, 97);
    const bool open_lo = rng.NextBelow(2) == 0;
    const bool open_hi = rng.NextBelow(2) == 0;
    const auto simplest =
        SimplestRationalInInterval(lo, hi, open_lo, open_hi);
    REQUIRE(simplest.has_value());
    CHECK((open_lo ? lo < *simplest : lo <= *simplest));
    CHECK((open_hi ? *simplest < hi : *simplest <= hi));
    // No fraction with a smaller denominator fits in the interval.
    bool found_smaller = false;
    for (mpz_class q = 1; q < simplest->den(); ++q) {
      mpz_class s;
      mpz_class num = lo.num() * q;
      mpz_cdiv_q(s.get_mpz_t(), num.get_mpz_t(), lo.den().get_mpz_t());
      for (int off = 0; off <= 1; ++off) {
        const Rational cand(s + off, q);
        if ((open_lo ? lo < cand : lo <= cand) &&
            (open_hi ? cand < hi : cand <= hi)) {
          found_smaller = true;
        }
      }
    }
    CHECK(!found_smaller);
  }
}

TEST_CASE("has-value-in agrees with enumeration") {
  RandomSource rng(547);
  RationalGrid g(12, 5);
  std::vector<Rational> values = g.Materialize();
  for (int trial = 0; trial < 400; ++trial) {
    const Rational lo(static_cast<int64_t>(rng.NextBelow(401)) - 200, 13);
    const Rational hi = lo + Rational(static_cast<int64_t>(rng.NextBelow(80)), 29);
    const bool open_lo = rng.NextBelow(2) == 0;
    const bool open_hi = rng.NextBelow(2) == 0;
    bool expect = false;
    for (const Rational& v : values) {
      if ((open_lo ? lo < v : lo <= v) && (open_hi ? v < hi : v <= hi)) {
        expect = true;
        break;
      }
    }
    CHECK(g.HasValueIn(lo, hi, open_lo, open_hi) == expect);
  }
}

}  // namespace
}  // namespace dpqc
