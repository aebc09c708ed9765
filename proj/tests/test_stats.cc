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

#include "dpqc/stats.h"

#include "doctest.h"
#include "dpqc/error.h"

namespace dpqc {
namespace {

// Expected values frozen from an external statistics package.
TEST_CASE("regularized incomplete beta") {
  CHECK(RegularizedIncompleteBeta(2, 3, 0.4) ==
        doctest::Approx(0.5248).epsilon(1e-10));
  CHECK(RegularizedIncompleteBeta(0.5, 0.5, 0.3) ==
        doctest::Approx(0.36901011956554536).epsilon(1e-10));
  CHECK(RegularizedIncompleteBeta(10, 2, 0.9) ==
        doctest::Approx(0.6973568802).epsilon(1e-9));
  CHECK(RegularizedIncompleteBeta(5, 5, 0.5) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(RegularizedIncompleteBeta(1, 7, 0.12) ==
        doctest::Approx(0.59132440363008).epsilon(1e-10));
  CHECK(RegularizedIncompleteBeta(2, 3, 0.0) == 0.0);
  CHECK(RegularizedIncompleteBeta(2, 3, 1.0) == 1.0);
}

TEST_CASE("beta quantile inverts the cdf") {
  for (double p : {0.01, 0.3, 0.5, 0.77, 0.999}) {
    const double x = BetaQuantile(3.5, 2.25, p);
    CHECK(RegularizedIncompleteBeta(3.5, 2.25, x) ==
          doctest::Approx(p).epsilon(1e-9));
  }
}

TEST_CASE("clopper-pearson intervals") {
  const BinomialCi a = ClopperPearson(0, 1000);
  CHECK(a.lo == 0.0);
  CHECK(a.hi == doctest::Approx(0.003682083896865671).epsilon(1e-7));
  const BinomialCi b = ClopperPearson(1000, 1000);
  CHECK(b.lo == doctest::Approx(0.9963179161031344).epsilon(1e-7));
  CHECK(b.hi == 1.0);
  const BinomialCi c = ClopperPearson(500, 1000);
  CHECK(c.lo == doctest::Approx(0.46854917297179216).epsilon(1e-7));
  CHECK(c.hi == doctest::Approx(0.5314508270282079).epsilon(1e-7));
  const BinomialCi d = ClopperPearson(3, 100);
  CHECK(d.lo == doctest::Approx(0.006229971538306395).epsilon(1e-6));
  CHECK(d.hi == doctest::Approx(0.08517605297428002).epsilon(1e-6));
  const BinomialCi e = ClopperPearson(97531, 100000);
  CHECK(e.lo == doctest::Approx(0.9743293124769314).epsilon(1e-8));
  CHECK(e.hi == doctest::Approx(0.9762629847769395).epsilon(1e-8));
  CHECK_THROWS_AS(ClopperPearson(-1, 10), ParameterError);
  CHECK_THROWS_AS(ClopperPearson(5, 10, 1.5), ParameterError);
}

}  // namespace
}  // namespace dpqc
