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

#ifndef DPQC_STATS_H_
#define DPQC_STATS_H_

#include <cstdint>

namespace dpqc {

// Regularized incomplete beta function I_x(a, b).
double RegularizedIncompleteBeta(double a, double b, double x);

// Smallest x with I_x(a, b) >= p, by bisection.
double BetaQuantile(double a, double b, double p);

struct BinomialCi {
  double lo = 0;
  double hi = 1;
};

// Exact (Clopper-Pearson) two-sided binomial confidence interval.
BinomialCi ClopperPearson(int64_t hits, int64_t trials, double confidence = 0.95);

}  // namespace dpqc

#endif  // DPQC_STATS_H_
