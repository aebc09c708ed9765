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
// Private selection of an interior point: a value p with
// min(values) <= p <= max(values), released under differential privacy.
//
// The solver interface admits sublinear-sample algorithms; the baseline
// shipped here is an exponential mechanism over the domain with the
// min(#below, #above) score, whose sample requirement grows with
// log(domain size) rather than the iterated logarithm an optimal solver
// achieves. NIp reports the baseline's own requirement, and callers must
// treat it as baseline-specific.

#ifndef DPQC_INTERIOR_POINT_H_
#define DPQC_INTERIOR_POINT_H_

#include <vector>

#include "dpqc/dp_core.h"
#include "dpqc/ordered_domain.h"

namespace dpqc {

enum class IpSolverKind {
  kExpMechBaseline,
};

// Solver selection plus its privacy budget and failure probability.
struct IpSolverSpec {
  IpSolverKind kind = IpSolverKind::kExpMechBaseline;
  PrivacyParams privacy;
  double beta = 0.05;  // failure probability, in (0, 1)
};

// min(|{i : values_i <= x}|, |{i : values_i >= x}|) for an ascending-sorted
// multiset. Sensitivity 1 under single-element replacement.
int64_t QIpScore(const std::vector<Rational>& sorted_values, const Rational& x);

// Integer fast path of QIpScore.
int64_t QIpScoreI64(const std::vector<int64_t>& sorted_values, int64_t x);

// Samples needed by the exponential-mechanism baseline so that the released
// point has score >= 1 (hence is interior) with probability >= 1 - beta:
// ceil((4/epsilon) * ln(domain_size / beta)) + 2. The utility bound gives
// score >= floor(t/2) - (2/epsilon) ln(domain_size/beta) with probability
// 1 - beta, and this t makes the right side exceed zero. delta is accepted
// for interface compatibility and unused (the baseline is pure DP).
int64_t NIp(int64_t domain_size, double beta, double epsilon, double delta);

// Releases a domain element via the exponential mechanism with the interior
// score. Preconditions: every value lies in the domain, and
// |values| >= NIp(|domain|, beta, epsilon, delta); otherwise throws
// (ParameterError / InsufficientSamplesError). On the success event (score
// of the released element >= 1) the output is an interior point of `values`.
Rational PrivateInteriorPoint(const std::vector<Rational>& values,
                              const OrderedDomain& domain,
                              const IpSolverSpec& spec, RandomSource& rng);

}  // namespace dpqc

#endif  // DPQC_INTERIOR_POINT_H_
