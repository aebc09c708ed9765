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

#include "dpqc/interior_point.h"

#include <algorithm>
#include <cmath>

#include "dpqc/error.h"

namespace dpqc {

int64_t QIpScore(const std::vector<Rational>& sorted_values,
                 const Rational& x) {
  const int64_t n = static_cast<int64_t>(sorted_values.size());
  const int64_t le =
      std::upper_bound(sorted_values.begin(), sorted_values.end(), x) -
      sorted_values.begin();
  const int64_t ge =
      n - (std::lower_bound(sorted_values.begin(), sorted_values.end(), x) -
           sorted_values.begin());
  return std::min(le, ge);
}

int64_t QIpScoreI64(const std::vector<int64_t>& sorted_values, int64_t x) {
  const int64_t n = static_cast<int64_t>(sorted_values.size());
  const int64_t le =
      std::upper_bound(sorted_values.begin(), sorted_values.end(), x) -
      sorted_values.begin();
  const int64_t ge =
      n - (std::lower_bound(sorted_values.begin(), sorted_values.end(), x) -
           sorted_values.begin());
  return std::min(le, ge);
}

int64_t NIp(int64_t domain_size, double beta, double epsilon, double delta) {
  (void)delta;
  if (domain_size < 1) throw ParameterError("NIp: domain_size must be >= 1");
  if (!(beta > 0.0 && beta < 1.0)) {
    throw ParameterError("NIp: beta must be in (0, 1)");
  }
  if (!(epsilon > 0.0)) throw ParameterError("NIp: epsilon must be positive");
  const double raw =
      4.0 / epsilon * std::log(static_cast<double>(domain_size) / beta);
  return static_cast<int64_t>(std::ceil(raw)) + 2;
}

Rational PrivateInteriorPoint(const std::vector<Rational>& values,
                              const OrderedDomain& domain,
                              const IpSolverSpec& spec, RandomSource& rng) {
  if (spec.kind != IpSolverKind::kExpMechBaseline) {
    throw ParameterError("PrivateInteriorPoint: unknown solver kind");
  }
  if (!(spec.beta > 0.0 && spec.beta < 1.0)) {
    throw ParameterError("PrivateInteriorPoint: beta must be in (0, 1)");
  }
  if (values.empty()) {
    throw InsufficientSamplesError("PrivateInteriorPoint: empty input");
  }
  const int64_t need = NIp(domain.size(), spec.beta, spec.privacy.epsilon,
                           spec.privacy.delta);
  if (static_cast<int64_t>(values.size()) < need) {
    throw InsufficientSamplesError(
        "PrivateInteriorPoint: got " + std::to_string(values.size()) +
        " values but the exp-mech baseline needs n >= " +
        std::to_string(need) + " for domain size " +
        std::to_string(domain.size()) + ", beta " + std::to_string(spec.beta) +
        ", epsilon " + std::to_string(spec.privacy.epsilon));
  }

  // Integer fast path: avoids rational arithmetic for integer domains.
  if (auto range = domain.AsInt64Range()) {
    std::vector<int64_t> sorted;
    sorted.reserve(values.size());
    for (const Rational& v : values) {
      if (v.den() != 1 || !v.FitsInt64()) {
        throw ParameterError("PrivateInteriorPoint: value outside domain");
      }
      const int64_t x = v.NumI64();
      if (x < range->first || x > range->second) {
        throw ParameterError("PrivateInteriorPoint: value outside domain");
      }
      sorted.push_back(x);
    }
    std::sort(sorted.begin(), sorted.end());
    const int64_t lo = range->first;
    const int64_t picked = ExpMechanismStream(
        domain.size(),
        [&sorted, lo](int64_t rank) {
          return static_cast<double>(QIpScoreI64(sorted, lo + rank));
        },
        /*sensitivity=*/1.0, spec.privacy.epsilon, rng);
    return Rational(lo + picked);
  }

  std::vector<Rational> sorted = values;
  for (const Rational& v : sorted) {
    if (!domain.RankOf(v)) {
      throw ParameterError("PrivateInteriorPoint: value " + v.ToString() +
                           " outside domain");
    }
  }
  std::sort(sorted.begin(), sorted.end());
  const int64_t picked = ExpMechanismStream(
      domain.size(),
      [&sorted, &domain](int64_t rank) {
        return static_cast<double>(QIpScore(sorted, domain.At(rank)));
      },
      /*sensitivity=*/1.0, spec.privacy.epsilon, rng);
  return domain.At(picked);
}

}  // namespace dpqc
