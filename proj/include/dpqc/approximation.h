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
// Subset-size bounds from VC theory and empirical validators for the
// uniform-approximation property of random subsets.

#ifndef DPQC_APPROXIMATION_H_
#define DPQC_APPROXIMATION_H_

#include <span>
#include <vector>

#include "dpqc/geometry.h"
#include "dpqc/optimizer.h"
#include "dpqc/tukey.h"

namespace dpqc {

struct ApproxSpec {
  double alpha = 0.1;
  double beta = 0.05;
  int vc_dimension = 1;
  double c_vc = 8.0;  // explicit constant inside the subset-size bound
};

// ceil(c_vc (d ln(d/alpha) + ln(1/beta)) / alpha^2): the random-subset size
// at which an m-subset uniformly alpha-approximates the dataset for every
// range of a VC-dimension-d family, with failure probability beta.
int64_t MSubsetSize(const ApproxSpec& spec);

// Sample size for (alpha, beta)-PAC learning a VC-dimension-vc class when
// the learner achieves empirical error alpha/10:
// ceil(48/alpha (10 vc ln(48e/alpha) + ln(5/beta))).
int64_t PacSampleSize(int vc, double alpha, double beta);

struct GapCheckResult {
  bool pass = false;
  double worst_gap = 0;
  RationalPoint worst_probe;
};

// sup over probes of |Q(full, x) - Q(subset, x)| compared against alpha.
// `full_values` optionally carries precomputed Q(full, probe_i) so repeated
// subsets against one dataset do not re-evaluate the full side.
GapCheckResult CheckAlphaApprox(const TargetFunction& q,
                                std::span<const int64_t> subset,
                                const std::vector<RationalPoint>& probes,
                                double alpha,
                                const std::vector<double>* full_values = nullptr);

// Worst |Q1(x) - Q2(x)| over probes for two bindings of the same objective
// to neighboring datasets.
double SensitivityGap(const TargetFunction& q1, const TargetFunction& q2,
                      const std::vector<RationalPoint>& probes);

// One probe per stratum of the arrangement of all lines through pairs of
// distinct sites. The depth function is constant on each stratum, so the
// sup over these probes of any depth-difference equals the sup over the
// plane. Requires d == 2.
std::vector<RationalPoint> TukeyGapProbes(const PointSet& s,
                                          int64_t max_vertices = 2000000);

// Interval strata (values, gaps between consecutive values, and the two
// outer rays) for one-dimensional data: the 1-D depth is constant on each.
std::vector<RationalPoint> TukeyGapProbes1D(const PointSet& s);

// A halfplane {(x, y) : a1 x + a2 y >= w}.
struct Halfplane {
  int64_t a1 = 0, a2 = 0, w = 0;
};

// Number of distinct membership vectors (x in H_1, ..., x in H_k) realized
// by points of the plane. Requires the boundary lines in general position
// (pairwise nonparallel, no three concurrent); throws DegeneracyError with a
// perturbation hint otherwise.
int64_t CountRealizedDichotomies(const std::vector<Halfplane>& halfplanes);

}  // namespace dpqc

#endif  // DPQC_APPROXIMATION_H_
