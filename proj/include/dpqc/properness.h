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
// Empirical validation that the per-coordinate candidate domains contain a
// slice maximizer: compares a dense-mesh brute-force maximum against the
// best value attainable on the grid, per coordinate and per sampled prefix.

#ifndef DPQC_PROPERNESS_H_
#define DPQC_PROPERNESS_H_

#include <vector>

#include "dpqc/optimizer.h"

namespace dpqc {

struct PropernessOptions {
  Rational mesh_lo = Rational(-5);
  Rational mesh_hi = Rational(5);
  Rational mesh_step = Rational(1, 64);
  // How many coordinate-2 prefixes to check (grid values near the mesh
  // argmax plus a deterministic sample).
  int64_t prefix_samples = 16;
  // Domains up to this size are scanned exhaustively; larger ones are probed
  // in a widening window around the mesh argmax.
  int64_t scan_cap = 1 << 16;
  int64_t probe_budget = 64;
  uint64_t seed = 1;
};

struct PropernessReport {
  bool pass = false;
  double worst_shortfall = 0;
  int worst_coordinate = 0;
  RationalPoint worst_prefix;
  int64_t prefixes_checked = 0;
  bool grid_scans_exhaustive = true;
};

// Requires q.dimension() <= 2. Shortfalls are measured in Q units; the check
// passes when the worst shortfall is at most `tolerance`.
PropernessReport ValidateProperness(const TargetFunction& q, double tolerance,
                                    const PropernessOptions& options = {});

}  // namespace dpqc

#endif  // DPQC_PROPERNESS_H_
