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

#include "dpqc/properness.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dpqc/error.h"

namespace dpqc {
namespace {

std::vector<Rational> MeshValues(const PropernessOptions& o) {
  std::vector<Rational> out;
  for (Rational x = o.mesh_lo; x <= o.mesh_hi; x = x + o.mesh_step) {
    out.push_back(x);
  }
  return out;
}

// Grid values inside [center - w, center + w], at most `budget` of them,
// nearest-first. One pass over denominator classes up to a resolution cap:
// for each denominator the numerators nearest the center are candidates, so
// the collection spans every scale from coarse to fine.
std::vector<Rational> GridValuesNear(const GridDomain& domain,
                                     const Rational& center, const Rational& w,
                                     int64_t budget) {
  constexpr int64_t kDenominatorCap = 4096;
  const RationalGrid& grid = domain.grid();
  const int64_t t_max =
      grid.t_max() > kDenominatorCap
          ? kDenominatorCap
          : mpz_get_si(grid.t_max().get_mpz_t());
  const Rational lo = center - w;
  const Rational hi = center + w;
  std::vector<Rational> candidates;
  for (int64_t t = 1; t <= t_max; ++t) {
    // Numerator of the grid value at this denominator nearest the center.
    mpz_class twice = center.num() * (2 * t);
    mpz_class s0;
    mpz_fdiv_q(s0.get_mpz_t(), mpz_class(twice + center.den()).get_mpz_t(),
               mpz_class(center.den() * 2).get_mpz_t());
    for (int64_t off = -3; off <= 3; ++off) {
      const mpz_class s = s0 + off;
      if (abs(s) > grid.s_max()) continue;
      Rational v(s, mpz_class(t));
      if (lo <= v && v <= hi) candidates.push_back(std::move(v));
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [&center](const Rational& a, const Rational& b) {
              const Rational da = (a - center).Abs();
              const Rational db = (b - center).Abs();
              if (da != db) return da < db;
              return a < b;
            });
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());
  if (static_cast<int64_t>(candidates.size()) > budget) {
    candidates.resize(budget);
  }
  return candidates;
}

}  // namespace

PropernessReport ValidateProperness(const TargetFunction& q, double tolerance,
                                    const PropernessOptions& options) {
  const int d = q.dimension();
  if (d > 2) throw DimensionError("ValidateProperness: requires d <= 2");
  std::vector<int64_t> all(q.dataset_size());
  std::iota(all.begin(), all.end(), 0);
  const std::vector<Rational> mesh = MeshValues(options);
  if (mesh.empty()) throw ParameterError("ValidateProperness: empty mesh");

  PropernessReport report;
  report.pass = true;

  auto record = [&](double shortfall, int coordinate,
                    const RationalPoint& prefix) {
    if (shortfall > report.worst_shortfall) {
      report.worst_shortfall = shortfall;
      report.worst_coordinate = coordinate;
      report.worst_prefix = prefix;
    }
  };

  // Best grid value of `value_at`, exhaustively under the scan cap and by
  // widening windows around `hint` otherwise.
  auto best_on_grid = [&](const GridDomain& domain,
                          const std::function<double(const Rational&)>& value_at,
                          const Rational& hint) -> double {
    const bool scannable = domain.grid().PreDedupBound() <= options.scan_cap;
    double best = -std::numeric_limits<double>::infinity();
    if (scannable) {
      for (int64_t r = 0; r < domain.size(); ++r) {
        best = std::max(best, value_at(domain.At(r)));
      }
      return best;
    }
    report.grid_scans_exhaustive = false;
    Rational w = options.mesh_step;
    for (int round = 0; round < 12; ++round) {
      for (const Rational& g :
           GridValuesNear(domain, hint, w, options.probe_budget)) {
        best = std::max(best, value_at(g));
      }
      w = w * Rational(4);
    }
    return best;
  };

  if (d == 1) {
    double lhs = -std::numeric_limits<double>::infinity();
    Rational lhs_arg = mesh.front();
    for (const Rational& x : mesh) {
      const double v = q.Eval(all, {x});
      if (v > lhs) {
        lhs = v;
        lhs_arg = x;
      }
    }
    const auto domain = q.Domain(1, {});
    const auto* grid_domain = dynamic_cast<const GridDomain*>(domain.get());
    double rhs;
    if (grid_domain != nullptr) {
      rhs = best_on_grid(*grid_domain,
                         [&](const Rational& x) { return q.Eval(all, {x}); },
                         lhs_arg);
    } else {
      rhs = -std::numeric_limits<double>::infinity();
      for (int64_t r = 0; r < domain->size(); ++r) {
        rhs = std::max(rhs, q.Eval(all, {domain->At(r)}));
      }
    }
    report.prefixes_checked = 1;
    record(std::max(0.0, lhs - rhs), 1, {});
    report.pass = report.worst_shortfall <= tolerance;
    return report;
  }

  // d == 2. Coordinate 1: dense-mesh maximum of max_{x2} Q against the best
  // slice value attainable with x1 on the grid.
  double lhs = -std::numeric_limits<double>::infinity();
  Rational lhs_arg = mesh.front();
  std::vector<double> mesh_col_max(mesh.size(),
                                   -std::numeric_limits<double>::infinity());
  for (size_t i = 0; i < mesh.size(); ++i) {
    for (const Rational& y : mesh) {
      mesh_col_max[i] = std::max(mesh_col_max[i], q.Eval(all, {mesh[i], y}));
    }
    if (mesh_col_max[i] > lhs) {
      lhs = mesh_col_max[i];
      lhs_arg = mesh[i];
    }
  }
  const auto domain1 = q.Domain(1, {});
  const auto* grid1 = dynamic_cast<const GridDomain*>(domain1.get());
  double rhs1;
  const auto slice1 = [&](const Rational& x) {
    return q.SliceEval(all, {}, x);
  };
  if (grid1 != nullptr) {
    rhs1 = best_on_grid(*grid1, slice1, lhs_arg);
  } else {
    rhs1 = -std::numeric_limits<double>::infinity();
    for (int64_t r = 0; r < domain1->size(); ++r) {
      rhs1 = std::max(rhs1, slice1(domain1->At(r)));
    }
  }
  record(std::max(0.0, lhs - rhs1), 1, {});

  // Coordinate 2: prefixes are grid values near the mesh argmax plus a
  // deterministic spread of further grid values.
  std::vector<Rational> prefixes;
  if (grid1 != nullptr) {
    prefixes = GridValuesNear(*grid1, lhs_arg, options.mesh_step * Rational(4),
                              options.prefix_samples / 2 + 1);
  }
  RandomSource rng(options.seed);
  while (static_cast<int64_t>(prefixes.size()) < options.prefix_samples) {
    const size_t i = rng.NextBelow(mesh.size());
    const auto near =
        grid1 != nullptr
            ? GridValuesNear(*grid1, mesh[i], options.mesh_step * Rational(2), 1)
            : std::vector<Rational>{};
    if (!near.empty()) {
      prefixes.push_back(near.front());
    } else if (grid1 == nullptr && domain1->size() > 0) {
      prefixes.push_back(domain1->At(rng.NextBelow(domain1->size())));
    } else if (near.empty()) {
      break;
    }
  }
  std::sort(prefixes.begin(), prefixes.end());
  prefixes.erase(std::unique(prefixes.begin(), prefixes.end()), prefixes.end());

  for (const Rational& x1 : prefixes) {
    double lhs2 = -std::numeric_limits<double>::infinity();
    Rational lhs2_arg = mesh.front();
    for (const Rational& y : mesh) {
      const double v = q.Eval(all, {x1, y});
      if (v > lhs2) {
        lhs2 = v;
        lhs2_arg = y;
      }
    }
    const auto domain2 = q.Domain(2, {x1});
    const auto* grid2 = dynamic_cast<const GridDomain*>(domain2.get());
    double rhs2;
    const auto eval2 = [&](const Rational& y) {
      return q.Eval(all, {x1, y});
    };
    if (grid2 != nullptr) {
      rhs2 = best_on_grid(*grid2, eval2, lhs2_arg);
    } else {
      rhs2 = -std::numeric_limits<double>::infinity();
      for (int64_t r = 0; r < domain2->size(); ++r) {
        rhs2 = std::max(rhs2, eval2(domain2->At(r)));
      }
    }
    record(std::max(0.0, lhs2 - rhs2), 2, {x1});
  }
  report.prefixes_checked = 1 + static_cast<int64_t>(prefixes.size());
  report.pass = report.worst_shortfall <= tolerance;
  return report;
}

}  // namespace dpqc
