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

#include "dpqc/approximation.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "dpqc/error.h"

namespace dpqc {

int64_t MSubsetSize(const ApproxSpec& spec) {
  if (!(spec.alpha > 0 && spec.alpha < 1) || !(spec.beta > 0 && spec.beta < 1)) {
    throw ParameterError("MSubsetSize: alpha, beta must be in (0, 1)");
  }
  if (spec.vc_dimension < 1 || !(spec.c_vc > 0)) {
    throw ParameterError("MSubsetSize: bad dimension or constant");
  }
  const double d = spec.vc_dimension;
  const double raw = spec.c_vc *
                     (d * std::log(d / spec.alpha) + std::log(1.0 / spec.beta)) /
                     (spec.alpha * spec.alpha);
  return static_cast<int64_t>(std::ceil(raw));
}

int64_t PacSampleSize(int vc, double alpha, double beta) {
  if (vc < 1 || !(alpha > 0 && alpha < 1) || !(beta > 0 && beta < 1)) {
    throw ParameterError("PacSampleSize: bad parameters");
  }
  const double raw =
      48.0 / alpha *
      (10.0 * vc * std::log(48.0 * std::exp(1.0) / alpha) +
       std::log(5.0 / beta));
  return static_cast<int64_t>(std::ceil(raw));
}

GapCheckResult CheckAlphaApprox(const TargetFunction& q,
                                std::span<const int64_t> subset,
                                const std::vector<RationalPoint>& probes,
                                double alpha,
                                const std::vector<double>* full_values) {
  if (probes.empty()) throw ParameterError("CheckAlphaApprox: no probes");
  if (full_values != nullptr && full_values->size() != probes.size()) {
    throw ParameterError("CheckAlphaApprox: cached values arity mismatch");
  }
  std::vector<int64_t> all(q.dataset_size());
  std::iota(all.begin(), all.end(), 0);
  GapCheckResult result;
  for (size_t i = 0; i < probes.size(); ++i) {
    const double f = full_values != nullptr ? (*full_values)[i]
                                            : q.Eval(all, probes[i]);
    const double g = q.Eval(subset, probes[i]);
    const double gap = std::abs(f - g);
    if (gap > result.worst_gap) {
      result.worst_gap = gap;
      result.worst_probe = probes[i];
    }
  }
  result.pass = result.worst_gap <= alpha;
  return result;
}

double SensitivityGap(const TargetFunction& q1, const TargetFunction& q2,
                      const std::vector<RationalPoint>& probes) {
  std::vector<int64_t> all1(q1.dataset_size());
  std::iota(all1.begin(), all1.end(), 0);
  std::vector<int64_t> all2(q2.dataset_size());
  std::iota(all2.begin(), all2.end(), 0);
  double worst = 0;
  for (const RationalPoint& p : probes) {
    worst = std::max(worst, std::abs(q1.Eval(all1, p) - q2.Eval(all2, p)));
  }
  return worst;
}

std::vector<RationalPoint> TukeyGapProbes(const PointSet& s,
                                          int64_t max_vertices) {
  if (s.d() != 2) throw DimensionError("TukeyGapProbes: requires d == 2");
  std::set<std::pair<int64_t, int64_t>> distinct;
  for (int64_t i = 0; i < s.size(); ++i) {
    const auto p = s.point(i);
    distinct.insert({p[0], p[1]});
  }
  std::vector<IVec2> sites(distinct.size());
  std::transform(distinct.begin(), distinct.end(), sites.begin(),
                 [](const auto& p) { return IVec2{p.first, p.second}; });
  std::set<Line2> lines;
  for (size_t i = 0; i < sites.size(); ++i) {
    for (size_t j = i + 1; j < sites.size(); ++j) {
      lines.insert(LineThroughPoints(sites[i], sites[j]));
    }
  }
  if (lines.empty()) {
    // Zero or one distinct site: the site itself plus offsets cover every
    // depth class.
    std::vector<RationalPoint> probes;
    if (!sites.empty()) {
      probes.push_back({Rational(sites[0].x), Rational(sites[0].y)});
      probes.push_back({Rational(sites[0].x) + Rational(1), Rational(sites[0].y)});
    } else {
      probes.push_back({Rational(0), Rational(0)});
    }
    return probes;
  }
  ArrangementStrata arr = BuildArrangementStrata(
      std::vector<Line2>(lines.begin(), lines.end()), max_vertices);
  std::vector<RationalPoint> probes;
  probes.reserve(arr.strata.size());
  for (const auto& st : arr.strata) probes.push_back({st.rep.x, st.rep.y});
  return probes;
}

std::vector<RationalPoint> TukeyGapProbes1D(const PointSet& s) {
  if (s.d() != 1) throw DimensionError("TukeyGapProbes1D: requires d == 1");
  std::set<int64_t> values;
  for (int64_t i = 0; i < s.size(); ++i) values.insert(s.point(i)[0]);
  std::vector<RationalPoint> probes;
  if (values.empty()) {
    probes.push_back({Rational(0)});
    return probes;
  }
  const std::vector<int64_t> v(values.begin(), values.end());
  probes.push_back({Rational(v.front()) - Rational(1)});
  for (size_t i = 0; i < v.size(); ++i) {
    probes.push_back({Rational(v[i])});
    if (i + 1 < v.size()) {
      probes.push_back({(Rational(v[i]) + Rational(v[i + 1])) * Rational(1, 2)});
    }
  }
  probes.push_back({Rational(v.back()) + Rational(1)});
  return probes;
}

int64_t CountRealizedDichotomies(const std::vector<Halfplane>& halfplanes) {
  if (halfplanes.empty()) return 1;
  std::vector<Line2> lines;
  lines.reserve(halfplanes.size());
  for (const Halfplane& h : halfplanes) {
    if (h.a1 == 0 && h.a2 == 0) {
      throw ParameterError("CountRealizedDichotomies: zero normal");
    }
    lines.push_back(MakeLine2(h.a1, h.a2, h.w));
  }
  // General position: pairwise nonparallel boundaries, no three concurrent.
  for (size_t i = 0; i < lines.size(); ++i) {
    for (size_t j = i + 1; j < lines.size(); ++j) {
      const auto p = IntersectLines(lines[i], lines[j]);
      if (!p.has_value()) {
        throw DegeneracyError(
            "CountRealizedDichotomies: parallel boundaries; perturb the "
            "coefficients to general position");
      }
      const QueryPoint2 q = QueryPoint2::Make(p->x, p->y);
      for (size_t k = j + 1; k < lines.size(); ++k) {
        if (SideOfLine(lines[k], q) == 0) {
          throw DegeneracyError(
              "CountRealizedDichotomies: three concurrent boundaries; "
              "perturb the coefficients to general position");
        }
      }
    }
  }
  ArrangementStrata arr = BuildArrangementStrata(lines);
  std::set<std::vector<int8_t>> patterns;
  for (const auto& st : arr.strata) {
    const QueryPoint2 q = QueryPoint2::Make(st.rep.x, st.rep.y);
    std::vector<int8_t> member(halfplanes.size());
    for (size_t i = 0; i < halfplanes.size(); ++i) {
      const Halfplane& h = halfplanes[i];
      const Rational v = Rational(h.a1) * st.rep.x + Rational(h.a2) * st.rep.y -
                         Rational(h.w);
      member[i] = v.Sign() >= 0 ? 1 : 0;
    }
    patterns.insert(std::move(member));
  }
  return static_cast<int64_t>(patterns.size());
}

}  // namespace dpqc
