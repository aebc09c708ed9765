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

#include "dpqc/audit.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "dpqc/error.h"
#include "dpqc/interior_point.h"

namespace dpqc {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double AngleOf(const LabeledPlanePoint& p) {
  if (p.x == 0 && p.y == 0) {
    throw ParameterError("audit: the origin has no angle; rejected at ingestion");
  }
  double a = std::atan2(static_cast<double>(p.y), static_cast<double>(p.x));
  if (a < 0) a += kTwoPi;
  return a;
}

double CircularDistance(double a, double b) {
  double d = std::abs(a - b);
  return std::min(d, kTwoPi - d);
}

int HalfspaceLabel(double phi, const LabeledPlanePoint& p) {
  // h_phi is the halfspace whose boundary ray sits at angle phi, i.e. the
  // inward normal points at phi + pi/2. With this reading the degenerate
  // antipodal datasets score n/2 + 1 exactly on the open half circle above
  // the boundary, which is what the separation argument needs.
  const double v = -std::sin(phi) * static_cast<double>(p.x) +
                   std::cos(phi) * static_cast<double>(p.y);
  return v >= 0 ? 1 : -1;
}

// Number of examples the halfspace at `phi` labels correctly.
int64_t AgreementCount(double phi, std::span<const LabeledPlanePoint> s) {
  int64_t q = 0;
  for (const LabeledPlanePoint& p : s) {
    if (HalfspaceLabel(phi, p) == p.label) ++q;
  }
  return q;
}

}  // namespace

AngleGrid AngleGrid::FromCount(int64_t count) {
  if (count < 3) throw ParameterError("AngleGrid: need at least 3 angles");
  AngleGrid grid;
  grid.size = count;
  grid.gamma = kTwoPi / static_cast<double>(count);
  return grid;
}

std::vector<std::pair<int64_t, int64_t>> MakeData(
    double epsilon, const AngleGrid& grid,
    std::span<const LabeledPlanePoint> s, RandomSource& rng) {
  if (!(epsilon > 0)) throw ParameterError("MakeData: epsilon must be positive");
  std::vector<double> angles(s.size());
  for (size_t i = 0; i < s.size(); ++i) angles[i] = AngleOf(s[i]);
  std::vector<std::pair<int64_t, int64_t>> out;
  out.reserve(grid.size);
  for (int64_t k = 0; k < grid.size; ++k) {
    const double phi = grid.Angle(k);
    int64_t n_phi = 0;
    for (size_t i = 0; i < s.size(); ++i) {
      if (CircularDistance(angles[i], phi) < grid.gamma &&
          HalfspaceLabel(phi, s[i]) == s[i].label) {
        ++n_phi;
      }
    }
    const double noisy =
        static_cast<double>(n_phi) + LaplaceSample(1.0 / epsilon, rng);
    const int64_t copies =
        std::max<int64_t>(static_cast<int64_t>(std::ceil(noisy)), 1);
    out.push_back({k, copies});
  }
  return out;
}

ThrData MakeThrData(std::span<const std::pair<int64_t, int64_t>> s_h,
                    const AngleGrid& grid,
                    std::span<const LabeledPlanePoint> s, int64_t c,
                    RandomSource& rng) {
  int64_t total = 0;
  for (const auto& [k, copies] : s_h) {
    if (copies < 1) throw ParameterError("MakeThrData: nonpositive multiplicity");
    total += copies;
  }
  if (total <= c) {
    throw ParameterError("MakeThrData: need more than c = " + std::to_string(c) +
                         " elements, got " + std::to_string(total));
  }

  // Rank distinct angles by (q(s, angle), angle), largest first.
  struct Ranked {
    int64_t q;
    int64_t index;
    int64_t copies;
  };
  std::vector<Ranked> ranked;
  ranked.reserve(s_h.size());
  for (const auto& [k, copies] : s_h) {
    ranked.push_back({AgreementCount(grid.Angle(k), s), k, copies});
  }
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    if (a.q != b.q) return a.q > b.q;
    return a.index > b.index;
  });

  // Consume multiplicities until c elements are selected.
  std::vector<std::pair<int64_t, int64_t>> selected;  // (index, copies taken)
  std::vector<std::pair<int64_t, int64_t>> rest;      // remaining elements
  int64_t taken = 0;
  for (const Ranked& r : ranked) {
    const int64_t take = std::min(r.copies, c - taken);
    if (take > 0) selected.push_back({r.index, take});
    if (take < r.copies) rest.push_back({r.index, r.copies - take});
    taken += take;
  }

  // Rotate so a uniformly chosen non-selected element sits at zero.
  int64_t rest_total = 0;
  for (const auto& [k, copies] : rest) rest_total += copies;
  int64_t pick = static_cast<int64_t>(
      rng.NextBelow(static_cast<uint64_t>(rest_total)));
  int64_t rotation = rest.front().first;
  for (const auto& [k, copies] : rest) {
    if (pick < copies) {
      rotation = k;
      break;
    }
    pick -= copies;
  }

  ThrData out;
  out.rotation_index = rotation;
  auto rotate = [&](int64_t k) { return (k - rotation + grid.size) % grid.size; };

  // The argmax among the selected elements, ties to the larger rotated angle.
  int64_t best_q = -1, best_rot = -1, best_orig = -1;
  for (const auto& [k, copies] : selected) {
    const int64_t q = AgreementCount(grid.Angle(k), s);
    const int64_t rk = rotate(k);
    if (q > best_q || (q == best_q && rk > best_rot)) {
      best_q = q;
      best_rot = rk;
      best_orig = k;
    }
  }
  out.argmax_original_index = best_orig;
  out.argmax_rotated_index = best_rot;

  for (const auto& [k, copies] : selected) {
    const int64_t rk = rotate(k);
    const int label = rk <= best_rot ? 1 : -1;
    for (int64_t rep = 0; rep < copies; ++rep) {
      out.items.push_back({k, rk, label});
    }
  }
  return out;
}

double ASimpleH(std::span<const LabeledPlanePoint> s, const AngleGrid& grid,
                int64_t c, double epsilon, double delta, double alpha,
                double beta, RandomSource& rng) {
  if (!(epsilon > 0) || !(beta > 0 && beta < 1) || !(alpha > 0)) {
    throw ParameterError("ASimpleH: parameters must be positive");
  }
  const auto s_h = MakeData(epsilon, grid, s, rng);
  const ThrData thr = MakeThrData(s_h, grid, s, c, rng);

  // Threshold stage: private interior point over the selected elements'
  // rotated indices. Any value between their extremes separates the labels
  // up to one grid step, which is all this stage is ever audited for.
  std::vector<Rational> votes;
  votes.reserve(thr.items.size());
  for (const auto& item : thr.items) votes.push_back(Rational(item.rotated_index));
  IntRangeDomain domain(0, grid.size - 1);
  IpSolverSpec spec;
  spec.privacy = PrivacyParams(epsilon, delta == 0 ? 0 : delta);
  spec.beta = beta;
  RandomSource pip_rng = rng.Fork(0x7468726573686f6cULL);
  const Rational out = PrivateInteriorPoint(votes, domain, spec, pip_rng);
  const int64_t rotated_result = out.NumI64();
  const int64_t original = (rotated_result + thr.rotation_index) % grid.size;
  return grid.Angle(original);
}

std::pair<std::vector<LabeledPlanePoint>, std::vector<LabeledPlanePoint>>
CounterexampleDatasets(int64_t n) {
  if (n < 4 || n % 2 != 0) {
    throw ParameterError("CounterexampleDatasets: n must be even and >= 4");
  }
  std::vector<LabeledPlanePoint> s;
  for (int64_t i = 0; i < n / 2 + 1; ++i) s.push_back({1, 0, -1});
  for (int64_t i = 0; i < n / 2 - 1; ++i) s.push_back({-1, 0, -1});
  std::vector<LabeledPlanePoint> s_prime = s;
  s_prime[0] = {-1, 0, -1};
  return {std::move(s), std::move(s_prime)};
}

AuditReport EstimateEpsilonLowerBound(
    const std::function<bool(bool use_s_prime, RandomSource&)>& event,
    int64_t trials, double claimed_epsilon, double claimed_delta,
    RandomSource& rng, double confidence) {
  if (trials < 100) {
    throw ParameterError("EstimateEpsilonLowerBound: need at least 100 trials");
  }
  AuditReport report;
  report.trials = trials;
  report.claimed_epsilon = claimed_epsilon;
  report.claimed_delta = claimed_delta;
  for (int64_t i = 0; i < trials; ++i) {
    RandomSource trial_rng = rng.Fork(static_cast<uint64_t>(i));
    if (event(false, trial_rng)) ++report.hits_s;
  }
  for (int64_t i = 0; i < trials; ++i) {
    RandomSource trial_rng = rng.Fork(static_cast<uint64_t>(trials + i));
    if (event(true, trial_rng)) ++report.hits_s_prime;
  }
  report.p_s = static_cast<double>(report.hits_s) / trials;
  report.p_s_prime = static_cast<double>(report.hits_s_prime) / trials;
  report.ci_s = ClopperPearson(report.hits_s, trials, confidence);
  report.ci_s_prime = ClopperPearson(report.hits_s_prime, trials, confidence);

  const BinomialCi ci_not_s = ClopperPearson(trials - report.hits_s, trials,
                                             confidence);
  const BinomialCi ci_not_s_prime =
      ClopperPearson(trials - report.hits_s_prime, trials, confidence);
  struct Combo {
    double a_lo, b_hi;   // CI-pessimistic endpoints
    double a_pt, b_pt;   // point estimates
  };
  const Combo combos[] = {
      {report.ci_s.lo, report.ci_s_prime.hi, report.p_s, report.p_s_prime},
      {report.ci_s_prime.lo, report.ci_s.hi, report.p_s_prime, report.p_s},
      {ci_not_s.lo, ci_not_s_prime.hi, 1 - report.p_s, 1 - report.p_s_prime},
      {ci_not_s_prime.lo, ci_not_s.hi, 1 - report.p_s_prime, 1 - report.p_s},
  };
  double best = 0;
  for (const Combo& c : combos) {
    if (c.a_pt - claimed_delta > 0 && c.b_pt == 0) {
      report.unbounded_at_resolution = true;
    }
    const double numerator = c.a_lo - claimed_delta;
    if (numerator > 0 && c.b_hi > 0) {
      best = std::max(best, std::log(numerator / c.b_hi));
    }
  }
  report.epsilon_hat = best;
  report.verdict =
      report.epsilon_hat > claimed_epsilon ? "DP violated" : "consistent";
  return report;
}

}  // namespace dpqc
