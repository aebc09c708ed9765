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

#include "dpqc/linfeas.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "dpqc/approximation.h"
#include "dpqc/error.h"

namespace dpqc {
namespace {

std::vector<int64_t> AllIndices(int64_t n) {
  std::vector<int64_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  return idx;
}

int SatisfiedSign(int64_t a1, int64_t a2, int64_t w, const QueryPoint2& q) {
  // sign(a1 x + a2 y - w); constraint satisfied iff >= 0.
  if (a1 == 0 && a2 == 0) return w <= 0 ? 1 : -1;  // constant predicate
  return SideOfLine(Line2{a1, a2, w}, q);
}

}  // namespace

ConstraintSet::ConstraintSet(int d, int64_t x_bound,
                             std::vector<Constraint> constraints)
    : d_(d), x_bound_(x_bound), constraints_(std::move(constraints)) {
  if (d < 1) throw ParameterError("ConstraintSet: dimension must be >= 1");
  for (const Constraint& c : constraints_) {
    if (static_cast<int>(c.a.size()) != d) {
      throw ParameterError("ConstraintSet: arity mismatch");
    }
    for (int64_t v : c.a) {
      if (v < -x_bound || v > x_bound) {
        throw ParameterError("ConstraintSet: coefficient outside bound");
      }
    }
    if (c.w < -x_bound || c.w > x_bound) {
      throw ParameterError("ConstraintSet: offset outside bound");
    }
  }
}

int64_t Depth(const ConstraintSet& s, std::span<const int64_t> subset,
              const RationalPoint& x) {
  if (static_cast<int>(x.size()) != s.d()) {
    throw ParameterError("Depth: point arity mismatch");
  }
  int64_t count = 0;
  for (int64_t i : subset) {
    const Constraint& c = s.at(i);
    Rational lhs(0);
    for (int j = 0; j < s.d(); ++j) lhs = lhs + Rational(c.a[j]) * x[j];
    if (lhs >= Rational(c.w)) ++count;
  }
  return count;
}

int64_t Depth(const ConstraintSet& s, const RationalPoint& x) {
  const std::vector<int64_t> all = AllIndices(s.size());
  return Depth(s, all, x);
}

CdepthOracle::CdepthOracle(const ConstraintSet& s,
                           std::span<const int64_t> subset) {
  if (s.d() != 2) throw DimensionError("CdepthOracle: requires d == 2");
  // Deduplicate constraints into weighted predicates.
  std::map<std::tuple<int64_t, int64_t, int64_t>, int64_t> dedup;
  for (int64_t i : subset) {
    const Constraint& c = s.at(i);
    ++dedup[{c.a[0], c.a[1], c.w}];
  }
  for (const auto& [key, weight] : dedup) {
    predicates_.push_back(
        {std::get<0>(key), std::get<1>(key), std::get<2>(key), weight});
  }

  std::set<Line2> line_set;
  for (const Predicate& p : predicates_) {
    if (p.a1 == 0 && p.a2 == 0) continue;  // constant predicate, no boundary
    line_set.insert(MakeLine2(p.a1, p.a2, p.w));
  }
  const ArrangementStrata arr = BuildArrangementStrata(
      std::vector<Line2>(line_set.begin(), line_set.end()));

  // Depth of every stratum representative (closed counts, so a stratum in
  // the closure of another never has smaller depth).
  struct Entry {
    int64_t depth;
    RatPoint2 rep;
    Cone2 recession;
  };
  std::vector<Entry> entries;
  entries.reserve(arr.strata.size());
  for (const auto& st : arr.strata) {
    const QueryPoint2 q = QueryPoint2::Make(st.rep.x, st.rep.y);
    int64_t depth = 0;
    for (const Predicate& p : predicates_) {
      if (SatisfiedSign(p.a1, p.a2, p.w, q) >= 0) depth += p.weight;
    }
    entries.push_back({depth, st.rep, st.recession});
  }
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.depth > b.depth; });

  // Accumulate generators from the highest depth down; one region per
  // distinct value. Recomputing the hull from the previous hull plus the new
  // points keeps the incremental cost near the output size.
  std::vector<RatPoint2> points;
  std::vector<IVec2> rays;
  size_t i = 0;
  while (i < entries.size()) {
    const int64_t value = entries[i].depth;
    while (i < entries.size() && entries[i].depth == value) {
      points.push_back(entries[i].rep);
      for (const IVec2& g : entries[i].recession.Generators()) {
        rays.push_back(g);
      }
      ++i;
    }
    ConvexRegion region =
        ConvexRegion::FromGenerators(points, ConicalHull(rays));
    points = region.hull();  // shrink the carried generator set
    levels_.push_back({value, std::move(region)});
  }
}

int64_t CdepthOracle::Cdepth(const RationalPoint& x) const {
  if (x.size() != 2) throw ParameterError("Cdepth: point arity mismatch");
  if (levels_.empty()) return 0;
  const QueryPoint2 q = QueryPoint2::Make(x[0], x[1]);
  // Regions grow as the value drops; find the highest containing level.
  int64_t lo = 0, hi = static_cast<int64_t>(levels_.size()) - 1;
  if (!levels_[hi].region.Contains(q)) return 0;
  while (lo < hi) {
    const int64_t mid = (lo + hi) / 2;
    if (levels_[mid].region.Contains(q)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return levels_[lo].value;
}

int64_t CdepthOracle::Depth(const RationalPoint& x) const {
  if (x.size() != 2) throw ParameterError("Depth: point arity mismatch");
  const QueryPoint2 q = QueryPoint2::Make(x[0], x[1]);
  int64_t depth = 0;
  for (const Predicate& p : predicates_) {
    if (SatisfiedSign(p.a1, p.a2, p.w, q) >= 0) depth += p.weight;
  }
  return depth;
}

int64_t Cdepth(const ConstraintSet& s, std::span<const int64_t> subset,
               const RationalPoint& x) {
  return CdepthOracle(s, subset).Cdepth(x);
}

namespace {

// Is q in conv(points) + cone(rays)? Decided by enumerating Caratheodory
// combinations of at most three generators with exact rational solves.
bool HullMembershipByEnumeration(const RatPoint2& q,
                                 const std::vector<RatPoint2>& points,
                                 const std::vector<IVec2>& rays) {
  const Rational zero(0), one(1);
  auto solve2 = [&](const Rational& a11, const Rational& a12,
                    const Rational& a21, const Rational& a22,
                    const Rational& b1, const Rational& b2,
                    Rational* s, Rational* t) {
    const Rational det = a11 * a22 - a12 * a21;
    if (det.IsZero()) return false;
    *s = (b1 * a22 - a12 * b2) / det;
    *t = (a11 * b2 - b1 * a21) / det;
    return true;
  };

  // Single point (plus up to two rays).
  for (const RatPoint2& p : points) {
    const Rational wx = q.x - p.x, wy = q.y - p.y;
    if (wx.IsZero() && wy.IsZero()) return true;
    for (size_t i = 0; i < rays.size(); ++i) {
      const Rational rx(rays[i].x), ry(rays[i].y);
      // w = mu r, mu >= 0.
      const Rational c = wx * ry - wy * rx;
      if (c.IsZero()) {
        const Rational dot = wx * rx + wy * ry;
        if (dot.Sign() >= 0) return true;
      }
      for (size_t j = i + 1; j < rays.size(); ++j) {
        Rational mu1, mu2;
        if (solve2(rx, Rational(rays[j].x), ry, Rational(rays[j].y), wx, wy,
                   &mu1, &mu2) &&
            mu1.Sign() >= 0 && mu2.Sign() >= 0) {
          return true;
        }
      }
    }
  }
  // Two points (plus up to one ray).
  for (size_t i = 0; i < points.size(); ++i) {
    for (size_t j = i + 1; j < points.size(); ++j) {
      const Rational ex = points[j].x - points[i].x;
      const Rational ey = points[j].y - points[i].y;
      const Rational wx = q.x - points[i].x, wy = q.y - points[i].y;
      // q = p_i + lambda e (lambda in [0,1])
      const Rational c = wx * ey - wy * ex;
      if (c.IsZero()) {
        const Rational d = wx * ex + wy * ey;
        const Rational len = ex * ex + ey * ey;
        if (d >= zero && d <= len) return true;
      }
      for (const IVec2& r : rays) {
        Rational lambda, mu;
        if (solve2(ex, Rational(r.x), ey, Rational(r.y), wx, wy, &lambda,
                   &mu) &&
            lambda >= zero && lambda <= one && mu.Sign() >= 0) {
          return true;
        }
      }
    }
  }
  // Three points: barycentric membership.
  for (size_t i = 0; i < points.size(); ++i) {
    for (size_t j = i + 1; j < points.size(); ++j) {
      for (size_t k = j + 1; k < points.size(); ++k) {
        const Rational e1x = points[j].x - points[i].x;
        const Rational e1y = points[j].y - points[i].y;
        const Rational e2x = points[k].x - points[i].x;
        const Rational e2y = points[k].y - points[i].y;
        const Rational wx = q.x - points[i].x, wy = q.y - points[i].y;
        Rational l1, l2;
        if (solve2(e1x, e2x, e1y, e2y, wx, wy, &l1, &l2) && l1.Sign() >= 0 &&
            l2.Sign() >= 0 && l1 + l2 <= one) {
          return true;
        }
      }
    }
  }
  return false;
}

}  // namespace

int64_t CdepthBruteForce(const ConstraintSet& s,
                         std::span<const int64_t> subset,
                         const RationalPoint& x) {
  if (s.d() != 2) throw DimensionError("CdepthBruteForce: requires d == 2");
  if (x.size() != 2) throw ParameterError("CdepthBruteForce: arity mismatch");
  std::map<std::tuple<int64_t, int64_t, int64_t>, int64_t> dedup;
  for (int64_t i : subset) {
    const Constraint& c = s.at(i);
    ++dedup[{c.a[0], c.a[1], c.w}];
  }
  std::set<Line2> line_set;
  for (const auto& [key, weight] : dedup) {
    (void)weight;
    const auto [a1, a2, w] = key;
    if (a1 == 0 && a2 == 0) continue;
    line_set.insert(MakeLine2(a1, a2, w));
  }
  const ArrangementStrata arr = BuildArrangementStrata(
      std::vector<Line2>(line_set.begin(), line_set.end()));

  struct Entry {
    int64_t depth;
    RatPoint2 rep;
    Cone2 recession;
  };
  std::vector<Entry> entries;
  for (const auto& st : arr.strata) {
    const QueryPoint2 qp = QueryPoint2::Make(st.rep.x, st.rep.y);
    int64_t depth = 0;
    for (const auto& [key, weight] : dedup) {
      const auto [a1, a2, w] = key;
      if (SatisfiedSign(a1, a2, w, qp) >= 0) depth += weight;
    }
    entries.push_back({depth, st.rep, st.recession});
  }
  std::vector<int64_t> values;
  for (const Entry& e : entries) values.push_back(e.depth);
  std::sort(values.begin(), values.end(), std::greater<>());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  const RatPoint2 q{x[0], x[1]};
  auto reduce_dir = [](IVec2 v) {
    int64_t a = v.x < 0 ? -v.x : v.x, b = v.y < 0 ? -v.y : v.y;
    while (b) {
      const int64_t t = a % b;
      a = b;
      b = t;
    }
    return a > 1 ? IVec2{v.x / a, v.y / a} : v;
  };
  for (int64_t y : values) {
    std::vector<RatPoint2> gens;
    std::vector<IVec2> rays;
    for (const Entry& e : entries) {
      if (e.depth < y) continue;
      gens.push_back(e.rep);
      for (const IVec2& g : e.recession.Generators()) {
        rays.push_back(reduce_dir(g));
      }
    }
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    std::sort(rays.begin(), rays.end(), [](const IVec2& a, const IVec2& b) {
      return a.x != b.x ? a.x < b.x : a.y < b.y;
    });
    rays.erase(std::unique(rays.begin(), rays.end()), rays.end());
    if (HullMembershipByEnumeration(q, gens, rays)) return y;
  }
  return 0;
}

double QLf(const ConstraintSet& s, std::span<const int64_t> subset,
           const RationalPoint& x) {
  if (subset.empty()) throw ParameterError("QLf: empty dataset");
  return static_cast<double>(Cdepth(s, subset, x)) /
         static_cast<double>(subset.size());
}

std::vector<RationalPoint> LfGapProbes(const ConstraintSet& s,
                                       std::span<const int64_t> subset) {
  if (s.d() != 2) throw DimensionError("LfGapProbes: requires d == 2");
  const std::vector<int64_t> all = AllIndices(s.size());
  std::vector<RationalPoint> probes;
  std::set<RatPoint2> seen;
  auto add = [&](const RatPoint2& p) {
    if (seen.insert(p).second) probes.push_back({p.x, p.y});
  };
  for (const auto& oracle_subset : {std::span<const int64_t>(all), subset}) {
    const CdepthOracle oracle(s, oracle_subset);
    for (const auto& level : oracle.levels()) {
      for (const RatPoint2& v : level.region.hull()) add(v);
    }
  }
  std::set<Line2> line_set;
  for (int64_t i = 0; i < s.size(); ++i) {
    const Constraint& c = s.at(i);
    if (c.a[0] == 0 && c.a[1] == 0) continue;
    line_set.insert(MakeLine2(c.a[0], c.a[1], c.w));
  }
  const ArrangementStrata arr = BuildArrangementStrata(
      std::vector<Line2>(line_set.begin(), line_set.end()));
  for (const auto& st : arr.strata) add(st.rep);
  return probes;
}

LinFeasTarget::LinFeasTarget(const ConstraintSet& constraints,
                             GridConfig grid_config, int64_t domain_cap,
                             bool exclude_zero_first_coordinate)
    : constraints_(constraints),
      grid_config_(std::move(grid_config)),
      domain_cap_(domain_cap),
      exclude_zero_first_coordinate_(exclude_zero_first_coordinate) {}

std::shared_ptr<const CdepthOracle> LinFeasTarget::OracleFor(
    std::span<const int64_t> subset) const {
  std::vector<int64_t> key(subset.begin(), subset.end());
  std::lock_guard<std::mutex> lock(mu_);
  auto it = oracle_cache_.find(key);
  if (it != oracle_cache_.end()) return it->second;
  auto oracle = std::make_shared<const CdepthOracle>(constraints_, subset);
  oracle_cache_.emplace(std::move(key), oracle);
  return oracle;
}

double LinFeasTarget::Eval(std::span<const int64_t> subset,
                           const RationalPoint& point) const {
  if (subset.empty()) throw ParameterError("LinFeasTarget: empty subset");
  return static_cast<double>(OracleFor(subset)->Cdepth(point)) /
         static_cast<double>(subset.size());
}

std::shared_ptr<const OrderedDomain> LinFeasTarget::Domain(
    int i, const RationalPoint& prefix) const {
  const mpz_class prev = prefix.empty() ? mpz_class(1) : prefix.back().den();
  auto grid = std::make_shared<GridDomain>(
      LfDomainConfigured(i, constraints_.d(), constraints_.x_bound(), prev,
                         grid_config_),
      domain_cap_);
  if (i != 1 || !exclude_zero_first_coordinate_) return grid;
  std::vector<Rational> values;
  values.reserve(grid->size());
  for (int64_t r = 0; r < grid->size(); ++r) {
    Rational v = grid->At(r);
    if (!v.IsZero()) values.push_back(std::move(v));
  }
  return std::make_shared<ListDomain>(std::move(values));
}

std::shared_ptr<const OrderedDomain> LinFeasTarget::SuffixDomain(
    const Rational& x) const {
  const std::string key = x.den().get_str();
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = suffix_cache_.find(key);
    if (it != suffix_cache_.end()) return it->second;
  }
  std::shared_ptr<const OrderedDomain> domain = std::make_shared<GridDomain>(
      LfDomainConfigured(2, constraints_.d(), constraints_.x_bound(), x.den(),
                         grid_config_),
      domain_cap_);
  if (domain->size() > 0) domain->At(0);  // materialize before sharing
  std::lock_guard<std::mutex> lock(mu_);
  suffix_cache_.emplace(key, domain);
  return domain;
}

double LinFeasTarget::SliceEval(std::span<const int64_t> subset,
                                const RationalPoint& prefix,
                                const Rational& x) const {
  const int d = constraints_.d();
  const int i = static_cast<int>(prefix.size()) + 1;
  if (i > d) throw ParameterError("SliceEval: prefix too long");
  RationalPoint with_x = prefix;
  with_x.push_back(x);
  if (i == d) return Eval(subset, with_x);
  if (d != 2) throw DimensionError("LinFeasTarget: exact slices need d == 2");
  const std::shared_ptr<const CdepthOracle> oracle = OracleFor(subset);
  const std::shared_ptr<const OrderedDomain> suffix = SuffixDomain(x);
  int64_t best = 0;
  RationalPoint probe{x, Rational(0)};
  for (int64_t rank = 0; rank < suffix->size(); ++rank) {
    probe[1] = suffix->At(rank);
    best = std::max(best, oracle->Cdepth(probe));
    if (best == static_cast<int64_t>(subset.size())) break;
  }
  return static_cast<double>(best) / static_cast<double>(subset.size());
}

LinFeasResult PrivateLinearFeasibility(const ConstraintSet& s, double alpha,
                                       double beta,
                                       const PrivacyParams& privacy,
                                       RandomSource& rng,
                                       const LinFeasOptions& options) {
  const int d = s.d();
  if (d != 2) {
    throw DimensionError("PrivateLinearFeasibility: exact cdepth needs d == 2");
  }
  if (!(alpha > 0 && alpha < 1) || !(beta > 0 && beta < 1)) {
    throw ParameterError("PrivateLinearFeasibility: alpha, beta in (0, 1)");
  }
  const int64_t n = s.size();
  if (n == 0) throw ParameterError("PrivateLinearFeasibility: empty input");

  PrivacyParams per_step;
  if (privacy.delta > 0) {
    per_step = InverseComposition(privacy.epsilon, privacy.delta, d);
  } else {
    per_step.epsilon = privacy.epsilon / d;
    per_step.delta = 0;
  }
  const double alpha_in = alpha / (4.0 * d * d);

  double max_log_size = 0;
  mpz_class prev_t(1);
  for (int i = 1; i <= d; ++i) {
    const RationalGrid g =
        LfDomainConfigured(i, d, s.x_bound(), prev_t, options.grid_config);
    double log_size;
    if (g.t_max() <= mpz_class(int64_t{1} << 20)) {
      log_size = std::log(g.DistinctSize().get_d());
    } else {
      log_size = std::log(g.PreDedupBound().get_d());
    }
    max_log_size = std::max(max_log_size, log_size);
    prev_t = g.t_max();
  }

  int64_t t;
  if (options.t_override) {
    t = *options.t_override;
    if (t < 1) throw ParameterError("PrivateLinearFeasibility: t override < 1");
  } else {
    t = 1;
    for (int iter = 0; iter < 32; ++iter) {
      const double beta_in = beta / static_cast<double>(t + d);
      const int64_t next = static_cast<int64_t>(std::ceil(
                               4.0 / per_step.epsilon *
                               (max_log_size - std::log(beta_in)))) +
                           2;
      if (next == t) break;
      t = next;
    }
  }
  const double beta_in = beta / static_cast<double>(t + d);

  LinFeasResult result;
  result.t = t;
  result.n_min_baseline = t;
  ApproxSpec approx_spec;
  approx_spec.alpha = alpha_in;
  approx_spec.beta = beta_in;
  approx_spec.vc_dimension = d;
  result.n_min_theory =
      static_cast<double>(MSubsetSize(approx_spec)) * static_cast<double>(t);
  if (n < t) {
    throw InsufficientSamplesError(
        "PrivateLinearFeasibility: n = " + std::to_string(n) +
        " below the baseline requirement t = " + std::to_string(t) +
        " (the subset-size theory bound would ask for about " +
        std::to_string(static_cast<int64_t>(result.n_min_theory)) +
        " samples)");
  }

  LinFeasTarget target(s, options.grid_config, options.domain_cap,
                       options.exclude_zero_first_coordinate);
  OptimizerConfig config;
  config.alpha = alpha_in;
  config.beta = beta_in;
  config.privacy = per_step;
  config.t = t;
  result.point = IpConcaveHighDim(target, config, rng, &result.ledger,
                                  &result.trace);
  result.satisfied = Depth(s, result.point);
  return result;
}

ConstraintSet ReduceExamplesToConstraints(
    const std::vector<LabeledExample>& examples, int64_t x_bound) {
  if (examples.empty()) {
    throw ParameterError("ReduceExamplesToConstraints: no examples");
  }
  const int d = static_cast<int>(examples[0].x.size());
  std::vector<Constraint> constraints;
  constraints.reserve(examples.size());
  for (const LabeledExample& e : examples) {
    if (static_cast<int>(e.x.size()) != d) {
      throw ParameterError("ReduceExamplesToConstraints: arity mismatch");
    }
    if (e.label != 1 && e.label != -1) {
      throw ParameterError("ReduceExamplesToConstraints: label must be +-1");
    }
    Constraint c;
    c.a.reserve(d + 1);
    for (int64_t v : e.x) c.a.push_back(e.label * v);
    c.a.push_back(-e.label);
    c.w = 0;
    constraints.push_back(std::move(c));
  }
  return ConstraintSet(d + 1, std::max<int64_t>(x_bound, 1),
                       std::move(constraints));
}

int Hypothesis::Predict(std::span<const int64_t> x) const {
  if (x.size() != weights.size()) {
    throw ParameterError("Hypothesis: arity mismatch");
  }
  Rational lhs(0);
  for (size_t i = 0; i < x.size(); ++i) lhs = lhs + weights[i] * Rational(x[i]);
  return lhs >= threshold ? 1 : -1;
}

LearnResult LearnHalfspace(const std::vector<LabeledExample>& examples,
                           int64_t x_bound, double alpha, double beta,
                           const PrivacyParams& privacy, RandomSource& rng,
                           const LinFeasOptions& options) {
  if (examples.empty()) throw ParameterError("LearnHalfspace: no examples");
  const int d = static_cast<int>(examples[0].x.size());
  if (d != 1) {
    throw DimensionError(
        "LearnHalfspace: exact feasibility supports 1-D examples "
        "(two solver variables)");
  }
  LearnResult result;
  result.pac_sample_bound = PacSampleSize(d + 1, alpha, beta);
  if (static_cast<int64_t>(examples.size()) < result.pac_sample_bound) {
    throw InsufficientSamplesError(
        "LearnHalfspace: need at least " +
        std::to_string(result.pac_sample_bound) + " examples, got " +
        std::to_string(examples.size()));
  }
  const ConstraintSet reduced = ReduceExamplesToConstraints(examples, x_bound);
  // The reduced system is homogeneous, so the zero vector satisfies every
  // constraint while classifying nothing; keep it out of the weight domain.
  LinFeasOptions solver_options = options;
  solver_options.exclude_zero_first_coordinate = true;
  result.solver = PrivateLinearFeasibility(reduced, alpha / 10.0, beta,
                                           privacy, rng, solver_options);
  result.hypothesis.weights.assign(result.solver.point.begin(),
                                   result.solver.point.end() - 1);
  result.hypothesis.threshold = result.solver.point.back();
  int64_t errors = 0;
  for (const LabeledExample& e : examples) {
    if (result.hypothesis.Predict(e.x) != e.label) ++errors;
  }
  result.training_error =
      static_cast<double>(errors) / static_cast<double>(examples.size());
  return result;
}

}  // namespace dpqc
