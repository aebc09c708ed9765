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

#include "dpqc/tukey.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "dpqc/approximation.h"
#include "dpqc/error.h"

namespace dpqc {
namespace {

constexpr int64_t kSuffixScanCap = 1 << 16;

std::vector<int64_t> AllIndices(int64_t n) {
  std::vector<int64_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  return idx;
}

std::vector<WeightedSite2> SitesFor(const PointSet& s,
                                    std::span<const int64_t> subset) {
  std::map<std::pair<int64_t, int64_t>, int64_t> weights;
  for (int64_t i : subset) {
    const auto p = s.point(i);
    ++weights[{p[0], p[1]}];
  }
  std::vector<WeightedSite2> sites;
  sites.reserve(weights.size());
  for (const auto& [xy, w] : weights) {
    sites.push_back({xy.first, xy.second, w});
  }
  return sites;
}

std::vector<Line2> PairLines(const std::vector<WeightedSite2>& sites) {
  std::set<Line2> lines;
  for (size_t i = 0; i < sites.size(); ++i) {
    for (size_t j = i + 1; j < sites.size(); ++j) {
      lines.insert(LineThroughPoints({sites[i].x, sites[i].y},
                                     {sites[j].x, sites[j].y}));
    }
  }
  return {lines.begin(), lines.end()};
}

int64_t Depth1D(const PointSet& s, std::span<const int64_t> subset,
                const Rational& x) {
  int64_t le = 0, ge = 0;
  if (x.FitsInt64()) {
    // v <= num/den  <=>  v * den <= num, exact in 128-bit arithmetic.
    const __int128 num = x.NumI64();
    const __int128 den = x.DenI64();
    for (int64_t i : subset) {
      const __int128 lhs = static_cast<__int128>(s.point(i)[0]) * den;
      if (lhs <= num) ++le;
      if (lhs >= num) ++ge;
    }
    return std::min(le, ge);
  }
  for (int64_t i : subset) {
    const Rational v(s.point(i)[0]);
    if (v <= x) ++le;
    if (v >= x) ++ge;
  }
  return std::min(le, ge);
}

// Piecewise description of y -> depth((x1, y)) along a vertical line:
// breakpoints at the line's crossings with site pair lines and at on-line
// sites, constant in between.
struct VerticalLevels {
  std::vector<Rational> ords;
  std::vector<int64_t> at_ord;
  std::vector<int64_t> open_level;  // size ords()+1; open_level[i] is the
                                    // value on (ords[i-1], ords[i])
};

VerticalLevels BuildVerticalLevels(const std::vector<WeightedSite2>& sites,
                                   const std::vector<Line2>& pair_lines,
                                   const Rational& x1) {
  VerticalLevels out;
  std::set<Rational> ord_set;
  for (const Line2& line : pair_lines) {
    if (line.b == 0) continue;  // vertical line: no single crossing ordinate
    // y = (c - a x1) / b
    const mpz_class num = mpz_class(line.c) * x1.den() -
                          mpz_class(line.a) * x1.num();
    ord_set.insert(Rational(num, mpz_class(line.b) * x1.den()));
  }
  for (const WeightedSite2& site : sites) {
    if (Rational(site.x) == x1) ord_set.insert(Rational(site.y));
  }
  out.ords.assign(ord_set.begin(), ord_set.end());
  auto depth_at = [&](const Rational& y) {
    return WeightedTukeyDepth2(sites, x1, y);
  };
  const size_t k = out.ords.size();
  out.at_ord.resize(k);
  for (size_t i = 0; i < k; ++i) out.at_ord[i] = depth_at(out.ords[i]);
  out.open_level.resize(k + 1);
  const Rational half(1, 2);
  for (size_t i = 0; i + 1 < k; ++i) {
    out.open_level[i + 1] = depth_at((out.ords[i] + out.ords[i + 1]) * half);
  }
  if (k > 0) {
    out.open_level.front() = depth_at(out.ords.front() - Rational(1));
    out.open_level.back() = depth_at(out.ords.back() + Rational(1));
  } else {
    out.open_level.front() = depth_at(Rational(0));
  }
  return out;
}

int64_t MaxLevelOverLine(const VerticalLevels& levels) {
  int64_t best = 0;
  for (int64_t v : levels.at_ord) best = std::max(best, v);
  for (int64_t v : levels.open_level) best = std::max(best, v);
  return best;
}

// Max of the piecewise levels over the grid values, walking candidate pieces
// in decreasing level order so the common case probes one or two pieces.
int64_t MaxLevelOverGrid(const VerticalLevels& levels, const RationalGrid& grid) {
  struct Piece {
    int64_t level;
    int type;    // 0: exact ordinate; 1: open interval (lo, hi); 2: below
                 // all ordinates; 3: above all ordinates
    size_t idx;
  };
  std::vector<Piece> pieces;
  const size_t k = levels.ords.size();
  if (k == 0) return levels.open_level.front();
  for (size_t i = 0; i < k; ++i) pieces.push_back({levels.at_ord[i], 0, i});
  for (size_t i = 0; i + 1 < k; ++i) {
    pieces.push_back({levels.open_level[i + 1], 1, i});
  }
  pieces.push_back({levels.open_level.front(), 2, 0});
  pieces.push_back({levels.open_level.back(), 3, 0});
  std::sort(pieces.begin(), pieces.end(),
            [](const Piece& a, const Piece& b) { return a.level > b.level; });
  for (const Piece& piece : pieces) {
    switch (piece.type) {
      case 0:
        if (grid.Contains(levels.ords[piece.idx])) return piece.level;
        break;
      case 1:
        if (grid.HasValueIn(levels.ords[piece.idx],
                            levels.ords[piece.idx + 1], true, true)) {
          return piece.level;
        }
        break;
      case 2:
        if (grid.HasValueIn(std::nullopt, levels.ords.front(), false, true)) {
          return piece.level;
        }
        break;
      case 3:
        if (grid.HasValueIn(levels.ords.back(), std::nullopt, true, false)) {
          return piece.level;
        }
        break;
    }
  }
  // The pieces partition the line and the grid is nonempty, so this is
  // unreachable for a well-formed grid.
  return 0;
}

}  // namespace

PointSet::PointSet(int d, int64_t x_bound, std::vector<std::vector<int64_t>> rows)
    : d_(d), x_bound_(x_bound) {
  if (d < 1) throw ParameterError("PointSet: dimension must be >= 1");
  if (x_bound < 0) throw ParameterError("PointSet: negative bound");
  coords_.reserve(rows.size() * d);
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != d) {
      throw ParameterError("PointSet: row arity mismatch");
    }
    for (int64_t c : row) {
      if (c < -x_bound || c > x_bound) {
        throw ParameterError("PointSet: coordinate " + std::to_string(c) +
                             " outside [[" + std::to_string(x_bound) + "]]");
      }
      coords_.push_back(c);
    }
  }
}

int64_t TukeyDepth(const PointSet& s, std::span<const int64_t> subset,
                   const RationalPoint& p) {
  if (static_cast<int>(p.size()) != s.d()) {
    throw ParameterError("TukeyDepth: point arity mismatch");
  }
  switch (s.d()) {
    case 1:
      return Depth1D(s, subset, p[0]);
    case 2: {
      const std::vector<WeightedSite2> sites = SitesFor(s, subset);
      return WeightedTukeyDepth2(sites, p[0], p[1]);
    }
    case 3: {
      std::vector<WeightedSite3> sites;
      sites.reserve(subset.size());
      for (int64_t i : subset) {
        const auto row = s.point(i);
        sites.push_back({row[0], row[1], row[2], 1});
      }
      return WeightedTukeyDepth3(sites, p[0], p[1], p[2]);
    }
    default:
      throw DimensionError("TukeyDepth: only d <= 3 is supported");
  }
}

int64_t TukeyDepth(const PointSet& s, const RationalPoint& p) {
  const std::vector<int64_t> all = AllIndices(s.size());
  return TukeyDepth(s, all, p);
}

double QTd(const PointSet& s, std::span<const int64_t> subset,
           const RationalPoint& p) {
  if (subset.empty()) throw ParameterError("QTd: empty dataset");
  return static_cast<double>(TukeyDepth(s, subset, p)) /
         static_cast<double>(subset.size());
}

double TdSliceMax(const PointSet& s, std::span<const int64_t> subset,
                  const RationalPoint& prefix, const Rational& x,
                  const GridConfig& grid_config) {
  TukeyTarget target(s, grid_config);
  return target.SliceEval(subset, prefix, x);
}

TukeyTarget::TukeyTarget(const PointSet& points, GridConfig grid_config,
                         int64_t domain_cap)
    : points_(points),
      grid_config_(std::move(grid_config)),
      domain_cap_(domain_cap) {}

double TukeyTarget::Eval(std::span<const int64_t> subset,
                         const RationalPoint& point) const {
  return QTd(points_, subset, point);
}

std::shared_ptr<const OrderedDomain> TukeyTarget::Domain(
    int i, const RationalPoint& prefix) const {
  const mpz_class prev =
      prefix.empty() ? mpz_class(1) : prefix.back().den();
  return std::make_shared<GridDomain>(
      TukeyDomain(i, points_.d(), points_.x_bound(), prev, grid_config_),
      domain_cap_);
}

double TukeyTarget::SliceEval(std::span<const int64_t> subset,
                              const RationalPoint& prefix,
                              const Rational& x) const {
  const int d = points_.d();
  const int i = static_cast<int>(prefix.size()) + 1;
  if (i > d) throw ParameterError("SliceEval: prefix too long");
  if (subset.empty()) throw ParameterError("SliceEval: empty dataset");
  if (i == d) {
    RationalPoint point = prefix;
    point.push_back(x);
    return Eval(subset, point);
  }
  if (d == 2) {
    // Maximize depth((x, y)) over the cascading suffix grid. Small grids are
    // scanned directly; large ones go through the piecewise level structure
    // of the vertical line, which never materializes the grid.
    RationalPoint with_x = prefix;
    with_x.push_back(x);
    const RationalGrid grid =
        TukeyDomain(2, 2, points_.x_bound(), x.den(), grid_config_);
    const std::vector<WeightedSite2> sites = SitesFor(points_, subset);
    const double m = static_cast<double>(subset.size());
    int64_t best = 0;
    // The pre-dedup bound decides scan vs level structure without a sieve.
    if (grid.PreDedupBound() <= kSuffixScanCap) {
      std::shared_ptr<const std::vector<Rational>> values;
      const std::string key = x.den().get_str();
      {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = suffix_cache_.find(key);
        if (it != suffix_cache_.end()) values = it->second;
      }
      if (!values) {
        auto fresh = std::make_shared<std::vector<Rational>>();
        grid.Enumerate([&fresh](const Rational& y) {
          fresh->push_back(y);
          return true;
        });
        values = fresh;
        std::lock_guard<std::mutex> lock(mu_);
        suffix_cache_.emplace(key, values);
      }
      for (const Rational& y : *values) {
        best = std::max(best, WeightedTukeyDepth2(sites, x, y));
      }
    } else {
      const VerticalLevels levels =
          BuildVerticalLevels(sites, PairLines(sites), x);
      best = MaxLevelOverGrid(levels, grid);
    }
    return static_cast<double>(best) / m;
  }
  // d == 3, i <= 2: maximize over materialized suffix grids recursively.
  RationalPoint with_x = prefix;
  with_x.push_back(x);
  const std::shared_ptr<const OrderedDomain> next = Domain(i + 1, with_x);
  double best = 0;
  for (int64_t rank = 0; rank < next->size(); ++rank) {
    best = std::max(best, SliceEval(subset, with_x, next->At(rank)));
  }
  return best;
}

TukeyResult PrivateTukeyMedian(const PointSet& s, double alpha, double beta,
                               const PrivacyParams& privacy, RandomSource& rng,
                               const TukeyMedianOptions& options) {
  const int d = s.d();
  if (d > 3) throw DimensionError("PrivateTukeyMedian: only d <= 3");
  if (!(alpha > 0 && alpha < 1) || !(beta > 0 && beta < 1)) {
    throw ParameterError("PrivateTukeyMedian: alpha, beta must be in (0, 1)");
  }
  const int64_t n = s.size();
  if (n == 0) throw ParameterError("PrivateTukeyMedian: empty input");

  // Per-coordinate budget so the d-fold advanced composition lands on
  // (epsilon, delta); with delta == 0 fall back to basic composition.
  PrivacyParams per_step;
  if (privacy.delta > 0) {
    per_step = InverseComposition(privacy.epsilon, privacy.delta, d);
  } else {
    per_step.epsilon = privacy.epsilon / d;
    per_step.delta = 0;
  }
  const double alpha_in = alpha / (2.0 * d * (d + 1));
  (void)alpha_in;  // consumed analytically by the accuracy theorem; the
                   // algorithm itself has no alpha knob

  // Upper bound on the largest candidate-domain size across coordinates,
  // with worst-case denominator cascading.
  double max_log_size = 0;
  mpz_class prev_t(1);
  for (int i = 1; i <= d; ++i) {
    const RationalGrid g = TukeyDomain(i, d, s.x_bound(), prev_t,
                                       options.grid_config);
    double log_size;
    if (g.t_max() <= mpz_class(int64_t{1} << 20)) {
      log_size = std::log(g.DistinctSize().get_d());
    } else {
      log_size = std::log(g.PreDedupBound().get_d());
    }
    max_log_size = std::max(max_log_size, log_size);
    prev_t = g.t_max();
  }

  // Block count: the baseline interior-point requirement at the substituted
  // parameters, solved as a fixpoint of beta_in = beta / (t + d).
  int64_t t;
  if (options.t_override) {
    t = *options.t_override;
    if (t < 1) throw ParameterError("PrivateTukeyMedian: t override < 1");
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

  TukeyResult result;
  result.t = t;
  result.n_min_baseline = t;
  ApproxSpec approx_spec;
  approx_spec.alpha = alpha / (2.0 * d * (d + 1));
  approx_spec.beta = beta_in;
  approx_spec.vc_dimension = d;
  result.n_min_theory =
      static_cast<double>(MSubsetSize(approx_spec)) * static_cast<double>(t);
  if (n < t) {
    throw InsufficientSamplesError(
        "PrivateTukeyMedian: n = " + std::to_string(n) +
        " below the baseline requirement t = " + std::to_string(t) +
        " (the subset-size theory bound would ask for about " +
        std::to_string(static_cast<int64_t>(result.n_min_theory)) +
        " samples)");
  }

  TukeyTarget target(s, options.grid_config, options.domain_cap);
  OptimizerConfig config;
  config.alpha = alpha_in;
  config.beta = beta_in;
  config.privacy = per_step;
  config.t = t;
  result.point = IpConcaveHighDim(target, config, rng, &result.ledger,
                                  &result.trace);
  result.depth = TukeyDepth(s, result.point);
  return result;
}

}  // namespace dpqc
