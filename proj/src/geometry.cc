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

#include "dpqc/geometry.h"

#include <algorithm>
#include <map>
#include <numeric>

#include "dpqc/error.h"

namespace dpqc {
namespace {

using int128 = __int128;

int SignOf(int128 v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }
int SignOf(const mpz_class& v) { return sgn(v); }

int64_t GcdI64(int64_t a, int64_t b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b) {
    const int64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// ---------------------------------------------------------------------------
// Direction vectors over int64 (fast) or mpz (exact fallback).

struct VecI {
  int64_t x, y;
};
struct VecZ {
  mpz_class x, y;
};

int CrossSign(const VecI& a, const VecI& b) {
  return SignOf(static_cast<int128>(a.x) * b.y - static_cast<int128>(a.y) * b.x);
}
int DotSign(const VecI& a, const VecI& b) {
  return SignOf(static_cast<int128>(a.x) * b.x + static_cast<int128>(a.y) * b.y);
}
int CrossSign(const VecZ& a, const VecZ& b) {
  return SignOf(mpz_class(a.x * b.y - a.y * b.x));
}
int DotSign(const VecZ& a, const VecZ& b) {
  return SignOf(mpz_class(a.x * b.x + a.y * b.y));
}
VecI Rot90(const VecI& v) { return VecI{-v.y, v.x}; }
VecZ Rot90(const VecZ& v) { return VecZ{mpz_class(-v.y), v.x}; }
VecI Neg(const VecI& v) { return VecI{-v.x, -v.y}; }
VecZ Neg(const VecZ& v) { return VecZ{mpz_class(-v.x), mpz_class(-v.y)}; }
VecI Add(const VecI& a, const VecI& b) { return VecI{a.x + b.x, a.y + b.y}; }
VecZ Add(const VecZ& a, const VecZ& b) {
  return VecZ{mpz_class(a.x + b.x), mpz_class(a.y + b.y)};
}
bool IsZeroVec(const VecI& v) { return v.x == 0 && v.y == 0; }
bool IsZeroVec(const VecZ& v) { return v.x == 0 && v.y == 0; }

// Angle class: [0, pi) is half 0, [pi, 2pi) is half 1.
template <typename V>
int Half(const V& v) {
  const int ys = SignOf(v.y);
  if (ys > 0 || (ys == 0 && SignOf(v.x) > 0)) return 0;
  return 1;
}

template <typename V>
bool AngleLess(const V& a, const V& b) {
  const int ha = Half(a), hb = Half(b);
  if (ha != hb) return ha < hb;
  return CrossSign(a, b) > 0;
}

template <typename V>
bool SameDirection(const V& a, const V& b) {
  return CrossSign(a, b) == 0 && DotSign(a, b) > 0;
}

// Minimum, over directions v != 0, of the weight of {u : <v, u> >= 0}.
// Directions u are nonzero. Exact for every input.
template <typename V>
int64_t MinClosedHalfplaneWeight(std::vector<std::pair<V, int64_t>> dirs) {
  if (dirs.empty()) return 0;
  std::sort(dirs.begin(), dirs.end(),
            [](const auto& a, const auto& b) { return AngleLess(a.first, b.first); });
  // Merge equal directions.
  std::vector<std::pair<V, int64_t>> merged;
  for (auto& d : dirs) {
    if (!merged.empty() && SameDirection(merged.back().first, d.first)) {
      merged.back().second += d.second;
    } else {
      merged.push_back(d);
    }
  }
  const size_t q = merged.size();
  std::vector<int64_t> prefix(q + 1, 0);
  for (size_t i = 0; i < q; ++i) prefix[i + 1] = prefix[i] + merged[i].second;
  const int64_t total = prefix[q];

  auto first_at_or_after = [&](const V& w) -> size_t {
    // First index whose angle is >= angle(w).
    size_t lo = 0, hi = q;
    while (lo < hi) {
      const size_t mid = (lo + hi) / 2;
      if (AngleLess(merged[mid].first, w)) {
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    return lo;
  };
  auto first_after = [&](const V& w) -> size_t {
    size_t lo = 0, hi = q;
    while (lo < hi) {
      const size_t mid = (lo + hi) / 2;
      if (AngleLess(w, merged[mid].first)) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    return lo;
  };

  auto window_weight = [&](const V& v) -> int64_t {
    // {u : <v, u> >= 0} is the closed angular window from rot(-90) v to
    // rot(+90) v.
    const V w1{Rot90(Neg(v))};
    const V w2{Rot90(v)};
    const size_t i1 = first_at_or_after(w1);
    const size_t i2 = first_after(w2);
    if (AngleLess(w1, w2)) {
      return i2 >= i1 ? prefix[i2] - prefix[i1] : 0;
    }
    // Window wraps past angle 0.
    return (total - prefix[i1]) + prefix[i2];
  };

  // Candidate normals: every direction's two perpendiculars, plus one
  // representative inside each arc between consecutive candidates (counts
  // between contacts can dip below every contact count).
  std::vector<V> candidates;
  candidates.reserve(2 * q);
  for (const auto& d : merged) {
    candidates.push_back(Rot90(d.first));
    candidates.push_back(Rot90(Neg(d.first)));
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const V& a, const V& b) { return AngleLess(a, b); });
  candidates.erase(
      std::unique(candidates.begin(), candidates.end(),
                  [](const V& a, const V& b) { return SameDirection(a, b); }),
      candidates.end());

  int64_t best = total;
  const size_t m = candidates.size();
  for (size_t i = 0; i < m; ++i) {
    best = std::min(best, window_weight(candidates[i]));
    const V& a = candidates[i];
    const V& b = candidates[(i + 1) % m];
    V rep = Add(a, b);
    if (IsZeroVec(rep)) rep = Rot90(a);
    best = std::min(best, window_weight(rep));
    if (best == 0) break;
  }
  return best;
}

// Independent quadratic route: a sufficient candidate superset with direct
// counting, no sorting or prefix structure.
template <typename V>
int64_t MinClosedHalfplaneWeightBrute(
    const std::vector<std::pair<V, int64_t>>& dirs) {
  if (dirs.empty()) return 0;
  std::vector<V> candidates;
  const size_t k = dirs.size();
  for (size_t i = 0; i < k; ++i) {
    const V& u = dirs[i].first;
    candidates.push_back(u);
    candidates.push_back(Neg(u));
    candidates.push_back(Rot90(u));
    candidates.push_back(Rot90(Neg(u)));
    for (size_t j = i + 1; j < k; ++j) {
      const V sum = Add(u, dirs[j].first);
      const V dif = Add(u, Neg(dirs[j].first));
      if (!IsZeroVec(sum)) {
        candidates.push_back(Rot90(sum));
        candidates.push_back(Rot90(Neg(sum)));
      }
      if (!IsZeroVec(dif)) {
        candidates.push_back(Rot90(dif));
        candidates.push_back(Rot90(Neg(dif)));
      }
    }
  }
  int64_t best = 0;
  for (const auto& d : dirs) best += d.second;
  for (const V& v : candidates) {
    int64_t count = 0;
    for (const auto& d : dirs) {
      if (DotSign(v, d.first) >= 0) count += d.second;
    }
    best = std::min(best, count);
  }
  return best;
}

constexpr int64_t kFastAbsCap = int64_t{1} << 60;

// Builds scaled integer offsets (site - q) when the magnitudes allow the
// int64/int128 path; falls back to mpz otherwise.
bool BuildOffsetsFast(std::span<const WeightedSite2> sites,
                      const QueryPoint2& q,
                      std::vector<std::pair<VecI, int64_t>>* out,
                      int64_t* zero_weight) {
  if (!q.fits) return false;
  const int128 l = static_cast<int128>(q.tx) / GcdI64(q.tx, q.ty) *
                   static_cast<int128>(q.ty);
  if (l > (int64_t{1} << 44)) return false;
  const int64_t lcm = static_cast<int64_t>(l);
  const int64_t mx = lcm / q.tx;
  const int64_t my = lcm / q.ty;
  out->clear();
  *zero_weight = 0;
  for (const WeightedSite2& s : sites) {
    const int128 ux = static_cast<int128>(s.x) * lcm -
                      static_cast<int128>(q.sx) * mx;
    const int128 uy = static_cast<int128>(s.y) * lcm -
                      static_cast<int128>(q.sy) * my;
    if (ux > kFastAbsCap || ux < -kFastAbsCap || uy > kFastAbsCap ||
        uy < -kFastAbsCap) {
      return false;
    }
    if (ux == 0 && uy == 0) {
      *zero_weight += s.w;
    } else {
      out->push_back({VecI{static_cast<int64_t>(ux), static_cast<int64_t>(uy)},
                      s.w});
    }
  }
  return true;
}

void BuildOffsetsExact(std::span<const WeightedSite2> sites, const Rational& qx,
                       const Rational& qy,
                       std::vector<std::pair<VecZ, int64_t>>* out,
                       int64_t* zero_weight) {
  const mpz_class tx = qx.den(), ty = qy.den();
  mpz_class lcm;
  mpz_lcm(lcm.get_mpz_t(), tx.get_mpz_t(), ty.get_mpz_t());
  const mpz_class mx = lcm / tx, my = lcm / ty;
  out->clear();
  *zero_weight = 0;
  for (const WeightedSite2& s : sites) {
    mpz_class ux = s.x * lcm - qx.num() * mx;
    mpz_class uy = s.y * lcm - qy.num() * my;
    if (ux == 0 && uy == 0) {
      *zero_weight += s.w;
    } else {
      out->push_back({VecZ{std::move(ux), std::move(uy)}, s.w});
    }
  }
}

}  // namespace

QueryPoint2 QueryPoint2::Make(const Rational& x, const Rational& y) {
  QueryPoint2 q;
  q.slow = RatPoint2{x, y};
  if (x.FitsInt64() && y.FitsInt64()) {
    q.sx = x.NumI64();
    q.tx = x.DenI64();
    q.sy = y.NumI64();
    q.ty = y.DenI64();
    q.fits = true;
  } else {
    q.fits = false;
  }
  return q;
}

int64_t WeightedTukeyDepth2(std::span<const WeightedSite2> sites,
                            const Rational& qx, const Rational& qy) {
  const QueryPoint2 q = QueryPoint2::Make(qx, qy);
  std::vector<std::pair<VecI, int64_t>> fast;
  int64_t zeros = 0;
  if (BuildOffsetsFast(sites, q, &fast, &zeros)) {
    return zeros + MinClosedHalfplaneWeight(std::move(fast));
  }
  std::vector<std::pair<VecZ, int64_t>> exact;
  BuildOffsetsExact(sites, qx, qy, &exact, &zeros);
  return zeros + MinClosedHalfplaneWeight(std::move(exact));
}

int64_t WeightedTukeyDepth2Brute(std::span<const WeightedSite2> sites,
                                 const Rational& qx, const Rational& qy) {
  std::vector<std::pair<VecZ, int64_t>> exact;
  int64_t zeros = 0;
  BuildOffsetsExact(sites, qx, qy, &exact, &zeros);
  return zeros + MinClosedHalfplaneWeightBrute(exact);
}

// ---------------------------------------------------------------------------
// Three dimensions.

namespace {

struct Vec3Z {
  mpz_class x, y, z;
};

Vec3Z Cross3(const Vec3Z& a, const Vec3Z& b) {
  return Vec3Z{mpz_class(a.y * b.z - a.z * b.y),
               mpz_class(a.z * b.x - a.x * b.z),
               mpz_class(a.x * b.y - a.y * b.x)};
}
mpz_class Dot3(const Vec3Z& a, const Vec3Z& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}
bool IsZero3(const Vec3Z& v) { return v.x == 0 && v.y == 0 && v.z == 0; }

}  // namespace

int64_t WeightedTukeyDepth3(std::span<const WeightedSite3> sites,
                            const Rational& qx, const Rational& qy,
                            const Rational& qz) {
  mpz_class lcm;
  mpz_lcm(lcm.get_mpz_t(), qx.den().get_mpz_t(), qy.den().get_mpz_t());
  mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), qz.den().get_mpz_t());
  const mpz_class mx = lcm / qx.den(), my = lcm / qy.den(), mz = lcm / qz.den();

  int64_t zeros = 0;
  std::vector<std::pair<Vec3Z, int64_t>> u;
  for (const WeightedSite3& s : sites) {
    Vec3Z v{mpz_class(s.x * lcm - qx.num() * mx),
            mpz_class(s.y * lcm - qy.num() * my),
            mpz_class(s.z * lcm - qz.num() * mz)};
    if (IsZero3(v)) {
      zeros += s.w;
    } else {
      u.push_back({std::move(v), s.w});
    }
  }
  if (u.empty()) return zeros;

  // Planes through q worth checking contain two independent offsets.
  bool found_pair = false;
  int64_t best = 0;
  for (const auto& d : u) best += d.second;

  for (size_t i = 0; i < u.size(); ++i) {
    for (size_t j = i + 1; j < u.size(); ++j) {
      const Vec3Z v = Cross3(u[i].first, u[j].first);
      if (IsZero3(v)) continue;
      found_pair = true;
      // Split against the candidate plane; resolve the on-plane offsets by a
      // 2-D subproblem in any linear basis of the plane.
      int64_t strictly_pos = 0, strictly_neg = 0;
      std::vector<std::pair<VecZ, int64_t>> on_plane;
      Vec3Z e1 = u[i].first;  // lies in the plane, nonzero
      Vec3Z e2 = Cross3(v, e1);
      for (const auto& d : u) {
        const int s = SignOf(Dot3(v, d.first));
        if (s > 0) {
          strictly_pos += d.second;
        } else if (s < 0) {
          strictly_neg += d.second;
        } else {
          on_plane.push_back(
              {VecZ{Dot3(d.first, e1), Dot3(d.first, e2)}, d.second});
        }
      }
      const int64_t planar = MinClosedHalfplaneWeight(on_plane);
      best = std::min(best, std::min(strictly_pos, strictly_neg) + planar);
    }
  }
  if (!found_pair) {
    // All offsets collinear: a generic plane splits them by the sign of the
    // parameter along the common direction.
    const Vec3Z& d0 = u[0].first;
    int64_t pos = 0, neg = 0;
    for (const auto& d : u) {
      if (SignOf(Dot3(d.first, d0)) > 0) {
        pos += d.second;
      } else {
        neg += d.second;
      }
    }
    best = std::min(pos, neg);
  }
  return zeros + best;
}

// ---------------------------------------------------------------------------
// Lines.

Line2 MakeLine2(int64_t a, int64_t b, int64_t c) {
  if (a == 0 && b == 0) throw ParameterError("MakeLine2: degenerate line");
  int64_t g = GcdI64(GcdI64(a, b), c);
  if (g == 0) g = 1;
  a /= g;
  b /= g;
  c /= g;
  const bool flip = a < 0 || (a == 0 && b < 0);
  if (flip) {
    a = -a;
    b = -b;
    c = -c;
  }
  return Line2{a, b, c};
}

Line2 LineThroughPoints(IVec2 p, IVec2 q) {
  if (p == q) throw ParameterError("LineThroughPoints: equal points");
  const int64_t a = q.y - p.y;
  const int64_t b = p.x - q.x;
  const int64_t c = a * p.x + b * p.y;
  return MakeLine2(a, b, c);
}

int SideOfLine(const Line2& line, const QueryPoint2& p) {
  constexpr int64_t kCoefCap = int64_t{1} << 40;
  constexpr int64_t kNumCap = int64_t{1} << 40;
  constexpr int64_t kDenCap = int64_t{1} << 30;
  if (p.fits && std::abs(line.a) < kCoefCap && std::abs(line.b) < kCoefCap &&
      std::abs(line.c) < kCoefCap && std::abs(p.sx) < kNumCap &&
      std::abs(p.sy) < kNumCap && p.tx < kDenCap && p.ty < kDenCap) {
    const int128 v = static_cast<int128>(line.a) * p.sx * p.ty +
                     static_cast<int128>(line.b) * p.sy * p.tx -
                     static_cast<int128>(line.c) * p.tx * p.ty;
    return SignOf(v);
  }
  const Rational v = Rational(line.a) * p.slow.x + Rational(line.b) * p.slow.y -
                     Rational(line.c);
  return v.Sign();
}

std::optional<RatPoint2> IntersectLines(const Line2& p, const Line2& q) {
  const int128 det = static_cast<int128>(p.a) * q.b - static_cast<int128>(p.b) * q.a;
  if (det == 0) return std::nullopt;
  // Cramer with mpz to avoid overflow concerns.
  const mpz_class d = mpz_class(p.a) * q.b - mpz_class(p.b) * q.a;
  const mpz_class xn = mpz_class(p.c) * q.b - mpz_class(p.b) * q.c;
  const mpz_class yn = mpz_class(p.a) * q.c - mpz_class(p.c) * q.a;
  return RatPoint2{Rational(xn, d), Rational(yn, d)};
}

// ---------------------------------------------------------------------------
// Cones.

namespace {
int CrossSignI(IVec2 a, IVec2 b) {
  return SignOf(static_cast<int128>(a.x) * b.y - static_cast<int128>(a.y) * b.x);
}
int DotSignI(IVec2 a, IVec2 b) {
  return SignOf(static_cast<int128>(a.x) * b.x + static_cast<int128>(a.y) * b.y);
}
IVec2 Rot90I(IVec2 v) { return IVec2{-v.y, v.x}; }
IVec2 NegI(IVec2 v) { return IVec2{-v.x, -v.y}; }
IVec2 ReduceDir(IVec2 v) {
  const int64_t g = GcdI64(v.x, v.y);
  return g > 1 ? IVec2{v.x / g, v.y / g} : v;
}
}  // namespace

bool Cone2::ContainsDir(IVec2 u) const {
  if (u.x == 0 && u.y == 0) return true;
  switch (kind_) {
    case Kind::kZero:
      return false;
    case Kind::kFull:
      return true;
    case Kind::kRay:
      return CrossSignI(d1_, u) == 0 && DotSignI(d1_, u) > 0;
    case Kind::kLine:
      return CrossSignI(d1_, u) == 0;
    case Kind::kHalf:
      return CrossSignI(d1_, u) >= 0;
    case Kind::kWedge:
      return CrossSignI(d1_, u) >= 0 && CrossSignI(u, d2_) >= 0;
  }
  return false;
}

Cone2 Cone2::IntersectHalfplane(IVec2 n) const {
  switch (kind_) {
    case Kind::kZero:
      return Zero();
    case Kind::kRay:
      return DotSignI(n, d1_) >= 0 ? *this : Zero();
    case Kind::kLine: {
      const int s = DotSignI(n, d1_);
      if (s > 0) return Ray(d1_);
      if (s < 0) return Ray(NegI(d1_));
      return *this;
    }
    case Kind::kFull:
      // {u : <n, u> >= 0} = {u : cross(d, u) >= 0} for d = rot(-90) n.
      return Half(IVec2{n.y, -n.x});
    case Kind::kHalf: {
      const int m1 = DotSignI(n, d1_);
      if (m1 == 0) {
        // Parallel boundaries: same side keeps the halfplane, opposite side
        // leaves only the boundary line.
        return DotSignI(n, Rot90I(d1_)) > 0 ? *this : LineCone(d1_);
      }
      IVec2 r = Rot90I(n);
      if (CrossSignI(d1_, r) < 0) r = NegI(r);
      return m1 > 0 ? Wedge(d1_, r) : Wedge(r, NegI(d1_));
    }
    case Kind::kWedge: {
      const int m1 = DotSignI(n, d1_);
      const int m2 = DotSignI(n, d2_);
      if (m1 >= 0 && m2 >= 0) return *this;
      if (m1 < 0 && m2 < 0) return Zero();
      if (m1 == 0 && m2 < 0) return Ray(d1_);
      if (m2 == 0 && m1 < 0) return Ray(d2_);
      // The halfplane boundary crosses the wedge interior.
      IVec2 r = Rot90I(n);
      if (!(CrossSignI(d1_, r) >= 0 && CrossSignI(r, d2_) >= 0)) r = NegI(r);
      if (m1 > 0) {
        if (CrossSignI(d1_, r) == 0) return Ray(d1_);
        return Wedge(d1_, r);
      }
      if (CrossSignI(r, d2_) == 0) return Ray(d2_);
      return Wedge(r, d2_);
    }
  }
  return Zero();
}

std::vector<IVec2> Cone2::Generators() const {
  switch (kind_) {
    case Kind::kZero:
      return {};
    case Kind::kRay:
      return {d1_};
    case Kind::kLine:
      return {d1_, NegI(d1_)};
    case Kind::kWedge:
      return {d1_, d2_};
    case Kind::kHalf:
      return {d1_, NegI(d1_), Rot90I(d1_)};
    case Kind::kFull:
      return {IVec2{1, 0}, IVec2{-1, 0}, IVec2{0, 1}, IVec2{0, -1}};
  }
  return {};
}

Cone2 ConicalHull(std::span<const IVec2> dirs) {
  std::vector<IVec2> ds;
  for (IVec2 d : dirs) {
    if (d.x == 0 && d.y == 0) continue;
    d = ReduceDir(d);
    bool dup = false;
    for (const IVec2& e : ds) {
      if (e == d) {
        dup = true;
        break;
      }
    }
    if (!dup) ds.push_back(d);
  }
  if (ds.empty()) return Cone2::Zero();
  if (ds.size() == 1) return Cone2::Ray(ds[0]);

  // Try each direction as the clockwise-most boundary of a containing
  // halfplane.
  for (const IVec2& g : ds) {
    bool all_ccw = true;
    for (const IVec2& u : ds) {
      if (CrossSignI(g, u) < 0) {
        all_ccw = false;
        break;
      }
    }
    if (!all_ccw) continue;
    // All directions live in the closed halfplane starting at g; the hull is
    // the minimal wedge from g to the angularly farthest direction.
    auto order_from_g = [&](const IVec2& u) -> int {
      // 0: same direction as g; 1: strictly inside (0, pi); 2: antipodal.
      const int c = CrossSignI(g, u);
      if (c > 0) return 1;
      return DotSignI(g, u) > 0 ? 0 : 2;
    };
    IVec2 end = g;
    bool has_strict_interior = false;
    for (const IVec2& u : ds) {
      if (order_from_g(u) == 1) has_strict_interior = true;
      const int ou = order_from_g(u), oe = order_from_g(end);
      if (ou > oe || (ou == oe && ou == 1 && CrossSignI(end, u) > 0)) end = u;
    }
    if (order_from_g(end) == 0) return Cone2::Ray(g);
    if (order_from_g(end) == 2) {
      return has_strict_interior ? Cone2::Half(g) : Cone2::LineCone(g);
    }
    return Cone2::Wedge(g, end);
  }
  return Cone2::Full();
}

// ---------------------------------------------------------------------------
// Convex hulls and regions.

std::vector<RatPoint2> ConvexHullPoints(std::vector<RatPoint2> points) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  const size_t n = points.size();
  if (n <= 2) return points;
  auto cross = [](const RatPoint2& o, const RatPoint2& a, const RatPoint2& b) {
    return ((a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)).Sign();
  };
  std::vector<RatPoint2> hull(2 * n);
  size_t k = 0;
  for (size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], points[i]) <= 0) --k;
    hull[k++] = points[i];
  }
  for (size_t i = n - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], points[i]) <= 0) --k;
    hull[k++] = points[i];
  }
  hull.resize(k - 1);
  return hull;
}

ConvexRegion ConvexRegion::FromGenerators(std::vector<RatPoint2> points,
                                          Cone2 cone) {
  ConvexRegion r;
  r.cone_ = cone;
  r.hull_ = ConvexHullPoints(std::move(points));
  const size_t n = r.hull_.size();
  if (n >= 2) {
    r.edges_.reserve(n);
    for (size_t i = 0; i < n; ++i) {
      const RatPoint2& p = r.hull_[i];
      const RatPoint2& q = r.hull_[(i + 1) % n];
      if (n == 2 && i == 1) break;  // single segment
      // Interior (left side) satisfies a x + b y >= c.
      const Rational a = p.y - q.y;
      const Rational b = q.x - p.x;
      const Rational c = a * p.x + b * p.y;
      // Clear denominators.
      mpz_class l;
      mpz_lcm(l.get_mpz_t(), a.den().get_mpz_t(), b.den().get_mpz_t());
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.den().get_mpz_t());
      mpz_class ia = a.num() * (l / a.den());
      mpz_class ib = b.num() * (l / b.den());
      mpz_class ic = c.num() * (l / c.den());
      mpz_class g;
      mpz_gcd(g.get_mpz_t(), ia.get_mpz_t(), ib.get_mpz_t());
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), ic.get_mpz_t());
      if (g > 1) {
        ia /= g;
        ib /= g;
        ic /= g;
      }
      EdgeLine e{};
      e.fits = ia.fits_slong_p() && ib.fits_slong_p() && ic.fits_slong_p();
      if (e.fits) {
        e.a = mpz_get_si(ia.get_mpz_t());
        e.b = mpz_get_si(ib.get_mpz_t());
        e.c = mpz_get_si(ic.get_mpz_t());
        const int64_t cap = int64_t{1} << 62;
        if (std::abs(e.a) > cap || std::abs(e.b) > cap || std::abs(e.c) > cap) {
          e.fits = false;
        }
      }
      r.edges_.push_back(e);
    }
  }
  return r;
}

namespace {

Rational CrossR(const RatPoint2& o, const RatPoint2& a, const RatPoint2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Does the ray {origin + t dir : t >= 0} (or full line when `line` is true)
// meet the segment [a, b]?
bool RayMeetsSegment(const RatPoint2& origin, IVec2 dir, const RatPoint2& a,
                     const RatPoint2& b, bool full_line) {
  // Solve origin + t dir = a + s (b - a).
  const Rational dx(dir.x), dy(dir.y);
  const Rational ex = b.x - a.x, ey = b.y - a.y;
  const Rational det = dx * ey - dy * ex;
  const Rational rx = a.x - origin.x, ry = a.y - origin.y;
  if (det.IsZero()) {
    // Parallel: meets only if collinear, then check parameter overlap.
    const Rational c = rx * dy - ry * dx;
    if (!c.IsZero()) return false;
    // Project endpoints on dir.
    const Rational ta = rx * dx + ry * dy;
    const Rational tb = (b.x - origin.x) * dx + (b.y - origin.y) * dy;
    if (full_line) return true;
    return ta >= Rational(0) || tb >= Rational(0);
  }
  // t = (rx ey - ry ex) / det, s = (rx dy - ry dx) / det ... derive via Cramer.
  const Rational t_num = rx * ey - ry * ex;
  const Rational s_num = rx * dy - ry * dx;
  const Rational t = t_num / det;
  const Rational s = s_num / det;
  if (s < Rational(0) || s > Rational(1)) return false;
  if (full_line) return true;
  return t >= Rational(0);
}

}  // namespace

bool ConvexRegion::PointInHull(const QueryPoint2& q) const {
  const size_t n = hull_.size();
  if (n == 0) return false;
  if (n == 1) return hull_[0].x == q.slow.x && hull_[0].y == q.slow.y;
  if (n == 2) {
    const Rational c = CrossR(hull_[0], hull_[1], q.slow);
    if (!c.IsZero()) return false;
    const Rational d = (q.slow.x - hull_[0].x) * (hull_[1].x - hull_[0].x) +
                       (q.slow.y - hull_[0].y) * (hull_[1].y - hull_[0].y);
    const Rational len = (hull_[1].x - hull_[0].x) * (hull_[1].x - hull_[0].x) +
                         (hull_[1].y - hull_[0].y) * (hull_[1].y - hull_[0].y);
    return d >= Rational(0) && d <= len;
  }
  for (size_t i = 0; i < edges_.size(); ++i) {
    const EdgeLine& e = edges_[i];
    if (e.fits) {
      const Line2 line{e.a, e.b, e.c};
      if (SideOfLine(line, q) < 0) return false;
    } else {
      const RatPoint2& p0 = hull_[i];
      const RatPoint2& p1 = hull_[(i + 1) % n];
      if (CrossR(p0, p1, q.slow).Sign() < 0) return false;
    }
  }
  return true;
}

bool ConvexRegion::Contains(const QueryPoint2& q) const {
  if (hull_.empty()) return false;
  switch (cone_.kind()) {
    case Cone2::Kind::kZero:
      return PointInHull(q);
    case Cone2::Kind::kFull:
      return true;
    case Cone2::Kind::kHalf: {
      // q in P + {u : cross(d, u) >= 0}  iff  cross(d, q) >= min_P cross(d, p).
      const Rational dq = Rational(cone_.d1().x) * q.slow.y -
                          Rational(cone_.d1().y) * q.slow.x;
      for (const RatPoint2& v : hull_) {
        const Rational dv =
            Rational(cone_.d1().x) * v.y - Rational(cone_.d1().y) * v.x;
        if (dq >= dv) return true;
      }
      return false;
    }
    case Cone2::Kind::kRay:
    case Cone2::Kind::kLine: {
      if (PointInHull(q)) return true;
      const bool full_line = cone_.kind() == Cone2::Kind::kLine;
      const IVec2 d = NegI(cone_.d1());
      const size_t n = hull_.size();
      if (n == 1) {
        return RayMeetsSegment(q.slow, d, hull_[0], hull_[0], full_line);
      }
      const size_t edge_count = n == 2 ? 1 : n;
      for (size_t i = 0; i < edge_count; ++i) {
        if (RayMeetsSegment(q.slow, d, hull_[i], hull_[(i + 1) % n],
                            full_line)) {
          return true;
        }
      }
      return false;
    }
    case Cone2::Kind::kWedge: {
      if (PointInHull(q)) return true;
      const IVec2 d1 = cone_.d1(), d2 = cone_.d2();
      // Any hull vertex inside q + cone(-d1, -d2)?
      for (const RatPoint2& v : hull_) {
        const Rational wx = q.slow.x - v.x;  // = -(v - q)
        const Rational wy = q.slow.y - v.y;
        // v - q = a (-d1) + b (-d2)  <=>  w = a d1 + b d2 for w = q - v.
        const Rational det = Rational(d1.x) * d2.y - Rational(d1.y) * d2.x;
        const Rational a_num = wx * Rational(d2.y) - wy * Rational(d2.x);
        const Rational b_num = Rational(d1.x) * wy - Rational(d1.y) * wx;
        if (det.Sign() > 0 ? (a_num.Sign() >= 0 && b_num.Sign() >= 0)
                           : (a_num.Sign() <= 0 && b_num.Sign() <= 0)) {
          return true;
        }
      }
      const size_t n = hull_.size();
      const size_t edge_count = n == 1 ? 0 : (n == 2 ? 1 : n);
      for (const IVec2 d : {NegI(d1), NegI(d2)}) {
        for (size_t i = 0; i < edge_count; ++i) {
          if (RayMeetsSegment(q.slow, d, hull_[i], hull_[(i + 1) % n], false)) {
            return true;
          }
        }
        if (n == 1 && RayMeetsSegment(q.slow, d, hull_[0], hull_[0], false)) {
          return true;
        }
      }
      return false;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Arrangements.

int64_t ArrangementStrata::CellCount() const {
  int64_t cells = 0;
  for (const Stratum& s : strata) {
    if (s.dim == 2) ++cells;
  }
  return cells;
}

std::vector<RatPoint2> ArrangementStrata::Probes() const {
  std::vector<RatPoint2> out;
  out.reserve(strata.size());
  for (const Stratum& s : strata) out.push_back(s.rep);
  return out;
}

ArrangementStrata BuildArrangementStrata(std::vector<Line2> lines,
                                         int64_t max_vertices) {
  std::sort(lines.begin(), lines.end());
  lines.erase(std::unique(lines.begin(), lines.end()), lines.end());
  ArrangementStrata arr;
  arr.lines = lines;
  const size_t l = lines.size();

  if (l == 0) {
    arr.strata.push_back(
        {RatPoint2{Rational(0), Rational(0)}, 2, Cone2::Full()});
    return arr;
  }
  if (static_cast<int64_t>(l) * static_cast<int64_t>(l) > 2 * max_vertices) {
    throw ParameterError("BuildArrangementStrata: too many lines");
  }

  // Vertices.
  std::vector<RatPoint2> vertices;
  for (size_t i = 0; i < l; ++i) {
    for (size_t j = i + 1; j < l; ++j) {
      if (auto p = IntersectLines(lines[i], lines[j])) vertices.push_back(*p);
    }
  }
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  if (static_cast<int64_t>(vertices.size()) > max_vertices) {
    throw ParameterError("BuildArrangementStrata: vertex cap exceeded");
  }
  for (const RatPoint2& v : vertices) {
    arr.strata.push_back({v, 0, Cone2::Zero()});
  }

  auto side_of = [&](const Line2& line, const RatPoint2& p) {
    return SideOfLine(line, QueryPoint2::Make(p.x, p.y));
  };

  // Edges per line, plus cell witnesses off each edge.
  struct EdgeRep {
    RatPoint2 rep;
    Cone2 recession;
    size_t line;
  };
  std::vector<EdgeRep> edge_reps;
  for (size_t li = 0; li < l; ++li) {
    const Line2& line = lines[li];
    const IVec2 dir{-line.b, line.a};
    std::vector<RatPoint2> on_line;
    for (const RatPoint2& v : vertices) {
      if (side_of(line, v) == 0) on_line.push_back(v);
    }
    const Rational dx(dir.x), dy(dir.y);
    std::sort(on_line.begin(), on_line.end(),
              [&](const RatPoint2& a, const RatPoint2& b) {
                return a.x * dx + a.y * dy < b.x * dx + b.y * dy;
              });
    if (on_line.empty()) {
      RatPoint2 anchor;
      if (line.b != 0) {
        anchor = RatPoint2{Rational(0), Rational(line.c, line.b)};
      } else {
        anchor = RatPoint2{Rational(line.c, line.a), Rational(0)};
      }
      edge_reps.push_back({anchor, Cone2::LineCone(dir), li});
      continue;
    }
    const Rational half(1, 2);
    for (size_t i = 0; i + 1 < on_line.size(); ++i) {
      RatPoint2 mid{(on_line[i].x + on_line[i + 1].x) * half,
                    (on_line[i].y + on_line[i + 1].y) * half};
      edge_reps.push_back({mid, Cone2::Zero(), li});
    }
    edge_reps.push_back({RatPoint2{on_line.front().x - dx, on_line.front().y - dy},
                         Cone2::Ray(NegI(dir)), li});
    edge_reps.push_back({RatPoint2{on_line.back().x + dx, on_line.back().y + dy},
                         Cone2::Ray(dir), li});
  }
  for (const EdgeRep& e : edge_reps) {
    arr.strata.push_back({e.rep, 1, e.recession});
  }

  // Cells: offset each edge representative to both sides, shrinking the
  // offset until only the defining line's sign flips. Deduplicate cells by
  // their sign vectors.
  std::map<std::vector<int8_t>, bool> seen_cells;
  for (const EdgeRep& e : edge_reps) {
    std::vector<int8_t> base(l);
    for (size_t li = 0; li < l; ++li) {
      base[li] = static_cast<int8_t>(side_of(lines[li], e.rep));
    }
    for (const int orient : {+1, -1}) {
      const Line2& line = lines[e.line];
      Rational step(orient, 2);
      RatPoint2 witness;
      bool found = false;
      for (int attempt = 0; attempt < 128 && !found; ++attempt) {
        witness = RatPoint2{e.rep.x + Rational(line.a) * step,
                            e.rep.y + Rational(line.b) * step};
        found = true;
        for (size_t li = 0; li < l && found; ++li) {
          const int s = side_of(lines[li], witness);
          found = li == e.line ? s == orient : s == base[li];
        }
        step = step * Rational(1, 2);
      }
      if (!found) {
        throw DegeneracyError(
            "BuildArrangementStrata: cell witness search failed");
      }
      std::vector<int8_t> signs(l);
      for (size_t li = 0; li < l; ++li) {
        signs[li] = static_cast<int8_t>(side_of(lines[li], witness));
      }
      if (seen_cells.emplace(signs, true).second) {
        Cone2 cone = Cone2::Full();
        for (size_t li = 0; li < l; ++li) {
          const IVec2 normal{lines[li].a, lines[li].b};
          cone = cone.IntersectHalfplane(signs[li] > 0 ? normal : NegI(normal));
        }
        arr.strata.push_back({witness, 2, cone});
      }
    }
  }
  return arr;
}

}  // namespace dpqc
