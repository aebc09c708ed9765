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
// Exact plane geometry over integer sites and rational query points. All
// predicates are exact: integer/128-bit arithmetic on the fast path, GMP on
// the fallback path. No floating point is used anywhere in this module.

#ifndef DPQC_GEOMETRY_H_
#define DPQC_GEOMETRY_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dpqc/grid.h"
#include "dpqc/rational.h"

namespace dpqc {

struct IVec2 {
  int64_t x = 0, y = 0;
  friend bool operator==(const IVec2&, const IVec2&) = default;
};

// Integer site with a multiplicity.
struct WeightedSite2 {
  int64_t x = 0, y = 0;
  int64_t w = 1;
};

struct RatPoint2 {
  Rational x, y;
  friend bool operator==(const RatPoint2& a, const RatPoint2& b) {
    return a.x == b.x && a.y == b.y;
  }
  friend bool operator<(const RatPoint2& a, const RatPoint2& b) {
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
  }
};

// Query point with int64 numerator/denominator fast fields. `fits` is false
// when the exact coordinates exceed int64, in which case only `slow` is valid.
struct QueryPoint2 {
  int64_t sx = 0, tx = 1, sy = 0, ty = 1;
  bool fits = true;
  RatPoint2 slow;

  static QueryPoint2 Make(const Rational& x, const Rational& y);
};

// Closed-halfplane Tukey depth of a rational point among weighted integer
// sites: min over nonzero directions v of sum of weights with
// <v, site - q> >= 0. O(k log k) rotating order per query.
int64_t WeightedTukeyDepth2(std::span<const WeightedSite2> sites,
                            const Rational& qx, const Rational& qy);

// Independent quadratic check of the same quantity: enumerates every contact
// normal and every arc between consecutive contacts and counts directly.
int64_t WeightedTukeyDepth2Brute(std::span<const WeightedSite2> sites,
                                 const Rational& qx, const Rational& qy);

// Closed-halfspace Tukey depth in three dimensions via candidate normals
// spanned by pairs of sites, with exact resolution of points on the
// candidate plane through a 2-D subproblem. Intended for small inputs.
struct WeightedSite3 {
  int64_t x = 0, y = 0, z = 0;
  int64_t w = 1;
};
int64_t WeightedTukeyDepth3(std::span<const WeightedSite3> sites,
                            const Rational& qx, const Rational& qy,
                            const Rational& qz);

// Line a x + b y = c with integer coefficients in canonical form:
// gcd(a, b, c) = 1 and the first nonzero of (a, b) positive.
struct Line2 {
  int64_t a = 0, b = 0, c = 0;
  friend bool operator==(const Line2&, const Line2&) = default;
  friend bool operator<(const Line2& p, const Line2& q) {
    if (p.a != q.a) return p.a < q.a;
    if (p.b != q.b) return p.b < q.b;
    return p.c < q.c;
  }
};

// Canonicalizes (a, b, c); throws ParameterError when a == b == 0.
Line2 MakeLine2(int64_t a, int64_t b, int64_t c);

// The canonical line through two distinct integer points.
Line2 LineThroughPoints(IVec2 p, IVec2 q);

// sign(a x + b y - c) at a rational point.
int SideOfLine(const Line2& line, const QueryPoint2& p);

// Intersection point unless the lines are parallel or identical.
std::optional<RatPoint2> IntersectLines(const Line2& p, const Line2& q);

// A closed convex cone at the origin with integer direction generators.
class Cone2 {
 public:
  enum class Kind { kZero, kRay, kLine, kWedge, kHalf, kFull };

  static Cone2 Zero() { return Cone2(Kind::kZero, {}, {}); }
  static Cone2 Full() { return Cone2(Kind::kFull, {}, {}); }
  static Cone2 Ray(IVec2 d) { return Cone2(Kind::kRay, d, {}); }
  static Cone2 LineCone(IVec2 d) { return Cone2(Kind::kLine, d, {}); }
  // Counterclockwise wedge from d1 to d2; angle strictly in (0, pi).
  static Cone2 Wedge(IVec2 d1, IVec2 d2) { return Cone2(Kind::kWedge, d1, d2); }
  // Halfplane {u : cross(d, u) >= 0}.
  static Cone2 Half(IVec2 d) { return Cone2(Kind::kHalf, d, {}); }

  Kind kind() const { return kind_; }
  IVec2 d1() const { return d1_; }
  IVec2 d2() const { return d2_; }
  bool IsZero() const { return kind_ == Kind::kZero; }

  // Intersection with the closed halfplane {u : <n, u> >= 0}.
  Cone2 IntersectHalfplane(IVec2 n) const;

  bool ContainsDir(IVec2 u) const;

  // Direction generators whose conical hull reproduces this cone.
  std::vector<IVec2> Generators() const;

 private:
  Cone2(Kind kind, IVec2 d1, IVec2 d2) : kind_(kind), d1_(d1), d2_(d2) {}
  Kind kind_;
  IVec2 d1_, d2_;
};

// Smallest closed convex cone containing every listed direction.
Cone2 ConicalHull(std::span<const IVec2> dirs);

// conv(points) + cone(recession): a closed convex region with exact
// containment queries. Hull edges are cached as integer lines so queries on
// int64-representable points run without GMP.
class ConvexRegion {
 public:
  ConvexRegion() : cone_(Cone2::Zero()) {}
  static ConvexRegion FromGenerators(std::vector<RatPoint2> points,
                                     Cone2 cone);

  bool Empty() const { return hull_.empty(); }
  bool Contains(const QueryPoint2& q) const;
  const std::vector<RatPoint2>& hull() const { return hull_; }
  const Cone2& cone() const { return cone_; }

 private:
  std::vector<RatPoint2> hull_;  // counterclockwise, no collinear interior
  Cone2 cone_;
  // Edge i joins hull_[i] to hull_[i+1 mod size]; int64 line coefficients
  // with the interior on the >= side, when representable.
  struct EdgeLine {
    int64_t a, b, c;
    bool fits;
  };
  std::vector<EdgeLine> edges_;
  bool PointInHull(const QueryPoint2& q) const;
};

// Counterclockwise convex hull (monotone chain), collinear points dropped.
std::vector<RatPoint2> ConvexHullPoints(std::vector<RatPoint2> points);

// One representative per vertex, edge and open cell of the arrangement of a
// set of lines, with exact recession cones for unbounded strata. Distinct
// sign patterns identify cells.
struct ArrangementStrata {
  struct Stratum {
    RatPoint2 rep;
    int dim;         // 0 vertex, 1 edge, 2 cell
    Cone2 recession; // recession cone of the stratum's closure
  };
  std::vector<Line2> lines;
  std::vector<Stratum> strata;
  int64_t CellCount() const;
  std::vector<RatPoint2> Probes() const;
};

ArrangementStrata BuildArrangementStrata(std::vector<Line2> lines,
                                         int64_t max_vertices = 2000000);

}  // namespace dpqc

#endif  // DPQC_GEOMETRY_H_
