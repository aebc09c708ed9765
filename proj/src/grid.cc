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

#include "dpqc/grid.h"

#include <algorithm>
#include <queue>
#include <vector>

#include "dpqc/error.h"

namespace dpqc {
namespace {

constexpr int64_t kSieveCap = int64_t{1} << 23;
constexpr int64_t kEnumerateCap = int64_t{1} << 20;
constexpr int64_t kRangeSweepCap = int64_t{1} << 20;

mpz_class Factorial(int n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
  return f;
}

mpz_class Pow(const mpz_class& base, unsigned long e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

// Smallest-prime-factor sieve for exact coprime counting.
std::vector<int32_t> SpfSieve(int64_t n) {
  std::vector<int32_t> spf(static_cast<size_t>(n) + 1, 0);
  for (int64_t i = 2; i <= n; ++i) {
    if (spf[i] == 0) {
      for (int64_t j = i; j <= n; j += i) {
        if (spf[j] == 0) spf[j] = static_cast<int32_t>(i);
      }
    }
  }
  return spf;
}

// floor(lo * t) and ceil(lo * t) for rational lo.
mpz_class CeilTimes(const Rational& x, const mpz_class& t) {
  mpz_class q;
  mpz_class num = x.num() * t;
  mpz_cdiv_q(q.get_mpz_t(), num.get_mpz_t(), x.den().get_mpz_t());
  return q;
}
}  // namespace

RationalGrid::RationalGrid(mpz_class s_max, mpz_class t_max)
    : s_max_(std::move(s_max)), t_max_(std::move(t_max)) {
  if (s_max_ < 1 || t_max_ < 1) {
    throw ParameterError("RationalGrid: bounds must be >= 1");
  }
}

mpz_class RationalGrid::PreDedupBound() const {
  return (2 * s_max_ + 1) * t_max_;
}

mpz_class RationalGrid::DistinctSize() const {
  if (t_max_ > kSieveCap) {
    throw ParameterError("RationalGrid::DistinctSize: t_max too large to sieve");
  }
  const int64_t t_max = mpz_get_si(t_max_.get_mpz_t());
  const std::vector<int32_t> spf = SpfSieve(t_max);
  // Distinct values are exactly the lowest-terms fractions s/t with
  // gcd(|s|, t) = 1, |s| <= s_max, t <= t_max, plus zero.
  mpz_class total = 1;  // zero
  std::vector<int64_t> primes;
  for (int64_t t = 1; t <= t_max; ++t) {
    primes.clear();
    int64_t m = t;
    while (m > 1) {
      const int64_t p = spf[m];
      primes.push_back(p);
      while (m % p == 0) m /= p;
    }
    // Inclusion-exclusion over the distinct primes of t counts
    // #{1 <= s <= s_max : gcd(s, t) = 1}.
    const size_t k = primes.size();
    mpz_class count = 0;
    for (size_t mask = 0; mask < (size_t{1} << k); ++mask) {
      int64_t divisor = 1;
      int sign = 1;
      for (size_t b = 0; b < k; ++b) {
        if (mask & (size_t{1} << b)) {
          divisor *= primes[b];
          sign = -sign;
        }
      }
      mpz_class term = s_max_ / divisor;
      count += sign > 0 ? term : -term;
    }
    total += 2 * count;
  }
  return total;
}

bool RationalGrid::Contains(const Rational& value) const {
  // A value belongs iff its lowest-terms form satisfies both bounds.
  return value.den() <= t_max_ && abs(value.num()) <= s_max_;
}

std::optional<Rational> RationalGrid::SmallestInRange(const Rational& lo,
                                                      const Rational& hi,
                                                      bool open_lo,
                                                      bool open_hi) const {
  if (t_max_ > kRangeSweepCap) {
    throw ParameterError("RationalGrid::SmallestInRange: t_max too large");
  }
  const int64_t t_max = mpz_get_si(t_max_.get_mpz_t());
  std::optional<Rational> best;
  for (int64_t t = 1; t <= t_max; ++t) {
    mpz_class s = CeilTimes(lo, t);
    if (open_lo && s * lo.den() == lo.num() * t) s += 1;
    if (s < -s_max_) s = -s_max_;
    if (s > s_max_) continue;
    const Rational candidate(s, mpz_class(t));
    if (open_hi ? !(candidate < hi) : !(candidate <= hi)) continue;
    if (open_lo && !(lo < candidate)) continue;  // after clamping to -s_max
    if (!best || candidate < *best) best = candidate;
  }
  return best;
}

std::optional<Rational> SimplestRationalInInterval(const Rational& lo,
                                                   const Rational& hi,
                                                   bool open_lo, bool open_hi) {
  if (hi < lo || (lo == hi && (open_lo || open_hi))) return std::nullopt;
  // Straddling zero: zero is the simplest of all.
  const Rational zero(0);
  const bool zero_ok = (open_lo ? lo < zero : lo <= zero) &&
                       (open_hi ? zero < hi : zero <= hi);
  if (zero_ok) return zero;
  if (hi.Sign() <= 0) {
    // Mirror to the positive axis.
    auto r = SimplestRationalInInterval(-hi, -lo, open_hi, open_lo);
    if (!r) return std::nullopt;
    return -*r;
  }
  // 0 < lo <= hi. Walk the continued fraction of the interval.
  // Invariant: the answer is f_0 + 1/(f_1 + 1/(... + 1/x)) with x in the
  // current interval [a, b].
  Rational a = lo, b = hi;
  bool oa = open_lo, ob = open_hi;
  std::vector<mpz_class> terms;
  for (int guard = 0; guard < 4096; ++guard) {
    // Smallest integer admissible in [a, b].
    mpz_class f;
    mpz_cdiv_q(f.get_mpz_t(), a.num().get_mpz_t(), a.den().get_mpz_t());
    if (oa && Rational(f) == a) f += 1;
    const Rational fr(f);
    if (ob ? fr < b : fr <= b) {
      terms.push_back(f);
      // Fold the continued fraction back up.
      Rational value(terms.back());
      for (auto it = terms.rbegin() + 1; it != terms.rend(); ++it) {
        value = Rational(*it) + Rational(1) / value;
      }
      return value;
    }
    // All candidates lie strictly between floor(a) and floor(a) + 1.
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), a.num().get_mpz_t(), a.den().get_mpz_t());
    terms.push_back(fl);
    const Rational frac_a = a - Rational(fl);
    const Rational frac_b = b - Rational(fl);
    // x = fl + 1/y with y in [1/frac_b, 1/frac_a]; openness swaps sides.
    const Rational next_a = Rational(1) / frac_b;
    if (frac_a.IsZero()) {
      // a is an excluded integer: y ranges over [1/frac_b, infinity), whose
      // simplest member is an integer.
      mpz_class y;
      mpz_cdiv_q(y.get_mpz_t(), next_a.num().get_mpz_t(),
                 next_a.den().get_mpz_t());
      if (ob && Rational(y) == next_a) y += 1;
      terms.push_back(y);
      Rational value(terms.back());
      for (auto it = terms.rbegin() + 1; it != terms.rend(); ++it) {
        value = Rational(*it) + Rational(1) / value;
      }
      return value;
    }
    const Rational next_b = Rational(1) / frac_a;
    a = next_a;
    b = next_b;
    std::swap(oa, ob);
  }
  throw ParameterError("SimplestRationalInInterval: no convergence");
}

bool RationalGrid::HasValueIn(const std::optional<Rational>& lo,
                              const std::optional<Rational>& hi, bool open_lo,
                              bool open_hi) const {
  Rational lo_v = lo.value_or(Rational(mpz_class(-s_max_)));
  Rational hi_v = hi.value_or(Rational(s_max_));
  bool lo_open = lo.has_value() && open_lo;
  bool hi_open = hi.has_value() && open_hi;
  // Grid values live in [-s_max, s_max]; clip (the bounds are grid members).
  const Rational smax(s_max_);
  if (lo_v < -smax) {
    lo_v = -smax;
    lo_open = false;
  }
  if (hi_v > smax) {
    hi_v = smax;
    hi_open = false;
  }
  const auto witness =
      SimplestRationalInInterval(lo_v, hi_v, lo_open, hi_open);
  if (!witness) return false;
  // The witness has the minimum denominator of any rational in the range.
  if (witness->den() > t_max_) return false;
  if (abs(witness->num()) <= s_max_) return true;
  // Rare: the minimal-denominator witness busts the numerator bound near the
  // value extremes; fall back to the exhaustive denominator sweep.
  if (t_max_ > kRangeSweepCap) {
    throw ParameterError("RationalGrid::HasValueIn: t_max too large");
  }
  const int64_t t_max = mpz_get_si(t_max_.get_mpz_t());
  for (int64_t t = 1; t <= t_max; ++t) {
    mpz_class s = CeilTimes(lo_v, t);
    if (lo_open && s * lo_v.den() == lo_v.num() * t) s += 1;
    if (s < -s_max_) s = -s_max_;
    if (s > s_max_) continue;
    const Rational candidate(s, mpz_class(t));
    if (hi_open ? candidate < hi_v : candidate <= hi_v) return true;
  }
  return false;
}

void RationalGrid::Enumerate(
    const std::function<bool(const Rational&)>& visit) const {
  if (t_max_ > kEnumerateCap) {
    throw ParameterError("RationalGrid::Enumerate: t_max too large");
  }
  const int64_t t_max = mpz_get_si(t_max_.get_mpz_t());

  // One cursor per denominator class, holding the next canonical (coprime)
  // numerator. Merging the classes by value yields a strictly increasing,
  // duplicate-free stream.
  struct Cursor {
    mpz_class s;
    int64_t t;
  };
  auto value_greater = [](const Cursor& a, const Cursor& b) {
    // Min-heap on s/t; ties impossible between canonical forms.
    return a.s * b.t > b.s * a.t;
  };
  std::priority_queue<Cursor, std::vector<Cursor>, decltype(value_greater)>
      heap(value_greater);

  auto advance_to_canonical = [&](mpz_class s, int64_t t) -> std::optional<mpz_class> {
    if (t == 1) return s > s_max_ ? std::nullopt : std::optional<mpz_class>(s);
    mpz_class g;
    while (s <= s_max_) {
      mpz_class a = abs(s);
      mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), mpz_class(t).get_mpz_t());
      if (g == 1) return s;
      s += 1;
    }
    return std::nullopt;
  };

  for (int64_t t = 1; t <= t_max; ++t) {
    auto first = advance_to_canonical(-s_max_, t);
    if (first) heap.push(Cursor{*first, t});
  }
  while (!heap.empty()) {
    Cursor top = heap.top();
    heap.pop();
    if (!visit(Rational(top.s, mpz_class(top.t)))) return;
    auto next = advance_to_canonical(top.s + 1, top.t);
    if (next) heap.push(Cursor{*next, top.t});
  }
}

std::vector<Rational> RationalGrid::Materialize(int64_t cap) const {
  const mpz_class size = DistinctSize();
  if (size > cap) {
    throw ParameterError("RationalGrid::Materialize: grid of " +
                         size.get_str() + " values exceeds cap " +
                         std::to_string(cap));
  }
  std::vector<Rational> values;
  values.reserve(mpz_get_ui(size.get_mpz_t()));
  Enumerate([&values](const Rational& v) {
    values.push_back(v);
    return true;
  });
  return values;
}

RationalGrid LfDomain(int i, int d, const mpz_class& x_bound,
                      const mpz_class& prev_denominator) {
  if (d < 1 || i < 1 || i > d) {
    throw ParameterError("LfDomain: require 1 <= i <= d");
  }
  if (x_bound < 1) throw ParameterError("LfDomain: x_bound must be >= 1");
  const mpz_class prev = i == 1 ? mpz_class(1) : prev_denominator;
  if (prev < 1) throw ParameterError("LfDomain: prev_denominator must be >= 1");
  const mpz_class d_fac = Factorial(d);
  const mpz_class s_max =
      Pow(d * d_fac, static_cast<unsigned long>(i)) *
      Pow(x_bound, static_cast<unsigned long>(d) * static_cast<unsigned long>(i));
  const mpz_class t_max = d_fac * prev * Pow(x_bound, static_cast<unsigned long>(d));
  return RationalGrid(s_max, t_max);
}

RationalGrid LfDomainConfigured(int i, int d, const mpz_class& x_bound,
                                const mpz_class& prev_denominator,
                                const GridConfig& config) {
  RationalGrid grid = LfDomain(i, d, x_bound, prev_denominator);
  auto it = config.find(i);
  if (it == config.end()) return grid;
  return RationalGrid(it->second.s_max.value_or(grid.s_max()),
                      it->second.t_max.value_or(grid.t_max()));
}

RationalGrid TukeyDomain(int i, int d, const mpz_class& x_bound,
                         const mpz_class& prev_denominator,
                         const GridConfig& config) {
  if (d < 1 || i < 1 || i > d) {
    throw ParameterError("TukeyDomain: require 1 <= i <= d");
  }
  if (x_bound < 1) throw ParameterError("TukeyDomain: x_bound must be >= 1");
  RationalGrid grid = [&] {
    if (d == 1) {
      // The 1-D slice maximum is attained at a data point.
      return RationalGrid(x_bound, 1);
    }
    // A hyperplane through d input points has integer coefficients bounded
    // by d! (2X)^(d-1) X; feed that bound into the feasibility cascade.
    const mpz_class coeff_bound =
        Factorial(d) * Pow(2 * x_bound, static_cast<unsigned long>(d - 1)) *
        x_bound;
    return LfDomain(i, d, coeff_bound, prev_denominator);
  }();
  auto it = config.find(i);
  if (it == config.end()) return grid;
  return RationalGrid(it->second.s_max.value_or(grid.s_max()),
                      it->second.t_max.value_or(grid.t_max()));
}

}  // namespace dpqc
