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

#ifndef DPQC_RATIONAL_H_
#define DPQC_RATIONAL_H_

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace dpqc {

// Exact fraction, stored in lowest terms with a positive denominator.
// Arithmetic never overflows; comparisons follow the real value.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(int64_t value) : v_(static_cast<long>(value)) {}  // NOLINT
  Rational(int64_t num, int64_t den);
  explicit Rational(const mpz_class& num, const mpz_class& den = 1);
  explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

  // Accepts "num/den", "num", and optional surrounding whitespace.
  static Rational FromString(const std::string& text);

  const mpq_class& value() const { return v_; }
  mpz_class num() const { return v_.get_num(); }
  mpz_class den() const { return v_.get_den(); }

  bool FitsInt64() const;
  int64_t NumI64() const;
  int64_t DenI64() const;

  double ToDouble() const { return v_.get_d(); }
  // Always "num/den", e.g. "-3/2", "5/1".
  std::string ToString() const;

  bool IsZero() const { return sgn(v_) == 0; }
  int Sign() const { return sgn(v_); }
  Rational Abs() const { return Rational(mpq_class(abs(v_))); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational(mpq_class(a.v_ + b.v_));
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return Rational(mpq_class(a.v_ - b.v_));
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(mpq_class(a.v_ * b.v_));
  }
  friend Rational operator/(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a) {
    return Rational(mpq_class(-a.v_));
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return mpq_cmp(a.v_.get_mpq_t(), b.v_.get_mpq_t()) == 0;
  }
  friend bool operator!=(const Rational& a, const Rational& b) {
    return !(a == b);
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return mpq_cmp(a.v_.get_mpq_t(), b.v_.get_mpq_t()) < 0;
  }
  friend bool operator<=(const Rational& a, const Rational& b) {
    return mpq_cmp(a.v_.get_mpq_t(), b.v_.get_mpq_t()) <= 0;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) {
    return b <= a;
  }

 private:
  mpq_class v_;
};

using RationalPoint = std::vector<Rational>;

std::string ToString(const RationalPoint& p);

}  // namespace dpqc

#endif  // DPQC_RATIONAL_H_
