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

#include "dpqc/rational.h"

#include <limits>

#include "dpqc/error.h"

namespace dpqc {

Rational::Rational(int64_t num, int64_t den) {
  if (den == 0) throw ParameterError("Rational: zero denominator");
  v_ = mpq_class(static_cast<long>(num), static_cast<long>(den));
  v_.canonicalize();
}

Rational::Rational(const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw ParameterError("Rational: zero denominator");
  v_ = mpq_class(num) / mpq_class(den);
  v_.canonicalize();
}

Rational Rational::FromString(const std::string& text) {
  size_t begin = text.find_first_not_of(" \t");
  size_t end = text.find_last_not_of(" \t");
  if (begin == std::string::npos) {
    throw ParameterError("Rational: empty string");
  }
  const std::string trimmed = text.substr(begin, end - begin + 1);
  const size_t slash = trimmed.find('/');
  try {
    if (slash == std::string::npos) {
      return Rational(mpz_class(trimmed));
    }
    mpz_class num(trimmed.substr(0, slash));
    mpz_class den(trimmed.substr(slash + 1));
    return Rational(num, den);
  } catch (const std::invalid_argument&) {
    throw ParameterError("Rational: cannot parse '" + text + "'");
  }
}

bool Rational::FitsInt64() const {
  static const mpz_class kMin(std::numeric_limits<int64_t>::min());
  static const mpz_class kMax(std::numeric_limits<int64_t>::max());
  const mpz_class n = num();
  const mpz_class d = den();
  return n >= kMin && n <= kMax && d <= kMax;
}

int64_t Rational::NumI64() const {
  if (!FitsInt64()) throw ParameterError("Rational: numerator exceeds int64");
  const mpz_class n = num();
  return mpz_get_si(n.get_mpz_t());
}

int64_t Rational::DenI64() const {
  if (!FitsInt64()) throw ParameterError("Rational: denominator exceeds int64");
  const mpz_class d = den();
  return mpz_get_si(d.get_mpz_t());
}

std::string Rational::ToString() const {
  return num().get_str() + "/" + den().get_str();
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.IsZero()) throw ParameterError("Rational: division by zero");
  return Rational(mpq_class(a.v_ / b.v_));
}

std::string ToString(const RationalPoint& p) {
  std::string out = "(";
  for (size_t i = 0; i < p.size(); ++i) {
    if (i > 0) out += ", ";
    out += p[i].ToString();
  }
  out += ")";
  return out;
}

}  // namespace dpqc
