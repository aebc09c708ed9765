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

#include "dpqc/ordered_domain.h"

#include <algorithm>

#include "dpqc/error.h"

namespace dpqc {

IntRangeDomain::IntRangeDomain(int64_t lo, int64_t hi) : lo_(lo), hi_(hi) {
  if (lo > hi) throw ParameterError("IntRangeDomain: empty range");
}

Rational IntRangeDomain::At(int64_t rank) const {
  if (rank < 0 || rank >= size()) {
    throw ParameterError("IntRangeDomain::At: rank out of range");
  }
  return Rational(lo_ + rank);
}

std::optional<int64_t> IntRangeDomain::RankOf(const Rational& value) const {
  if (value.den() != 1) return std::nullopt;
  if (!value.FitsInt64()) return std::nullopt;
  const int64_t v = value.NumI64();
  if (v < lo_ || v > hi_) return std::nullopt;
  return v - lo_;
}

GridDomain::GridDomain(RationalGrid grid, int64_t cap)
    : grid_(std::move(grid)), cap_(cap) {}

const std::vector<Rational>& GridDomain::Values() const {
  if (!values_) values_ = grid_.Materialize(cap_);
  return *values_;
}

int64_t GridDomain::size() const {
  if (values_) return static_cast<int64_t>(values_->size());
  if (!size_) size_ = static_cast<int64_t>(grid_.DistinctSize().get_si());
  return *size_;
}

Rational GridDomain::At(int64_t rank) const {
  const std::vector<Rational>& v = Values();
  if (rank < 0 || rank >= static_cast<int64_t>(v.size())) {
    throw ParameterError("GridDomain::At: rank out of range");
  }
  return v[static_cast<size_t>(rank)];
}

std::optional<int64_t> GridDomain::RankOf(const Rational& value) const {
  if (!grid_.Contains(value)) return std::nullopt;
  const std::vector<Rational>& v = Values();
  auto it = std::lower_bound(v.begin(), v.end(), value);
  if (it == v.end() || !(*it == value)) return std::nullopt;
  return it - v.begin();
}

ListDomain::ListDomain(std::vector<Rational> values)
    : values_(std::move(values)) {
  if (values_.empty()) throw ParameterError("ListDomain: empty");
  for (size_t i = 1; i < values_.size(); ++i) {
    if (!(values_[i - 1] < values_[i])) {
      throw ParameterError("ListDomain: values must be strictly increasing");
    }
  }
}

Rational ListDomain::At(int64_t rank) const {
  if (rank < 0 || rank >= size()) {
    throw ParameterError("ListDomain::At: rank out of range");
  }
  return values_[static_cast<size_t>(rank)];
}

std::optional<int64_t> ListDomain::RankOf(const Rational& value) const {
  auto it = std::lower_bound(values_.begin(), values_.end(), value);
  if (it == values_.end() || !(*it == value)) return std::nullopt;
  return it - values_.begin();
}

}  // namespace dpqc
