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

#ifndef DPQC_ORDERED_DOMAIN_H_
#define DPQC_ORDERED_DOMAIN_H_

#include <memory>
#include <optional>

#include "dpqc/grid.h"
#include "dpqc/rational.h"

namespace dpqc {

// An enumerable, totally ordered, finite candidate set. Iteration by rank is
// strictly increasing.
class OrderedDomain {
 public:
  virtual ~OrderedDomain() = default;

  virtual int64_t size() const = 0;

  // Element at rank in [0, size()).
  virtual Rational At(int64_t rank) const = 0;

  // Rank of the element if it belongs to the domain.
  virtual std::optional<int64_t> RankOf(const Rational& value) const = 0;

  // Set when the domain is a contiguous integer range [lo, hi]; lets hot
  // paths skip rational arithmetic.
  virtual std::optional<std::pair<int64_t, int64_t>> AsInt64Range() const {
    return std::nullopt;
  }

  Rational MinValue() const { return At(0); }
  Rational MaxValue() const { return At(size() - 1); }
};

// The integers lo..hi.
class IntRangeDomain : public OrderedDomain {
 public:
  IntRangeDomain(int64_t lo, int64_t hi);
  int64_t size() const override { return hi_ - lo_ + 1; }
  Rational At(int64_t rank) const override;
  std::optional<int64_t> RankOf(const Rational& value) const override;
  std::optional<std::pair<int64_t, int64_t>> AsInt64Range() const override {
    return std::make_pair(lo_, hi_);
  }

 private:
  int64_t lo_, hi_;
};

// A RationalGrid, materialized on first element access. `cap` bounds the
// number of values this domain is willing to hold.
class GridDomain : public OrderedDomain {
 public:
  explicit GridDomain(RationalGrid grid, int64_t cap = 1 << 22);
  int64_t size() const override;
  Rational At(int64_t rank) const override;
  std::optional<int64_t> RankOf(const Rational& value) const override;
  const RationalGrid& grid() const { return grid_; }
  const std::vector<Rational>& values() const { return Values(); }

 private:
  const std::vector<Rational>& Values() const;
  RationalGrid grid_;
  int64_t cap_;
  mutable std::optional<std::vector<Rational>> values_;
  mutable std::optional<int64_t> size_;
};

// An explicit sorted value list (must be strictly increasing).
class ListDomain : public OrderedDomain {
 public:
  explicit ListDomain(std::vector<Rational> values);
  int64_t size() const override { return static_cast<int64_t>(values_.size()); }
  Rational At(int64_t rank) const override;
  std::optional<int64_t> RankOf(const Rational& value) const override;

 private:
  std::vector<Rational> values_;
};

}  // namespace dpqc

#endif  // DPQC_ORDERED_DOMAIN_H_
