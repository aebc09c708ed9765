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

#include "dpqc/optimizer.h"

#include <algorithm>
#include <numeric>

#include "dpqc/error.h"

namespace dpqc {
namespace {

// Shared body of the 1-D optimizer so that the d == 1 high-dimensional run
// is bitwise identical to a direct IpConcave call with the same seed.
Rational OptimizeCoordinate(const TargetFunction& q, const Partition& partition,
                            const RationalPoint& prefix,
                            const OrderedDomain& domain,
                            const OptimizerConfig& config, RandomSource& rng,
                            CompositionLedger* ledger, OptimizerTrace* trace) {
  std::vector<Rational> block_argmaxes;
  block_argmaxes.reserve(partition.blocks.size());
  for (const std::vector<int64_t>& block : partition.blocks) {
    block_argmaxes.push_back(ArgmaxOverDomain(
        [&](const Rational& x) { return q.SliceEval(block, prefix, x); },
        domain));
  }

  IpSolverSpec spec;
  spec.kind = IpSolverKind::kExpMechBaseline;
  spec.privacy = config.privacy;
  spec.beta = config.beta;
  const Rational chosen = PrivateInteriorPoint(block_argmaxes, domain, spec, rng);
  if (ledger != nullptr) {
    ledger->Record(config.privacy,
                   "interior-point coordinate " +
                       std::to_string(prefix.size() + 1));
  }
  if (trace != nullptr) {
    OptimizerTrace::Coordinate coord;
    coord.chosen = chosen;
    coord.block_argmaxes = std::move(block_argmaxes);
    std::vector<int64_t> all(q.dataset_size());
    std::iota(all.begin(), all.end(), 0);
    coord.slice_value_full = q.SliceEval(all, prefix, chosen);
    trace->coordinates.push_back(std::move(coord));
  }
  return chosen;
}

Partition PreparePartition(const TargetFunction& q,
                           const OptimizerConfig& config, RandomSource& rng) {
  if (config.fixed_partition.has_value()) {
    if (config.fixed_partition->n() != q.dataset_size()) {
      throw ParameterError("optimizer: fixed partition size mismatch");
    }
    return *config.fixed_partition;
  }
  return MakePartition(q.dataset_size(), config.t, rng);
}

}  // namespace

Partition MakePartition(int64_t n, int64_t t, RandomSource& rng) {
  if (t < 1) throw ParameterError("MakePartition: t must be >= 1");
  if (n < t) {
    throw InsufficientSamplesError("MakePartition: n = " + std::to_string(n) +
                                   " below block count t = " +
                                   std::to_string(t));
  }
  std::vector<int64_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (int64_t i = n - 1; i > 0; --i) {
    const int64_t j = static_cast<int64_t>(
        rng.NextBelow(static_cast<uint64_t>(i) + 1));
    std::swap(order[i], order[j]);
  }
  Partition p;
  p.t = t;
  p.blocks.resize(t);
  p.block_of.assign(n, -1);
  const int64_t base = n / t;
  const int64_t extra = n % t;
  int64_t pos = 0;
  for (int64_t b = 0; b < t; ++b) {
    const int64_t size = base + (b < extra ? 1 : 0);
    for (int64_t k = 0; k < size; ++k) {
      const int64_t idx = order[pos++];
      p.blocks[b].push_back(idx);
      p.block_of[idx] = b;
    }
    std::sort(p.blocks[b].begin(), p.blocks[b].end());
  }
  return p;
}

Rational ArgmaxOverDomain(const std::function<double(const Rational&)>& value,
                          const OrderedDomain& domain) {
  const int64_t size = domain.size();
  if (size <= 0) throw ParameterError("ArgmaxOverDomain: empty domain");
  int64_t best_rank = 0;
  double best = value(domain.At(0));
  for (int64_t rank = 1; rank < size; ++rank) {
    const double v = value(domain.At(rank));
    if (v > best) {
      best = v;
      best_rank = rank;
    }
  }
  return domain.At(best_rank);
}

Rational IpConcave(const TargetFunction& q, const OrderedDomain& domain,
                   const OptimizerConfig& config, RandomSource& rng,
                   CompositionLedger* ledger, OptimizerTrace* trace) {
  if (q.dimension() != 1) {
    throw ParameterError("IpConcave: target must be one-dimensional");
  }
  const Partition partition = PreparePartition(q, config, rng);
  return OptimizeCoordinate(q, partition, RationalPoint{}, domain, config, rng,
                            ledger, trace);
}

RationalPoint IpConcaveHighDim(const TargetFunction& q,
                               const OptimizerConfig& config,
                               RandomSource& rng, CompositionLedger* ledger,
                               OptimizerTrace* trace) {
  const int d = q.dimension();
  if (d < 1) throw ParameterError("IpConcaveHighDim: dimension must be >= 1");
  const Partition partition = PreparePartition(q, config, rng);
  RationalPoint prefix;
  prefix.reserve(d);
  for (int i = 1; i <= d; ++i) {
    const std::shared_ptr<const OrderedDomain> domain = q.Domain(i, prefix);
    prefix.push_back(OptimizeCoordinate(q, partition, prefix, *domain, config,
                                        rng, ledger, trace));
  }
  return prefix;
}

}  // namespace dpqc
