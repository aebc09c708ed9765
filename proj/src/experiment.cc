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

#include "dpqc/experiment.h"

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <thread>

#include "dpqc/approximation.h"
#include "dpqc/audit.h"
#include "dpqc/csv.h"
#include "dpqc/error.h"
#include "dpqc/interior_point.h"
#include "dpqc/linfeas.h"
#include "dpqc/properness.h"
#include "dpqc/stats.h"
#include "dpqc/tukey.h"

namespace dpqc {
namespace {

using nlohmann::json;

constexpr uint64_t kDatasetStream = 0xDA7A5E7ULL;

std::string FormatDouble(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Dataset synthesis and IO.

std::vector<std::vector<int64_t>> GenerateClusterPoints(int d, int64_t x_bound,
                                                        int64_t n,
                                                        int64_t clusters,
                                                        int64_t spread,
                                                        RandomSource& rng) {
  std::vector<std::vector<int64_t>> centers;
  if (d == 1 || clusters <= 1) {
    centers.push_back(std::vector<int64_t>(d, 0));
  } else {
    const int64_t c = std::max<int64_t>(1, x_bound - 1);
    centers.push_back({c, c});
    centers.push_back({c, -c});
    centers.push_back({-c, c});
    centers.push_back({-c, -c});
    centers.resize(std::min<size_t>(centers.size(), clusters));
  }
  std::vector<std::vector<int64_t>> rows;
  rows.reserve(n);
  for (int64_t i = 0; i < n; ++i) {
    const auto& center = centers[rng.NextBelow(centers.size())];
    std::vector<int64_t> row(d);
    for (int j = 0; j < d; ++j) {
      const int64_t off =
          static_cast<int64_t>(rng.NextBelow(2 * spread + 1)) - spread;
      row[j] = std::clamp(center[j] + off, -x_bound, x_bound);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<Constraint> GeneratePlantedFeasible(int d, int64_t x_bound,
                                                int64_t n,
                                                const std::vector<int64_t>& p,
                                                RandomSource& rng) {
  std::vector<Constraint> out;
  out.reserve(n);
  while (static_cast<int64_t>(out.size()) < n) {
    Constraint c;
    c.a.resize(d);
    bool zero = true;
    for (int j = 0; j < d; ++j) {
      c.a[j] = static_cast<int64_t>(rng.NextBelow(2 * x_bound + 1)) - x_bound;
      if (c.a[j] != 0) zero = false;
    }
    if (zero) continue;
    int64_t dot = 0;
    for (int j = 0; j < d; ++j) dot += c.a[j] * p[j];
    const int64_t margin = static_cast<int64_t>(rng.NextBelow(x_bound + 1));
    c.w = dot - margin;
    if (c.w < -x_bound || c.w > x_bound) continue;
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<LabeledExample> GenerateThresholdLabeled(int64_t x_bound, int64_t n,
                                                     int64_t theta,
                                                     RandomSource& rng) {
  std::vector<LabeledExample> out;
  out.reserve(n);
  for (int64_t i = 0; i < n; ++i) {
    LabeledExample e;
    const int64_t x =
        static_cast<int64_t>(rng.NextBelow(2 * x_bound + 1)) - x_bound;
    e.x = {x};
    e.label = x >= theta ? 1 : -1;
    out.push_back(std::move(e));
  }
  return out;
}

PointSet LoadPoints(const std::string& path, int d, int64_t x_bound) {
  const CsvTable table = ReadCsv(path);
  if (static_cast<int>(table.header.size()) != d) {
    throw IoError(path + ": expected " + std::to_string(d) + " columns");
  }
  std::vector<std::vector<int64_t>> rows;
  rows.reserve(table.rows.size());
  for (size_t r = 0; r < table.rows.size(); ++r) {
    std::vector<int64_t> row(d);
    for (int j = 0; j < d; ++j) {
      row[j] = ParseIntField(table.rows[r][j],
                             path + ":" + std::to_string(table.line_numbers[r]));
    }
    rows.push_back(std::move(row));
  }
  return PointSet(d, x_bound, std::move(rows));
}

ConstraintSet LoadConstraints(const std::string& path, int d, int64_t x_bound) {
  const CsvTable table = ReadCsv(path);
  if (static_cast<int>(table.header.size()) != d + 1) {
    throw IoError(path + ": expected " + std::to_string(d + 1) + " columns");
  }
  std::vector<Constraint> rows;
  for (size_t r = 0; r < table.rows.size(); ++r) {
    const std::string ctx = path + ":" + std::to_string(table.line_numbers[r]);
    Constraint c;
    c.a.resize(d);
    for (int j = 0; j < d; ++j) c.a[j] = ParseIntField(table.rows[r][j], ctx);
    c.w = ParseIntField(table.rows[r][d], ctx);
    rows.push_back(std::move(c));
  }
  return ConstraintSet(d, x_bound, std::move(rows));
}

std::vector<LabeledExample> LoadExamples(const std::string& path, int d) {
  const CsvTable table = ReadCsv(path);
  if (static_cast<int>(table.header.size()) != d + 1) {
    throw IoError(path + ": expected " + std::to_string(d + 1) + " columns");
  }
  std::vector<LabeledExample> out;
  for (size_t r = 0; r < table.rows.size(); ++r) {
    const std::string ctx = path + ":" + std::to_string(table.line_numbers[r]);
    LabeledExample e;
    e.x.resize(d);
    for (int j = 0; j < d; ++j) e.x[j] = ParseIntField(table.rows[r][j], ctx);
    const int64_t label = ParseIntField(table.rows[r][d], ctx);
    if (label != 1 && label != -1) {
      throw IoError(ctx + ": label must be +1 or -1");
    }
    e.label = static_cast<int>(label);
    out.push_back(std::move(e));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Config.

GridConfig GridConfigFromJson(const json& j) {
  GridConfig config;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const int coord = std::stoi(it.key());
    GridOverride over;
    if (it.value().contains("s_max")) {
      over.s_max = mpz_class(it.value()["s_max"].is_string()
                                 ? it.value()["s_max"].get<std::string>()
                                 : std::to_string(
                                       it.value()["s_max"].get<int64_t>()));
    }
    if (it.value().contains("t_max")) {
      over.t_max = mpz_class(it.value()["t_max"].is_string()
                                 ? it.value()["t_max"].get<std::string>()
                                 : std::to_string(
                                       it.value()["t_max"].get<int64_t>()));
    }
    config[coord] = over;
  }
  return config;
}

}  // namespace

ExperimentConfig ExperimentConfig::FromJson(const json& j) {
  ExperimentConfig c;
  try {
    c.task = j.at("task").get<std::string>();
    if (!j.contains("seed")) {
      throw ParameterError("config: seed is mandatory for reproducibility");
    }
    c.seed = j.at("seed").get<uint64_t>();
    c.d = j.value("d", 1);
    c.x_bound = j.value("x", static_cast<int64_t>(4));
    c.n = j.value("n", static_cast<int64_t>(0));
    c.alpha = j.value("alpha", 0.1);
    c.beta = j.value("beta", 0.05);
    c.epsilon = j.value("epsilon", 1.0);
    c.delta = j.value("delta", 0.0);
    c.trials = j.value("trials", static_cast<int64_t>(1));
    c.input_path = j.value("input", std::string());
    c.output_dir = j.value("out", std::string("."));
    c.workers = j.value("workers", 0);
    if (j.contains("t")) c.t_override = j.at("t").get<int64_t>();
    if (j.contains("grid_overrides")) {
      c.grid_overrides = GridConfigFromJson(j.at("grid_overrides"));
    }
    c.extras = j;
  } catch (const json::exception& e) {
    throw ParameterError(std::string("config: ") + e.what());
  }
  if (c.trials < 1) throw ParameterError("config: trials must be >= 1");
  if (c.d < 1) throw ParameterError("config: d must be >= 1");
  return c;
}

ExperimentConfig ExperimentConfig::FromJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError("config '" + path + "': " + e.what());
  }
  return FromJson(j);
}

void GenerateDataset(const std::string& kind, const json& params,
                     uint64_t seed, const std::string& out_path) {
  RandomSource rng = RandomSource(seed).Fork(kDatasetStream);
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::string comment;
  if (kind == "cluster-points") {
    const int d = params.value("d", 2);
    const int64_t x = params.value("x", static_cast<int64_t>(4));
    const int64_t n = params.at("n").get<int64_t>();
    const int64_t clusters = params.value("clusters", static_cast<int64_t>(4));
    const int64_t spread = params.value("spread", static_cast<int64_t>(1));
    for (int j = 1; j <= d; ++j) header.push_back("x" + std::to_string(j));
    for (const auto& row : GenerateClusterPoints(d, x, n, clusters, spread, rng)) {
      std::vector<std::string> out;
      for (int64_t v : row) out.push_back(std::to_string(v));
      rows.push_back(std::move(out));
    }
    comment = "integer points, coordinates in [-" + std::to_string(x) + ", " +
              std::to_string(x) + "]";
  } else if (kind == "planted-feasible") {
    const int d = params.value("d", 2);
    const int64_t x = params.value("x", static_cast<int64_t>(4));
    const int64_t n = params.at("n").get<int64_t>();
    std::vector<int64_t> p(d, 0);
    if (params.contains("planted")) {
      p = params.at("planted").get<std::vector<int64_t>>();
    }
    for (int j = 1; j <= d; ++j) header.push_back("a" + std::to_string(j));
    header.push_back("w");
    for (const auto& c : GeneratePlantedFeasible(d, x, n, p, rng)) {
      std::vector<std::string> out;
      for (int64_t v : c.a) out.push_back(std::to_string(v));
      out.push_back(std::to_string(c.w));
      rows.push_back(std::move(out));
    }
    comment = "linear constraints <a, x> >= w, coefficients in [-" +
              std::to_string(x) + ", " + std::to_string(x) + "]";
  } else if (kind == "threshold-labeled") {
    const int64_t x = params.value("x", static_cast<int64_t>(32));
    const int64_t n = params.at("n").get<int64_t>();
    const int64_t theta = params.value("theta", static_cast<int64_t>(1));
    header = {"x1", "label"};
    for (const auto& e : GenerateThresholdLabeled(x, n, theta, rng)) {
      rows.push_back({std::to_string(e.x[0]), std::to_string(e.label)});
    }
    comment = "1-D labeled examples, label = +1 iff x1 >= " +
              std::to_string(theta);
  } else if (kind == "counterexample") {
    const int64_t n = params.value("n", static_cast<int64_t>(4));
    const auto [s, s_prime] = CounterexampleDatasets(n);
    (void)s_prime;
    header = {"x", "y", "label"};
    for (const auto& p : s) {
      rows.push_back({std::to_string(p.x), std::to_string(p.y),
                      std::to_string(p.label)});
    }
    comment = "labeled plane points; the neighboring dataset replaces one "
              "(1,0) row with (-1,0)";
  } else {
    throw ParameterError("GenerateDataset: unknown kind '" + kind + "'");
  }
  WriteCsv(out_path, header, rows, comment);
}

namespace {

// ---------------------------------------------------------------------------
// Per-task trial bodies. Each returns a filled row (utility/target/success).

struct TrialContext {
  const ExperimentConfig& config;
  uint64_t trial_seed;
};

ResultRow RunTukeyTrial(const TrialContext& ctx, const PointSet& points) {
  const ExperimentConfig& c = ctx.config;
  ResultRow row;
  TukeyMedianOptions options;
  options.grid_config = c.grid_overrides;
  options.t_override = c.t_override;
  RandomSource rng(ctx.trial_seed);
  const TukeyResult r = PrivateTukeyMedian(
      points, c.alpha, c.beta, PrivacyParams(c.epsilon, c.delta), rng, options);
  row.utility = static_cast<double>(r.depth) / points.size();
  row.target = (1.0 - c.alpha) / (points.d() + 1);
  row.success = row.utility >= row.target - 1e-12;
  const PrivacyParams total = c.delta > 0 ? r.ledger.AdvancedTotal(c.delta / 2)
                                          : r.ledger.BasicTotal();
  row.epsilon_total = total.epsilon;
  row.delta_total = total.delta;
  return row;
}

ResultRow RunLinFeasTrial(const TrialContext& ctx, const ConstraintSet& s) {
  const ExperimentConfig& c = ctx.config;
  ResultRow row;
  LinFeasOptions options;
  options.grid_config = c.grid_overrides;
  options.t_override = c.t_override;
  RandomSource rng(ctx.trial_seed);
  const LinFeasResult r = PrivateLinearFeasibility(
      s, c.alpha, c.beta, PrivacyParams(c.epsilon, c.delta), rng, options);
  row.utility = static_cast<double>(r.satisfied) / s.size();
  row.target = 1.0 - c.alpha;
  row.success = row.utility >= row.target - 1e-12;
  const PrivacyParams total = c.delta > 0 ? r.ledger.AdvancedTotal(c.delta / 2)
                                          : r.ledger.BasicTotal();
  row.epsilon_total = total.epsilon;
  row.delta_total = total.delta;
  return row;
}

ResultRow RunLearnTrial(const TrialContext& ctx, json* hypothesis_out) {
  const ExperimentConfig& c = ctx.config;
  ResultRow row;
  RandomSource rng(ctx.trial_seed);
  RandomSource data_rng = rng.Fork(kDatasetStream);
  const int64_t theta = c.extras.value("theta", static_cast<int64_t>(1));
  const int64_t n_train =
      c.n > 0 ? c.n : PacSampleSize(2, c.alpha, c.beta);
  const int64_t n_test = c.extras.value("test_n", static_cast<int64_t>(4000));
  std::vector<LabeledExample> train;
  if (!c.input_path.empty()) {
    train = LoadExamples(c.input_path, 1);
  } else {
    train = GenerateThresholdLabeled(c.x_bound, n_train, theta, data_rng);
  }
  const std::vector<LabeledExample> test =
      GenerateThresholdLabeled(c.x_bound, n_test, theta, data_rng);

  LinFeasOptions options;
  options.grid_config = c.grid_overrides;
  options.t_override = c.t_override;
  const LearnResult r = LearnHalfspace(train, c.x_bound, c.alpha, c.beta,
                                       PrivacyParams(c.epsilon, c.delta), rng,
                                       options);
  int64_t errors = 0;
  for (const LabeledExample& e : test) {
    if (r.hypothesis.Predict(e.x) != e.label) ++errors;
  }
  row.utility = static_cast<double>(errors) / test.size();
  row.target = c.alpha;
  row.success = row.utility <= row.target + 1e-12;
  const PrivacyParams total = c.delta > 0
                                  ? r.solver.ledger.AdvancedTotal(c.delta / 2)
                                  : r.solver.ledger.BasicTotal();
  row.epsilon_total = total.epsilon;
  row.delta_total = total.delta;
  if (hypothesis_out != nullptr) {
    json h;
    h["weights"] = json::array();
    for (const Rational& w : r.hypothesis.weights) {
      h["weights"].push_back({{"num", w.num().get_str()},
                              {"den", w.den().get_str()}});
    }
    h["threshold"] = {{"num", r.hypothesis.threshold.num().get_str()},
                      {"den", r.hypothesis.threshold.den().get_str()}};
    h["training_error"] = r.training_error;
    *hypothesis_out = std::move(h);
  }
  return row;
}

ResultRow RunIpBenchTrial(const TrialContext& ctx) {
  const ExperimentConfig& c = ctx.config;
  ResultRow row;
  RandomSource rng(ctx.trial_seed);
  IntRangeDomain domain(-c.x_bound, c.x_bound);
  IpSolverSpec spec;
  spec.privacy = PrivacyParams(c.epsilon, c.delta);
  spec.beta = c.beta;
  const int64_t t =
      c.t_override.value_or(NIp(domain.size(), c.beta, c.epsilon, c.delta));
  std::vector<Rational> values;
  values.reserve(t);
  Rational lo(c.x_bound), hi(-c.x_bound);
  for (int64_t i = 0; i < t; ++i) {
    const int64_t v =
        static_cast<int64_t>(rng.NextBelow(2 * c.x_bound + 1)) - c.x_bound;
    values.push_back(Rational(v));
    lo = std::min(lo, values.back());
    hi = std::max(hi, values.back());
  }
  const Rational out = PrivateInteriorPoint(values, domain, spec, rng);
  const bool interior = lo <= out && out <= hi;
  row.utility = interior ? 1.0 : 0.0;
  row.target = 1.0 - c.beta;
  row.success = interior;
  row.epsilon_total = c.epsilon;
  row.delta_total = c.delta;
  return row;
}

struct ApproxCheckShared {
  std::unique_ptr<PointSet> points;
  std::unique_ptr<ConstraintSet> constraints;
  std::unique_ptr<TukeyTarget> td_target;
  std::unique_ptr<LinFeasTarget> lf_target;
  std::vector<RationalPoint> probes;
  std::vector<double> full_values;
  int64_t m = 0;
};

ResultRow RunApproxCheckTrial(const TrialContext& ctx,
                              const ApproxCheckShared& shared) {
  const ExperimentConfig& c = ctx.config;
  ResultRow row;
  RandomSource rng(ctx.trial_seed);
  const TargetFunction& target = shared.td_target
                                     ? static_cast<const TargetFunction&>(
                                           *shared.td_target)
                                     : *shared.lf_target;
  const int64_t n = target.dataset_size();
  // Random m-subset by partial shuffle.
  std::vector<int64_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (int64_t i = 0; i < shared.m; ++i) {
    const int64_t j =
        i + static_cast<int64_t>(rng.NextBelow(static_cast<uint64_t>(n - i)));
    std::swap(idx[i], idx[j]);
  }
  std::vector<int64_t> subset(idx.begin(), idx.begin() + shared.m);
  std::sort(subset.begin(), subset.end());
  const GapCheckResult r = CheckAlphaApprox(target, subset, shared.probes,
                                            c.alpha, &shared.full_values);
  row.utility = r.worst_gap;
  row.target = c.alpha;
  row.success = r.pass;
  return row;
}

ResultRow RunAuditAcmlRow(const ExperimentConfig& c, json* report_out) {
  const int64_t n = c.n > 0 ? c.n : 40;
  const int64_t grid_count =
      c.extras.value("grid_count", static_cast<int64_t>(2001));
  const int64_t copies = c.extras.value("c", static_cast<int64_t>(200));
  const auto [s, s_prime] = CounterexampleDatasets(n);
  const AngleGrid grid = AngleGrid::FromCount(grid_count);
  constexpr double kPi = 3.14159265358979323846;
  RandomSource rng(c.seed);
  const AuditReport report = EstimateEpsilonLowerBound(
      [&](bool use_s_prime, RandomSource& trial_rng) {
        const auto& data = use_s_prime ? s_prime : s;
        const double phi = ASimpleH(data, grid, copies, c.epsilon, c.delta,
                                    c.alpha, c.beta, trial_rng);
        return phi > 0.0 && phi < kPi;
      },
      c.trials, c.epsilon, c.delta, rng);
  ResultRow row;
  row.utility = report.epsilon_hat;
  row.target = c.epsilon;
  row.success = report.verdict == "DP violated";
  row.epsilon_total = c.epsilon;
  row.delta_total = c.delta;
  if (report_out != nullptr) {
    *report_out = {
        {"trials", report.trials},
        {"event", "output angle in (0, pi)"},
        {"p_s", report.p_s},
        {"p_s_prime", report.p_s_prime},
        {"ci_s", {report.ci_s.lo, report.ci_s.hi}},
        {"ci_s_prime", {report.ci_s_prime.lo, report.ci_s_prime.hi}},
        {"epsilon_hat", report.epsilon_hat},
        {"unbounded_at_resolution", report.unbounded_at_resolution},
        {"claimed_epsilon", report.claimed_epsilon},
        {"claimed_delta", report.claimed_delta},
        {"verdict", report.verdict},
    };
  }
  return row;
}

ResultRow RunGenericAuditRow(const ExperimentConfig& c, json* report_out) {
  const std::string mech = c.extras.value("mechanism", std::string());
  if (mech != "exp-mech-ip") {
    throw ParameterError("audit: unknown mechanism '" + mech + "'");
  }
  std::vector<int64_t> s = c.extras.at("s").get<std::vector<int64_t>>();
  std::vector<int64_t> s_prime =
      c.extras.at("s_prime").get<std::vector<int64_t>>();
  const json event = c.extras.at("event");
  const std::string type = event.value("type", std::string("le"));
  const double lo = event.value("lo", 0.0);
  const double hi = event.value("hi", 0.0);
  const double le = event.value("value", 0.0);
  IntRangeDomain domain(-c.x_bound, c.x_bound);
  IpSolverSpec spec;
  spec.privacy = PrivacyParams(c.epsilon, c.delta);
  spec.beta = c.beta;
  RandomSource rng(c.seed);
  const AuditReport report = EstimateEpsilonLowerBound(
      [&](bool use_s_prime, RandomSource& trial_rng) {
        const auto& data = use_s_prime ? s_prime : s;
        std::vector<Rational> values;
        values.reserve(data.size());
        for (int64_t v : data) values.push_back(Rational(v));
        const Rational out =
            PrivateInteriorPoint(values, domain, spec, trial_rng);
        const double x = out.ToDouble();
        return type == "le" ? x <= le : (x > lo && x < hi);
      },
      c.trials, c.epsilon, c.delta, rng);
  ResultRow row;
  row.utility = report.epsilon_hat;
  row.target = c.epsilon;
  row.success = report.verdict == "DP violated";
  row.epsilon_total = c.epsilon;
  row.delta_total = c.delta;
  if (report_out != nullptr) {
    *report_out = {
        {"trials", report.trials},
        {"p_s", report.p_s},
        {"p_s_prime", report.p_s_prime},
        {"epsilon_hat", report.epsilon_hat},
        {"unbounded_at_resolution", report.unbounded_at_resolution},
        {"verdict", report.verdict},
    };
  }
  return row;
}

}  // namespace

ExperimentOutcome RunExperiment(const ExperimentConfig& config) {
  ExperimentOutcome outcome;
  try {
    std::filesystem::create_directories(config.output_dir);

    // Shared inputs, loaded or generated once per run.
    std::unique_ptr<PointSet> points;
    std::unique_ptr<ConstraintSet> constraints;
    ApproxCheckShared approx;
    RandomSource data_rng = RandomSource(config.seed).Fork(kDatasetStream);

    if (config.task == "tukey") {
      if (!config.input_path.empty()) {
        points = std::make_unique<PointSet>(
            LoadPoints(config.input_path, config.d, config.x_bound));
      } else {
        if (config.n <= 0) throw ParameterError("tukey: n or input required");
        const int64_t clusters =
            config.extras.value("clusters", static_cast<int64_t>(4));
        const int64_t spread =
            config.extras.value("spread", static_cast<int64_t>(1));
        points = std::make_unique<PointSet>(
            config.d, config.x_bound,
            GenerateClusterPoints(config.d, config.x_bound, config.n, clusters,
                                  spread, data_rng));
      }
    } else if (config.task == "linfeas") {
      if (!config.input_path.empty()) {
        constraints = std::make_unique<ConstraintSet>(
            LoadConstraints(config.input_path, config.d, config.x_bound));
      } else {
        if (config.n <= 0) throw ParameterError("linfeas: n or input required");
        std::vector<int64_t> planted(config.d, 0);
        constraints = std::make_unique<ConstraintSet>(
            config.d, config.x_bound,
            GeneratePlantedFeasible(config.d, config.x_bound, config.n,
                                    planted, data_rng));
      }
    } else if (config.task == "approx-check") {
      const std::string fn = config.extras.value("function", std::string("td"));
      ApproxSpec spec;
      spec.alpha = config.alpha;
      spec.beta = config.beta;
      spec.vc_dimension = config.d;
      spec.c_vc = config.extras.value("c_vc", 8.0);
      approx.m = MSubsetSize(spec);
      const int64_t n =
          config.n > 0 ? config.n : std::max<int64_t>(2 * approx.m, 1000);
      if (n < approx.m) {
        throw ParameterError("approx-check: n below the subset size m = " +
                             std::to_string(approx.m));
      }
      if (fn == "td" && config.d == 2) {
        approx.points = std::make_unique<PointSet>(
            config.d, config.x_bound,
            GenerateClusterPoints(config.d, config.x_bound, n, 4,
                                  std::max<int64_t>(1, config.x_bound), data_rng));
        approx.td_target = std::make_unique<TukeyTarget>(*approx.points);
        approx.probes = TukeyGapProbes(*approx.points);
      } else if (fn == "td" && config.d == 1) {
        approx.points = std::make_unique<PointSet>(
            config.d, config.x_bound,
            GenerateClusterPoints(config.d, config.x_bound, n, 1,
                                  config.x_bound, data_rng));
        approx.td_target = std::make_unique<TukeyTarget>(*approx.points);
        approx.probes = TukeyGapProbes1D(*approx.points);
      } else if (fn == "lf" && config.d == 2) {
        std::vector<int64_t> planted(config.d, 0);
        approx.constraints = std::make_unique<ConstraintSet>(
            config.d, config.x_bound,
            GeneratePlantedFeasible(config.d, config.x_bound, n, planted,
                                    data_rng));
        approx.lf_target = std::make_unique<LinFeasTarget>(*approx.constraints);
        std::vector<int64_t> all(n);
        std::iota(all.begin(), all.end(), 0);
        approx.probes = LfGapProbes(*approx.constraints, all);
      } else {
        throw ParameterError("approx-check: function must be td (d<=2) or lf (d=2)");
      }
      const TargetFunction& target =
          approx.td_target ? static_cast<const TargetFunction&>(*approx.td_target)
                           : *approx.lf_target;
      std::vector<int64_t> all(target.dataset_size());
      std::iota(all.begin(), all.end(), 0);
      approx.full_values.reserve(approx.probes.size());
      for (const RationalPoint& p : approx.probes) {
        approx.full_values.push_back(target.Eval(all, p));
      }
    } else if (config.task == "learn-halfspace" || config.task == "ip-bench" ||
               config.task == "audit-acml" || config.task == "audit") {
      // Per-trial or single-report tasks; nothing to preload.
    } else {
      throw ParameterError("unknown task '" + config.task + "'");
    }

    // Single-report audit tasks.
    if (config.task == "audit-acml" || config.task == "audit") {
      json report;
      const auto start = std::chrono::steady_clock::now();
      ResultRow row = config.task == "audit-acml"
                          ? RunAuditAcmlRow(config, &report)
                          : RunGenericAuditRow(config, &report);
      row.task = config.task;
      row.trial = 0;
      row.seed = config.seed;
      row.wall_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - start)
                        .count();
      outcome.rows.push_back(row);
      outcome.summary["audit_report"] = report;
      outcome.summary["verdict"] = report["verdict"];
    } else {
      // Plain per-trial tasks under a bounded worker pool; per-trial seeds
      // are seed xor trial index, outputs ordered by trial index.
      const int64_t trials = config.trials;
      outcome.rows.assign(trials, ResultRow{});
      json hypothesis;
      std::atomic<int64_t> next{0};
      auto worker = [&]() {
        for (;;) {
          const int64_t i = next.fetch_add(1);
          if (i >= trials) return;
          ResultRow& row = outcome.rows[i];
          row.task = config.task;
          row.trial = i;
          row.seed = config.seed ^ static_cast<uint64_t>(i);
          const TrialContext ctx{config, row.seed};
          const auto start = std::chrono::steady_clock::now();
          try {
            if (config.task == "tukey") {
              ResultRow r = RunTukeyTrial(ctx, *points);
              r.task = row.task; r.trial = row.trial; r.seed = row.seed;
              row = r;
            } else if (config.task == "linfeas") {
              ResultRow r = RunLinFeasTrial(ctx, *constraints);
              r.task = row.task; r.trial = row.trial; r.seed = row.seed;
              row = r;
            } else if (config.task == "learn-halfspace") {
              ResultRow r = RunLearnTrial(ctx, i == 0 ? &hypothesis : nullptr);
              r.task = row.task; r.trial = row.trial; r.seed = row.seed;
              row = r;
            } else if (config.task == "ip-bench") {
              ResultRow r = RunIpBenchTrial(ctx);
              r.task = row.task; r.trial = row.trial; r.seed = row.seed;
              row = r;
            } else if (config.task == "approx-check") {
              ResultRow r = RunApproxCheckTrial(ctx, approx);
              r.task = row.task; r.trial = row.trial; r.seed = row.seed;
              row = r;
            }
          } catch (const Error& e) {
            row.error = e.what();
          }
          row.wall_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - start)
                            .count();
        }
      };
      int workers = config.workers > 0
                        ? config.workers
                        : static_cast<int>(std::thread::hardware_concurrency());
      workers = std::max(1, std::min<int>(workers, static_cast<int>(trials)));
      std::vector<std::thread> pool;
      for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
      worker();
      for (auto& th : pool) th.join();

      if (config.task == "learn-halfspace" && !hypothesis.is_null()) {
        std::ofstream h(std::filesystem::path(config.output_dir) /
                        "hypothesis.json");
        h << hypothesis.dump(2) << "\n";
      }
      if (config.task == "approx-check") {
        const std::string fn =
            config.extras.value("function", std::string("td"));
        int64_t fails = 0, completed = 0;
        for (const ResultRow& r : outcome.rows) {
          if (!r.error.empty()) continue;
          ++completed;
          if (!r.success) ++fails;
        }
        const BinomialCi ci =
            completed > 0 ? ClopperPearson(fails, completed) : BinomialCi{};
        const std::string cal_path =
            (std::filesystem::path(config.output_dir) / "calibration.csv")
                .string();
        WriteCsv(cal_path,
                 {"function", "d", "n", "m", "alpha", "empirical_failure_rate",
                  "ci_low", "ci_high"},
                 {{fn, std::to_string(config.d),
                   std::to_string(approx.td_target
                                      ? approx.td_target->dataset_size()
                                      : approx.lf_target->dataset_size()),
                   std::to_string(approx.m), FormatDouble(config.alpha),
                   FormatDouble(completed > 0
                                    ? static_cast<double>(fails) / completed
                                    : 0.0),
                   FormatDouble(ci.lo), FormatDouble(ci.hi)}});
        outcome.summary["calibration_csv"] = cal_path;
        outcome.summary["m"] = approx.m;
      }
    }

    // Optional properness validation, recorded with the artifacts.
    if (config.extras.value("validate_properness", false)) {
      PropernessOptions popts;
      popts.mesh_lo = Rational(-(config.x_bound + 1));
      popts.mesh_hi = Rational(config.x_bound + 1);
      popts.mesh_step = Rational(1, config.extras.value("mesh_denominator", 64));
      if (config.task == "tukey" && points) {
        TukeyTarget target(*points, config.grid_overrides);
        const PropernessReport rep = ValidateProperness(target, 1e-12, popts);
        outcome.summary["properness"] = {
            {"pass", rep.pass},
            {"worst_shortfall", rep.worst_shortfall},
            {"prefixes_checked", rep.prefixes_checked},
            {"exhaustive", rep.grid_scans_exhaustive}};
      } else if (config.task == "linfeas" && constraints) {
        LinFeasTarget target(*constraints, config.grid_overrides);
        const PropernessReport rep = ValidateProperness(target, 1e-12, popts);
        outcome.summary["properness"] = {
            {"pass", rep.pass},
            {"worst_shortfall", rep.worst_shortfall},
            {"prefixes_checked", rep.prefixes_checked},
            {"exhaustive", rep.grid_scans_exhaustive}};
      }
    } else {
      outcome.summary["properness"] = {{"pass", nullptr},
                                       {"note", "not validated for this run"}};
    }

    // Artifacts.
    std::vector<std::vector<std::string>> csv_rows;
    int64_t completed = 0, succeeded = 0, insufficient = 0;
    double utility_sum = 0;
    json wall_ms = json::array();
    for (const ResultRow& r : outcome.rows) {
      csv_rows.push_back({r.task, std::to_string(r.trial),
                          std::to_string(r.seed), FormatDouble(r.utility),
                          FormatDouble(r.target), r.success ? "1" : "0",
                          FormatDouble(r.epsilon_total),
                          FormatDouble(r.delta_total), r.error});
      wall_ms.push_back(r.wall_ms);
      if (r.error.empty()) {
        ++completed;
        utility_sum += r.utility;
        if (r.success) ++succeeded;
      } else if (r.error.find("below the baseline requirement") !=
                     std::string::npos ||
                 r.error.find("need at least") != std::string::npos ||
                 r.error.find("below block count") != std::string::npos) {
        ++insufficient;
      }
    }
    outcome.results_csv_path =
        (std::filesystem::path(config.output_dir) / "results.csv").string();
    WriteCsv(outcome.results_csv_path,
             {"task", "trial", "seed", "utility", "target", "success",
              "epsilon_total", "delta_total", "error"},
             csv_rows);

    outcome.summary["task"] = config.task;
    outcome.summary["seed"] = config.seed;
    outcome.summary["trials"] = static_cast<int64_t>(outcome.rows.size());
    outcome.summary["completed"] = completed;
    outcome.summary["succeeded"] = succeeded;
    if (completed > 0) {
      const BinomialCi ci = ClopperPearson(succeeded, completed);
      outcome.summary["success_rate"] =
          static_cast<double>(succeeded) / completed;
      outcome.summary["success_ci"] = {ci.lo, ci.hi};
      outcome.summary["mean_utility"] = utility_sum / completed;
    }
    outcome.summary["wall_ms"] = wall_ms;
    outcome.summary_json_path =
        (std::filesystem::path(config.output_dir) / "summary.json").string();
    std::ofstream sj(outcome.summary_json_path);
    sj << outcome.summary.dump(2) << "\n";

    if (completed == static_cast<int64_t>(outcome.rows.size())) {
      outcome.exit_code = kExitOk;
    } else if (completed == 0 && insufficient == static_cast<int64_t>(
                                                     outcome.rows.size())) {
      outcome.exit_code = kExitInsufficientSamples;
    } else if (completed > 0) {
      outcome.exit_code = kExitOk;  // completed with per-trial errors surfaced
    } else {
      outcome.exit_code = kExitInternalError;
    }
  } catch (const IoError& e) {
    outcome.exit_code = kExitInputError;
    outcome.summary["error"] = e.what();
  } catch (const ParameterError& e) {
    outcome.exit_code = kExitInputError;
    outcome.summary["error"] = e.what();
  } catch (const InsufficientSamplesError& e) {
    outcome.exit_code = kExitInsufficientSamples;
    outcome.summary["error"] = e.what();
  } catch (const std::exception& e) {
    outcome.exit_code = kExitInternalError;
    outcome.summary["error"] = e.what();
  }
  return outcome;
}

double PredictWithHypothesis(const std::string& hypothesis_path,
                             const std::string& input_csv,
                             const std::string& out_path) {
  std::ifstream in(hypothesis_path);
  if (!in) throw IoError("cannot open hypothesis '" + hypothesis_path + "'");
  json h;
  try {
    in >> h;
  } catch (const json::exception& e) {
    throw IoError("hypothesis '" + hypothesis_path + "': " + e.what());
  }
  Hypothesis hyp;
  for (const auto& w : h.at("weights")) {
    hyp.weights.push_back(
        Rational(mpz_class(w.at("num").get<std::string>()),
                 mpz_class(w.at("den").get<std::string>())));
  }
  hyp.threshold = Rational(mpz_class(h.at("threshold").at("num").get<std::string>()),
                           mpz_class(h.at("threshold").at("den").get<std::string>()));
  const int d = static_cast<int>(hyp.weights.size());
  const std::vector<LabeledExample> examples = LoadExamples(input_csv, d);
  std::vector<std::vector<std::string>> rows;
  int64_t errors = 0;
  for (const LabeledExample& e : examples) {
    const int pred = hyp.Predict(e.x);
    if (pred != e.label) ++errors;
    std::vector<std::string> row;
    for (int64_t x : e.x) row.push_back(std::to_string(x));
    row.push_back(std::to_string(e.label));
    row.push_back(std::to_string(pred));
    rows.push_back(std::move(row));
  }
  if (!out_path.empty()) {
    std::vector<std::string> header;
    for (int j = 1; j <= d; ++j) header.push_back("x" + std::to_string(j));
    header.push_back("label");
    header.push_back("predicted");
    WriteCsv(out_path, header, rows);
  }
  return examples.empty() ? 0.0
                          : static_cast<double>(errors) / examples.size();
}

}  // namespace dpqc
