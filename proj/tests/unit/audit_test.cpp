// Copyright 2026 The regret-audit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "regret_audit/audit.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>

#include <gtest/gtest.h>

#include "regret_audit/errors.hpp"
#include "regret_audit/neural_mechanism.hpp"

namespace regret_audit {
namespace {

AuditRunConfig neural_config() {
  AuditRunConfig cfg;
  cfg.mechanism = "neural:42";
  cfg.grid_q = 50;
  cfg.samples = 200;
  cfg.seed = 11;
  cfg.methods = {Method::lower_bound, Method::item_wise, Method::guided, Method::exhaustive};
  cfg.portfolio = {0, 0.0, 0.0, {0.1, 1, 200}};
  return cfg;
}

void zero_timings(AuditReport& report) {
  for (auto& r : report.records) r.estimate.wall_seconds = 0.0;
  for (auto& s : report.summaries) s.wall_seconds = 0.0;
}

TEST(Audit, SecondPriceReportsZeroForEveryMethod) {
  AuditRunConfig cfg;
  cfg.setting = {2, 2};
  cfg.grid_q = 10;
  cfg.samples = 100;
  cfg.methods = {Method::exhaustive, Method::item,   Method::lower_bound,
                 Method::item_wise,  Method::pga,    Method::guided};
  cfg.pga = {0.1, 3, 20};
  cfg.portfolio = {2, 0.3, 0.3, {0.1, 1, 20}};
  const AuditReport report = run_audit(cfg);
  for (const auto& s : report.summaries) EXPECT_EQ(s.mean_regret, 0.0) << to_string(s.method);
  for (const auto& r : report.records) EXPECT_EQ(r.estimate.value, 0.0);
}

TEST(Audit, SingleSampleItemWiseHasOneRecordPerBidder) {
  AuditRunConfig cfg;
  cfg.setting = {3, 2};
  cfg.grid_q = 10;
  cfg.samples = 1;
  cfg.methods = {Method::item_wise};
  const AuditReport report = run_audit(cfg);
  ASSERT_EQ(report.records.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(report.records[i].sample, 0u);
    EXPECT_EQ(report.records[i].estimate.bidder, i);
  }
}

TEST(Audit, PerSampleOrderingsHold) {
  AuditRunConfig cfg = neural_config();
  cfg.exhaustive_scan = ExhaustiveScan::truthful_coordinates;
  const AuditReport report = run_audit(cfg);
  const double tol = 2.0 / static_cast<double>(cfg.grid_q);
  std::map<std::pair<std::size_t, std::size_t>, std::map<Method, double>> by_key;
  for (const auto& r : report.records) {
    by_key[{r.sample, r.estimate.bidder}][r.estimate.method] = r.estimate.value;
  }
  ASSERT_EQ(by_key.size(), 400u);
  for (const auto& [key, v] : by_key) {
    const double lb = v.at(Method::lower_bound);
    const double ex = v.at(Method::exhaustive);
    EXPECT_LE(lb, v.at(Method::guided));
    EXPECT_LE(lb, ex);
    EXPECT_LE(ex, v.at(Method::guided) + tol);
    EXPECT_LE(v.at(Method::item_wise), 2.0 * ex + 1e-12);
  }
}

TEST(Audit, RepeatedRunsAreByteIdentical) {
  AuditRunConfig cfg = neural_config();
  cfg.samples = 8;
  cfg.grid_q = 10;
  cfg.methods.insert(Method::pga);
  cfg.pga = {0.1, 3, 20};
  const std::string a = report_to_json_without_timings(run_audit(cfg));
  const std::string b = report_to_json_without_timings(run_audit(cfg));
  EXPECT_EQ(a, b);
  cfg.threads = 4;
  EXPECT_EQ(report_to_json_without_timings(run_audit(cfg)), a);
}

TEST(Audit, ParallelSamplesMatchSerial) {
  AuditRunConfig cfg = neural_config();
  cfg.samples = 12;
  cfg.grid_q = 12;
  cfg.methods = {Method::exhaustive, Method::pga, Method::guided};
  cfg.pga = {0.1, 2, 15};
  AuditReport serial = run_audit(cfg);
  cfg.threads = 8;
  AuditReport parallel = run_audit(cfg);
  zero_timings(serial);
  zero_timings(parallel);
  EXPECT_EQ(serial.records, parallel.records);
}

TEST(Audit, EvalsConserveAndMeansRecompute) {
  AuditRunConfig cfg = neural_config();
  cfg.samples = 10;
  cfg.grid_q = 10;
  const AuditReport report = run_audit(cfg);
  for (const auto& s : report.summaries) {
    std::uint64_t evals = 0;
    std::vector<double> per_sample(cfg.samples, 0.0);
    for (const SampleRecord* r : report.records_for(s.method)) {
      evals += r->estimate.mech_evals;
      per_sample[r->sample] = std::max(per_sample[r->sample], r->estimate.value);
    }
    double mean = 0.0;
    for (double v : per_sample) mean += v;
    mean /= static_cast<double>(cfg.samples);
    EXPECT_EQ(s.mech_evals, evals);
    EXPECT_DOUBLE_EQ(s.mean_regret, mean);
  }
}

TEST(Audit, MechanismCounterMatchesReportedEvaluations) {
  AuditRunConfig cfg = neural_config();
  cfg.samples = 5;
  cfg.grid_q = 8;
  const auto mech = load_mechanism(cfg.mechanism, cfg.setting);
  const AuditReport report = run_audit(cfg, *mech);
  std::uint64_t total = 0;
  for (const auto& s : report.summaries) total += s.mech_evals;
  EXPECT_EQ(mech->evaluations(), total);
}

TEST(Audit, BudgetIsCheckedBeforeAnyWork) {
  AuditRunConfig cfg;
  cfg.setting = {2, 3};
  cfg.methods = {Method::exhaustive};
  cfg.samples = 5;
  const auto mech = load_mechanism("first_price", cfg.setting);
  EXPECT_THROW(run_audit(cfg, *mech), BudgetExceeded);
  EXPECT_EQ(mech->evaluations(), 0u);
}

TEST(Audit, LoadErrorsNameTheStage) {
  try {
    load_mechanism("/nonexistent/spec.json", {2, 2});
    FAIL();
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("mechanism load"), std::string::npos);
  }
  EXPECT_THROW(load_mechanism("neural:x", {2, 2}), InvalidInput);
  const auto path = std::filesystem::temp_directory_path() / "regret_audit_1x1.json";
  write_neural_spec(generate_neural_spec({1, 1}, 2, 0), path);
  EXPECT_THROW(load_mechanism(path.string(), {2, 2}), InvalidInput);
  EXPECT_NO_THROW(load_mechanism(path.string(), {1, 1}));
  std::filesystem::remove(path);

  AuditRunConfig cfg;
  cfg.samples = 1;
  cfg.grid_q = 5;
  cfg.output = "/nonexistent/dir/report.json";
  EXPECT_THROW(run_audit(cfg), IoError);
}

TEST(Audit, InvalidConfigsAreRejected) {
  AuditRunConfig cfg;
  cfg.samples = 0;
  EXPECT_THROW(run_audit(cfg), InvalidInput);
  cfg = {};
  cfg.methods.clear();
  EXPECT_THROW(run_audit(cfg), InvalidInput);
  cfg = {};
  cfg.methods = {Method::pga};
  cfg.pga.gamma = -1.0;
  EXPECT_THROW(run_audit(cfg), InvalidInput);
}

TEST(Sweep, NestedRestartsAreMonotone) {
  AuditRunConfig cfg;
  cfg.mechanism = "neural:42";
  cfg.samples = 10;
  cfg.seed = 3;
  cfg.pga.gamma = 0.1;
  const auto rows = run_sweep(cfg, {1, 4, 10}, {5, 40});
  ASSERT_EQ(rows.size(), 6u);
  for (std::size_t r = 0; r < 2; ++r) {
    EXPECT_LE(rows[r].mean_regret, rows[2 + r].mean_regret);
    EXPECT_LE(rows[2 + r].mean_regret, rows[4 + r].mean_regret);
  }
  EXPECT_EQ(rows[5].gradient_steps, 10u * 40u * 2u * 10u);
}

TEST(Sweep, SecondPriceIsAllZeros) {
  AuditRunConfig cfg;
  cfg.samples = 10;
  for (const auto& row : run_sweep(cfg, {1, 3}, {5, 10})) EXPECT_EQ(row.mean_regret, 0.0);
}

TEST(Sweep, SinglePairEqualsRunAudit) {
  AuditRunConfig cfg;
  cfg.mechanism = "neural:7";
  cfg.samples = 6;
  cfg.methods = {Method::pga};
  cfg.pga = {0.1, 3, 25};
  const auto rows = run_sweep(cfg, {3}, {25});
  const auto& s = run_audit(cfg).summary(Method::pga);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].mean_regret, s.mean_regret);
  EXPECT_EQ(rows[0].mech_evals, s.mech_evals);
  EXPECT_EQ(rows[0].gradient_steps, s.gradient_steps);
}

TEST(Sweep, CsvHasDocumentedColumns) {
  const std::string csv = sweep_to_csv({{1, 50, 0.25, 10, 20, 0.5}});
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "L,R,mean_regret,mech_evals,gradient_steps,wall_seconds");
  EXPECT_NE(csv.find("1,50,0.25,10,20,"), std::string::npos);
}

}  // namespace
}  // namespace regret_audit
