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

#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "regret_audit/audit.hpp"
#include "regret_audit/errors.hpp"

namespace regret_audit {
namespace {

AuditReport small_report() {
  AuditRunConfig cfg;
  cfg.mechanism = "neural:42";
  cfg.grid_q = 10;
  cfg.samples = 3;
  cfg.methods = {Method::lower_bound, Method::exhaustive, Method::pga, Method::guided};
  cfg.pga = {0.1, 2, 10};
  cfg.portfolio = {1, 0.2, 0.3, {0.05, 1, 10}};
  cfg.distribution.kind = DistributionKind::truncated_normal_context;
  cfg.distribution.x_contexts = std::vector<int>{1, 7};
  cfg.guided_grid_q = 12;
  return run_audit(cfg);
}

TEST(ReportIo, RoundTripIsLossless) {
  const AuditReport report = small_report();
  const auto path = std::filesystem::temp_directory_path() / "regret_audit_roundtrip.json";
  write_report(report, path);
  const AuditReport back = read_report(path);
  std::filesystem::remove(path);
  EXPECT_EQ(back.records, report.records);
  EXPECT_EQ(back.summaries, report.summaries);
  EXPECT_EQ(report_to_json(back), report_to_json(report));
  EXPECT_EQ(back.config.distribution, report.config.distribution);
  EXPECT_EQ(back.config.portfolio, report.config.portfolio);
  EXPECT_EQ(back.config.guided_grid_q, report.config.guided_grid_q);
}

TEST(ReportIo, UnknownVersionIsRejected) {
  auto j = nlohmann::json::parse(report_to_json(small_report()));
  j["format_version"] = 2;
  EXPECT_THROW(report_from_json(j.dump()), FormatError);
  j.erase("format_version");
  EXPECT_THROW(report_from_json(j.dump()), FormatError);
  EXPECT_THROW(report_from_json("[1, 2"), FormatError);
}

TEST(ReportIo, ZeroSampleReportRejectedAtWrite) {
  AuditReport empty;
  empty.config.samples = 0;
  EXPECT_THROW(report_to_json(empty), InvalidInput);
  EXPECT_THROW(write_report(empty, std::filesystem::temp_directory_path() / "never.json"),
               InvalidInput);
}

TEST(ReportIo, IoErrorsNameTheStage) {
  try {
    read_report("/nonexistent/dir/report.json");
    FAIL();
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("report read"), std::string::npos);
  }
  EXPECT_THROW(write_report(small_report(), "/nonexistent/dir/report.json"), IoError);
}

TEST(ReportIo, TimingStripRemovesEveryWallClockField) {
  const std::string text = report_to_json_without_timings(small_report());
  EXPECT_EQ(text.find("wall_seconds"), std::string::npos);
  EXPECT_NE(text.find("mech_evals"), std::string::npos);
}

}  // namespace
}  // namespace regret_audit
