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

// Drives the regret-audit binary end to end and checks exit codes and outputs.

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "regret_audit/audit.hpp"
#include "regret_audit/neural_mechanism.hpp"

namespace regret_audit {
namespace {

namespace fs = std::filesystem;

int run_cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + REGRET_AUDIT_CLI + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("regret_audit_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

TEST_F(Cli, EvalWritesReadableReport) {
  const fs::path out = dir_ / "report.json";
  ASSERT_EQ(run_cli("eval --mechanism neural:42 --bidders 2 --items 2 --grid-q 20 "
                    "--methods lower_bound,item_wise,guided,exhaustive --R 30 --samples 4 --seed 3 "
                    "--out " + out.string()),
            0);
  const AuditReport report = read_report(out);
  EXPECT_EQ(report.config.samples, 4u);
  EXPECT_EQ(report.records.size(), 4u * 2u * 4u);
  EXPECT_EQ(report.config.portfolio.refine.steps, 30u);
}

TEST_F(Cli, PresetsAndOverridesAreEchoed) {
  const fs::path out = dir_ / "report.json";
  ASSERT_EQ(run_cli("eval --mechanism first_price --bidders 2 --items 1 --grid-q 10 --methods pga "
                    "--pga-preset citransnet --L 2 --samples 1 --out " + out.string()),
            0);
  const AuditReport report = read_report(out);
  EXPECT_EQ(report.config.pga.gamma, 0.001);
  EXPECT_EQ(report.config.pga.restarts, 2u);
  EXPECT_EQ(report.config.pga.steps, 200u);
}

TEST_F(Cli, SweepWritesCsv) {
  const fs::path out = dir_ / "sweep.csv";
  ASSERT_EQ(run_cli("sweep --l-values 1,2 --r-values 5,10 --samples 2 --out " + out.string()), 0);
  const std::string csv = slurp(out);
  EXPECT_EQ(csv.rfind("L,R,mean_regret,mech_evals,gradient_steps,wall_seconds\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
}

TEST_F(Cli, GenMechMatchesLibrary) {
  const fs::path out = dir_ / "spec.json";
  ASSERT_EQ(run_cli("gen-mech --bidders 2 --items 3 --hidden 5 --seed 9 --out " + out.string()), 0);
  EXPECT_EQ(read_neural_spec(out), generate_neural_spec({2, 3}, 5, 9));
  ASSERT_EQ(run_cli("eval --mechanism " + out.string() +
                    " --bidders 2 --items 3 --grid-q 5 --methods item_wise --samples 2"),
            0);
  EXPECT_EQ(run_cli("eval --mechanism " + out.string() +
                    " --bidders 2 --items 2 --grid-q 5 --methods item_wise --samples 2"),
            2);
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run_cli("eval --methods oracle --samples 1"), 2);
  EXPECT_EQ(run_cli("eval --bogus-flag"), 2);
  EXPECT_EQ(run_cli("eval --samples 0 --grid-q 5"), 2);
  EXPECT_EQ(run_cli("eval --items 3 --methods exhaustive --samples 1"), 3);
  EXPECT_EQ(run_cli("eval --mechanism " + (dir_ / "missing.json").string() + " --samples 1"), 4);
  EXPECT_EQ(run_cli("eval --grid-q 5 --samples 1 --methods item_wise --out /nonexistent/x.json"), 4);
  EXPECT_EQ(run_cli("eval --grid-q 5 --samples 1 --methods item_wise"), 0);
}

TEST_F(Cli, ThreadCountDoesNotChangeResults) {
  const fs::path a = dir_ / "a.json";
  const fs::path b = dir_ / "b.json";
  const std::string args =
      "eval --mechanism neural:1 --grid-q 10 --methods guided,pga --L 2 --R 10 --samples 6 --out ";
  ASSERT_EQ(run_cli(args + a.string(), "REGRET_AUDIT_THREADS=1 "), 0);
  ASSERT_EQ(run_cli(args + b.string(), "REGRET_AUDIT_THREADS=4 "), 0);
  EXPECT_EQ(report_to_json_without_timings(read_report(a)),
            report_to_json_without_timings(read_report(b)));
  EXPECT_EQ(run_cli(args + a.string(), "REGRET_AUDIT_THREADS=many "), 2);
}

}  // namespace
}  // namespace regret_audit
