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

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "regret_audit/grid.hpp"
#include "regret_audit/mechanism.hpp"
#include "regret_audit/misreport_optimizer.hpp"
#include "regret_audit/regret_oracle.hpp"
#include "regret_audit/valuation.hpp"

namespace regret_audit {

/// Resolves a mechanism source: "second_price", "first_price",
/// "neural:<seed>[:<hidden>]" (generated in memory, hidden defaults to 16),
/// or a path to a neural spec JSON file. The setting must match.
std::unique_ptr<Mechanism> load_mechanism(const std::string& source,
                                          const AuctionSetting& setting);

inline constexpr std::size_t kDefaultHiddenWidth = 16;
inline constexpr std::size_t kDefaultSamples = 1000;

struct AuditRunConfig {
  AuctionSetting setting{2, 2};
  std::string mechanism = "second_price";
  ValuationDistribution distribution;
  std::size_t grid_q = kDefaultGridQ;
  GridStyle grid_style = GridStyle::inclusive;
  /// Grid for the guided method's item scans; defaults to grid_q.
  std::optional<std::size_t> guided_grid_q;
  std::set<Method> methods{Method::lower_bound, Method::item_wise, Method::guided};
  PgaConfig pga = PgaConfig::regretnet();
  PortfolioConfig portfolio = PortfolioConfig::regretnet();
  std::size_t samples = kDefaultSamples;
  std::uint64_t seed = 0;
  std::uint64_t max_exhaustive_evals = kDefaultExhaustiveBudget;
  ExhaustiveScan exhaustive_scan = ExhaustiveScan::grid_rows;
  /// Not part of the report: results do not depend on it.
  std::size_t threads = 1;
  /// Report destination; empty means do not persist.
  std::filesystem::path output;

  void validate() const;
  GridSpec grid() const { return GridSpec(grid_q, grid_style); }
  GridSpec guided_grid() const { return GridSpec(guided_grid_q.value_or(grid_q), grid_style); }
};

struct SampleRecord {
  std::size_t sample = 0;
  RegretEstimate estimate;

  friend bool operator==(const SampleRecord&, const SampleRecord&) = default;
};

struct MethodSummary {
  Method method = Method::exhaustive;
  std::size_t samples = 0;
  /// Mean over samples of the per-sample maximum over bidders (and items,
  /// for the per-item method).
  double mean_regret = 0.0;
  std::uint64_t mech_evals = 0;
  std::uint64_t gradient_steps = 0;
  std::uint64_t aborted_candidates = 0;
  double wall_seconds = 0.0;

  friend bool operator==(const MethodSummary&, const MethodSummary&) = default;
};

inline constexpr int kReportFormatVersion = 1;

struct AuditReport {
  int format_version = kReportFormatVersion;
  AuditRunConfig config;
  std::vector<MethodSummary> summaries;
  /// Ordered by (sample, bidder, method, item).
  std::vector<SampleRecord> records;

  const MethodSummary& summary(Method method) const;
  /// Records of one method, in order.
  std::vector<const SampleRecord*> records_for(Method method) const;
};

/// Seed handed to the optimizer for (method, sample, bidder).
std::uint64_t optimizer_seed(std::uint64_t run_seed, Method method, std::size_t sample,
                             std::size_t bidder);

/// Every estimate for one profile: bidders in order, methods in enum order.
std::vector<RegretEstimate> audit_profile(const Mechanism& mech, const BidProfile& profile,
                                          const AuditRunConfig& cfg, std::size_t sample);

/// Runs the configured audit on `mech`; writes the report when cfg.output
/// is set.
AuditReport run_audit(const AuditRunConfig& cfg, const Mechanism& mech);
/// Same, loading the mechanism from cfg.mechanism.
AuditReport run_audit(const AuditRunConfig& cfg);

/// Recomputes the summaries' means and totals from the records.
std::vector<MethodSummary> summarize(const AuditRunConfig& cfg,
                                     const std::vector<SampleRecord>& records);

struct SweepRow {
  std::size_t restarts = 0;
  std::size_t steps = 0;
  double mean_regret = 0.0;
  std::uint64_t mech_evals = 0;
  std::uint64_t gradient_steps = 0;
  double wall_seconds = 0.0;
};

/// One pga-only audit per (L, R) pair, all on the same samples and seeds.
/// Rows are ordered L-major.
std::vector<SweepRow> run_sweep(const AuditRunConfig& base, const std::vector<std::size_t>& l_values,
                                const std::vector<std::size_t>& r_values, const Mechanism& mech);
std::vector<SweepRow> run_sweep(const AuditRunConfig& base, const std::vector<std::size_t>& l_values,
                                const std::vector<std::size_t>& r_values);

std::string sweep_to_csv(const std::vector<SweepRow>& rows);
void write_sweep_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path);

/// JSON with format_version. Rejects reports without samples.
std::string report_to_json(const AuditReport& report);
AuditReport report_from_json(const std::string& text);
void write_report(const AuditReport& report, const std::filesystem::path& path);
AuditReport read_report(const std::filesystem::path& path);

/// Report JSON with every "wall_seconds" field removed.
std::string report_to_json_without_timings(const AuditReport& report);

}  // namespace regret_audit
