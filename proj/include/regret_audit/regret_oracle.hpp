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
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "regret_audit/grid.hpp"
#include "regret_audit/mechanism.hpp"

namespace regret_audit {

enum class Method { exhaustive, item, lower_bound, item_wise, pga, guided };

std::string to_string(Method method);
Method method_from_string(const std::string& text);

/// One regret estimate for one bidder on one truthful profile.
struct RegretEstimate {
  Method method = Method::exhaustive;
  std::size_t bidder = 0;
  /// Set only for Method::item.
  std::optional<std::size_t> item;
  double value = 0.0;
  /// The deviation achieving `value`. Absent for item_wise, whose value is
  /// a sum over separate deviations.
  std::optional<std::vector<double>> best_misreport;
  std::uint64_t mech_evals = 0;
  std::uint64_t gradient_steps = 0;
  /// Optimizer candidates stopped early on a non-finite gradient or utility.
  std::uint64_t aborted_candidates = 0;
  double wall_seconds = 0.0;

  friend bool operator==(const RegretEstimate&, const RegretEstimate&) = default;
};

inline constexpr std::uint64_t kDefaultExhaustiveBudget = 100'000'000;

enum class ExhaustiveScan {
  /// grid^m rows, plus the truthful row when it is off the grid.
  grid_rows,
  /// Product over coordinates of (grid points + that coordinate's truthful
  /// value when off-grid). Contains every single-item deviation, so the
  /// per-item estimators can never exceed it.
  truthful_coordinates,
};

std::string to_string(ExhaustiveScan scan);
ExhaustiveScan exhaustive_scan_from_string(const std::string& text);

struct OracleOptions {
  std::uint64_t max_evaluations = kDefaultExhaustiveBudget;
  ExhaustiveScan scan = ExhaustiveScan::grid_rows;
  /// Workers for partitioning the exhaustive scan (0 = auto).
  std::size_t threads = 1;
};

/// size^exponent, saturating at UINT64_MAX.
std::uint64_t saturating_pow(std::uint64_t base, std::size_t exponent);

/// Scans the joint grid of misreport rows for `bidder`, others truthful.
///
/// The truthful row is always part of the scan, so the value is >= 0
/// exactly. Ties in utility go to the lexicographically smallest misreport, except
/// that the truthful row is reported whenever no misreport strictly beats it.
/// With ExhaustiveScan::grid_rows this costs grid.size()^m evaluations (+1
/// when the truthful row is off the grid) plus one for the truthful utility.
/// Throws BudgetExceeded when the product size exceeds
/// options.max_evaluations.
RegretEstimate exhaustive_regret(const Mechanism& mech, const BidProfile& profile,
                                 std::size_t bidder, const GridSpec& grid,
                                 const OracleOptions& options = {});

/// Result of scanning every item coordinate separately.
struct ItemScan {
  double truthful_utility = 0.0;
  /// Per item: best utility found, its grid argmax, and the gain over truthful.
  std::vector<double> best_utility;
  std::vector<double> argmax;
  std::vector<double> gain;
  std::uint64_t evaluations = 0;
};

/// One-coordinate scans for every item with a single shared truthful
/// evaluation: m * (grid points + appended truthful value when off-grid) + 1.
ItemScan scan_items(const Mechanism& mech, const BidProfile& profile, std::size_t bidder,
                    const GridSpec& grid);

/// Regret restricted to deviating on `item` alone.
RegretEstimate item_regret(const Mechanism& mech, const BidProfile& profile, std::size_t bidder,
                           std::size_t item, const GridSpec& grid);

/// max_j of the per-item regrets; provably <= the joint regret.
RegretEstimate lower_bound_regret(const Mechanism& mech, const BidProfile& profile,
                                  std::size_t bidder, const GridSpec& grid);

/// sum_j of the per-item regrets; at most m times the joint regret.
RegretEstimate item_wise_regret(const Mechanism& mech, const BidProfile& profile,
                                std::size_t bidder, const GridSpec& grid);

bool is_grid_method(Method method);

/// Runs every requested grid method (exhaustive, item, lower_bound,
/// item_wise) for every bidder. Order: bidder, then method, then item.
std::vector<RegretEstimate> audit_all_bidders(const Mechanism& mech, const BidProfile& profile,
                                              const GridSpec& grid,
                                              const std::set<Method>& methods,
                                              const OracleOptions& options = {});

/// u_a beats u_b, ties broken toward the lexicographically smaller row.
bool better_misreport(double utility_a, std::span<const double> row_a, double utility_b,
                      std::span<const double> row_b);

}  // namespace regret_audit
