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
#include <string>
#include <vector>

#include "regret_audit/grid.hpp"
#include "regret_audit/mechanism.hpp"
#include "regret_audit/regret_oracle.hpp"

namespace regret_audit {

/// Projected gradient ascent hyperparameters: step size, random restarts,
/// ascent steps per restart.
struct PgaConfig {
  double gamma = 0.1;
  std::size_t restarts = 1;
  std::size_t steps = 1;

  void validate() const;

  static PgaConfig regretnet() { return {0.1, 1000, 2000}; }
  static PgaConfig algnet() { return {0.001, 300, 300}; }
  static PgaConfig regretformer() { return {0.1, 1, 1000}; }
  static PgaConfig citransnet() { return {0.001, 100, 200}; }
  /// Throws InvalidInput for unknown names.
  static PgaConfig preset(const std::string& name);

  friend bool operator==(const PgaConfig&, const PgaConfig&) = default;
};

/// Shape of the guided-refinement initialization portfolio.
///
/// The portfolio holds 1 + m + 3k candidates; `refine.restarts` is ignored.
struct PortfolioConfig {
  std::size_t k = 0;
  double sigma_opt = 0.0;
  double sigma_truth = 0.0;
  PgaConfig refine{0.1, 1, 200};

  void validate() const;
  std::size_t size(std::size_t items) const { return 1 + items + 3 * k; }

  /// k = 0 (deterministic priors only).
  static PortfolioConfig regretnet() { return {0, 0.0, 0.0, {0.1, 1, 2000}}; }
  static PortfolioConfig algnet() { return {0, 0.0, 0.0, {0.001, 1, 300}}; }
  /// k = 80, sigma = 0.6 for heavily non-IC landscapes.
  static PortfolioConfig regretformer() { return {80, 0.6, 0.6, {0.1, 1, 1000}}; }
  static PortfolioConfig preset(const std::string& name);

  friend bool operator==(const PortfolioConfig&, const PortfolioConfig&) = default;
};

enum class CandidateKind { combinatorial, single_item, perturbed_comb, perturbed_truth, global_random };

std::string to_string(CandidateKind kind);

struct Candidate {
  CandidateKind kind;
  /// Item index for single_item candidates, group-local index otherwise.
  std::size_t index = 0;
  std::vector<double> bid;
};

struct Portfolio {
  std::vector<Candidate> candidates;

  std::size_t count(CandidateKind kind) const;
};

struct PgaResult {
  std::vector<double> best_bid;
  double best_utility = 0.0;
  std::uint64_t evaluations = 0;
  std::uint64_t steps = 0;
  bool aborted = false;
};

/// `steps` projected ascent steps on the bidder's own row from `start`
/// (others truthful), clamping each iterate to [0,1]^m.
///
/// Returns the best utility over every visited iterate including the start,
/// so the result never falls below utility(start). Ties keep the earlier
/// iterate. A non-finite gradient or utility stops the trajectory and sets
/// `aborted`; the best iterate seen so far is still returned.
PgaResult pga_single(const Mechanism& mech, const BidProfile& profile, std::size_t bidder,
                     std::span<const double> start, double gamma, std::size_t steps);

/// Standard multi-start evaluator: `cfg.restarts` starts drawn uniformly on
/// [0,1]^m, start l from Stream(seed).child(l). Restart l's start does not
/// depend on cfg.restarts, so a larger restart count strictly extends the
/// search.
RegretEstimate random_restart_pga(const Mechanism& mech, const BidProfile& profile,
                                  std::size_t bidder, const PgaConfig& cfg, std::uint64_t seed);

/// Builds the 1 + m + 3k candidate set from per-item grid argmaxes.
///
/// Group g, member r draws from Stream(seed).child(g).child(r). Gaussian
/// perturbations are clamped to [0,1] after drawing.
Portfolio build_portfolio(const BidProfile& profile, std::size_t bidder,
                          std::span<const double> item_argmaxes, const PortfolioConfig& cfg,
                          std::uint64_t seed);

/// Item-wise guided gradient refinement: per-item grid scans, portfolio
/// construction, then projected ascent from every candidate.
///
/// The value is never below lower_bound_regret on the same grid: the
/// single-item candidates start exactly at the per-item optima.
RegretEstimate guided_refinement(const Mechanism& mech, const BidProfile& profile,
                                 std::size_t bidder, const GridSpec& grid,
                                 const PortfolioConfig& cfg, std::uint64_t seed);

}  // namespace regret_audit
