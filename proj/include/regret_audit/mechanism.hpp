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

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace regret_audit {

/// n bidders, m items. Valuations are additive over items.
struct AuctionSetting {
  std::size_t bidders = 1;
  std::size_t items = 1;

  void validate() const;
  friend bool operator==(const AuctionSetting&, const AuctionSetting&) = default;
};

std::string to_string(const AuctionSetting& setting);  // "2x3"

/// n x m matrix of per-bidder per-item values in [0, 1], row-major.
///
/// Serves both as reported bids and as truthful valuation profiles.
class BidProfile {
 public:
  explicit BidProfile(AuctionSetting setting);
  BidProfile(AuctionSetting setting, std::vector<double> values);

  const AuctionSetting& setting() const { return setting_; }
  std::size_t bidders() const { return setting_.bidders; }
  std::size_t items() const { return setting_.items; }

  double operator()(std::size_t bidder, std::size_t item) const {
    return values_[bidder * setting_.items + item];
  }
  void set(std::size_t bidder, std::size_t item, double value);

  std::span<const double> row(std::size_t bidder) const;
  void set_row(std::size_t bidder, std::span<const double> row);

  /// Unchecked write access used by scans that only write grid values.
  std::span<double> mutable_row(std::size_t bidder) {
    return {values_.data() + bidder * setting_.items, setting_.items};
  }

  std::span<const double> values() const { return values_; }

  friend bool operator==(const BidProfile&, const BidProfile&) = default;

 private:
  AuctionSetting setting_;
  std::vector<double> values_;
};

/// g_ij: probability that bidder i receives item j. Column sums <= 1.
struct AllocationMatrix {
  std::size_t bidders = 0;
  std::size_t items = 0;
  std::vector<double> probs;

  double operator()(std::size_t bidder, std::size_t item) const {
    return probs[bidder * items + item];
  }
  double& operator()(std::size_t bidder, std::size_t item) { return probs[bidder * items + item]; }
};

struct PaymentVector {
  std::vector<double> pay;
};

struct Outcome {
  AllocationMatrix allocation;
  PaymentVector payments;

  explicit Outcome(AuctionSetting setting = {});
  void reset(AuctionSetting setting);
};

inline constexpr double kFeasibilityTolerance = 1e-9;

/// Throws InvalidInput when an entry leaves [0,1], an item is over-allocated
/// beyond tolerance, or a payment is negative.
void check_outcome(const Outcome& outcome);

/// An auction mechanism (g, p) under audit.
///
/// Implementations must be pure: the same profile yields bitwise-identical
/// outcomes. The evaluation counter is the only mutable state; it counts
/// `run` calls and analytic gradient evaluations, one each.
class Mechanism {
 public:
  explicit Mechanism(AuctionSetting setting);
  virtual ~Mechanism() = default;
  Mechanism(const Mechanism&) = delete;
  Mechanism& operator=(const Mechanism&) = delete;

  const AuctionSetting& setting() const { return setting_; }
  virtual std::string name() const = 0;

  /// True when allocation and payment decompose per item.
  virtual bool separable() const { return false; }
  virtual bool has_analytic_gradient() const { return false; }

  Outcome run(const BidProfile& bids) const;
  void run(const BidProfile& bids, Outcome& out) const;

  /// Utility of `bidder` with valuation row `valuation` at `bids`, and its
  /// gradient w.r.t. that bidder's own bid row written to `gradient`.
  /// Only available when has_analytic_gradient(); counts as one evaluation.
  double analytic_utility_gradient(std::span<const double> valuation, const BidProfile& bids,
                                   std::size_t bidder, std::span<double> gradient) const;

  std::uint64_t evaluations() const { return evaluations_.load(std::memory_order_relaxed); }
  void reset_evaluations() { evaluations_.store(0, std::memory_order_relaxed); }

 protected:
  virtual void evaluate(const BidProfile& bids, Outcome& out) const = 0;
  virtual double evaluate_utility_gradient(std::span<const double> valuation,
                                           const BidProfile& bids, std::size_t bidder,
                                           std::span<double> gradient) const;

 private:
  void check_bids(const BidProfile& bids) const;

  AuctionSetting setting_;
  mutable std::atomic<std::uint64_t> evaluations_{0};
};

/// sum_j valuation[j] * g_{bidder,j} - p_bidder. The one place utility is
/// computed from an outcome, so every estimator agrees bitwise.
double bidder_utility(const Outcome& outcome, std::span<const double> valuation,
                      std::size_t bidder);

/// u_i(v_i, b) with additive valuations. May be negative.
double utility(const Mechanism& mech, std::span<const double> valuation, const BidProfile& bids,
               std::size_t bidder);

/// Reusable evaluation buffer for hot loops: one mechanism run per call,
/// no allocation after construction.
class UtilityProbe {
 public:
  explicit UtilityProbe(const Mechanism& mech) : mech_(&mech), outcome_(mech.setting()) {}

  double operator()(std::span<const double> valuation, const BidProfile& bids,
                    std::size_t bidder) {
    mech_->run(bids, outcome_);
    return bidder_utility(outcome_, valuation, bidder);
  }

 private:
  const Mechanism* mech_;
  Outcome outcome_;
};

inline constexpr double kFiniteDifferenceStep = 1e-5;

struct UtilityGradient {
  double utility = 0.0;
  std::vector<double> gradient;
  /// Mechanism evaluations spent: 1 when analytic, 2m+1 by finite differences.
  std::uint64_t evaluations = 0;
};

/// Utility and its gradient w.r.t. bids[bidder, .]. Uses the analytic
/// gradient when the mechanism has one, otherwise central differences with
/// step kFiniteDifferenceStep, probes clamped to [0,1] (one-sided at the
/// boundary).
UtilityGradient utility_and_gradient(const Mechanism& mech, std::span<const double> valuation,
                                     const BidProfile& bids, std::size_t bidder);

std::vector<double> utility_gradient(const Mechanism& mech, std::span<const double> valuation,
                                     const BidProfile& bids, std::size_t bidder);

/// Finite-difference gradient regardless of analytic capability.
UtilityGradient finite_difference_gradient(const Mechanism& mech,
                                           std::span<const double> valuation,
                                           const BidProfile& bids, std::size_t bidder);

void check_valuation_row(std::span<const double> valuation, const AuctionSetting& setting);

}  // namespace regret_audit
