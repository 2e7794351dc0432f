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

#include "regret_audit/mechanism.hpp"

#include <algorithm>
#include <cmath>

#include "regret_audit/errors.hpp"

namespace regret_audit {

namespace {

bool in_unit_interval(double x) { return x >= 0.0 && x <= 1.0; }

}  // namespace

void AuctionSetting::validate() const {
  if (bidders < 1) throw InvalidInput("auction setting needs at least one bidder");
  if (items < 1) throw InvalidInput("auction setting needs at least one item");
}

std::string to_string(const AuctionSetting& setting) {
  return std::to_string(setting.bidders) + "x" + std::to_string(setting.items);
}

BidProfile::BidProfile(AuctionSetting setting)
    : setting_(setting), values_((setting.validate(), setting.bidders * setting.items), 0.0) {}

BidProfile::BidProfile(AuctionSetting setting, std::vector<double> values)
    : setting_(setting), values_(std::move(values)) {
  setting_.validate();
  if (values_.size() != setting_.bidders * setting_.items) {
    throw InvalidInput("bid profile has " + std::to_string(values_.size()) +
                       " entries, setting " + to_string(setting_) + " needs " +
                       std::to_string(setting_.bidders * setting_.items));
  }
  for (double v : values_) {
    if (!in_unit_interval(v)) {
      throw InvalidInput("bid profile entry " + std::to_string(v) + " outside [0,1]");
    }
  }
}

void BidProfile::set(std::size_t bidder, std::size_t item, double value) {
  if (bidder >= bidders() || item >= items()) throw InvalidInput("bid profile index out of range");
  if (!in_unit_interval(value)) {
    throw InvalidInput("bid profile entry " + std::to_string(value) + " outside [0,1]");
  }
  values_[bidder * setting_.items + item] = value;
}

std::span<const double> BidProfile::row(std::size_t bidder) const {
  if (bidder >= bidders()) throw InvalidInput("bidder index out of range");
  return {values_.data() + bidder * setting_.items, setting_.items};
}

void BidProfile::set_row(std::size_t bidder, std::span<const double> row) {
  if (bidder >= bidders()) throw InvalidInput("bidder index out of range");
  if (row.size() != items()) throw InvalidInput("bid row length does not match item count");
  for (double v : row) {
    if (!in_unit_interval(v)) throw InvalidInput("bid row entry outside [0,1]");
  }
  std::copy(row.begin(), row.end(), values_.begin() + static_cast<std::ptrdiff_t>(bidder * items()));
}

Outcome::Outcome(AuctionSetting setting) { reset(setting); }

void Outcome::reset(AuctionSetting setting) {
  allocation.bidders = setting.bidders;
  allocation.items = setting.items;
  allocation.probs.assign(setting.bidders * setting.items, 0.0);
  payments.pay.assign(setting.bidders, 0.0);
}

void check_outcome(const Outcome& outcome) {
  const auto& g = outcome.allocation;
  if (g.probs.size() != g.bidders * g.items || outcome.payments.pay.size() != g.bidders) {
    throw InvalidInput("outcome dimensions are inconsistent");
  }
  for (double p : g.probs) {
    if (!in_unit_interval(p)) throw InvalidInput("allocation entry outside [0,1]");
  }
  for (std::size_t j = 0; j < g.items; ++j) {
    double total = 0.0;
    for (std::size_t i = 0; i < g.bidders; ++i) total += g(i, j);
    if (total > 1.0 + kFeasibilityTolerance) {
      throw InvalidInput("item " + std::to_string(j) + " allocated with total probability " +
                         std::to_string(total));
    }
  }
  for (double p : outcome.payments.pay) {
    if (!(p >= 0.0)) throw InvalidInput("negative or non-finite payment");
  }
}

Mechanism::Mechanism(AuctionSetting setting) : setting_(setting) { setting_.validate(); }

void Mechanism::check_bids(const BidProfile& bids) const {
  if (bids.setting() != setting_) {
    throw InvalidInput("bid profile is " + to_string(bids.setting()) + ", mechanism expects " +
                       to_string(setting_));
  }
}

Outcome Mechanism::run(const BidProfile& bids) const {
  Outcome out(setting_);
  run(bids, out);
  return out;
}

void Mechanism::run(const BidProfile& bids, Outcome& out) const {
  check_bids(bids);
  if (out.allocation.probs.size() != setting_.bidders * setting_.items ||
      out.payments.pay.size() != setting_.bidders) {
    out.reset(setting_);
  }
  evaluations_.fetch_add(1, std::memory_order_relaxed);
  evaluate(bids, out);
}

double Mechanism::analytic_utility_gradient(std::span<const double> valuation,
                                            const BidProfile& bids, std::size_t bidder,
                                            std::span<double> gradient) const {
  check_bids(bids);
  if (!has_analytic_gradient()) {
    throw InvalidInput("mechanism " + name() + " has no analytic gradient");
  }
  if (bidder >= setting_.bidders) throw InvalidInput("bidder index out of range");
  if (valuation.size() != setting_.items || gradient.size() != setting_.items) {
    throw InvalidInput("valuation/gradient length does not match item count");
  }
  evaluations_.fetch_add(1, std::memory_order_relaxed);
  return evaluate_utility_gradient(valuation, bids, bidder, gradient);
}

double Mechanism::evaluate_utility_gradient(std::span<const double>, const BidProfile&,
                                            std::size_t, std::span<double>) const {
  throw InvalidInput("mechanism " + name() + " has no analytic gradient");
}

double bidder_utility(const Outcome& outcome, std::span<const double> valuation,
                      std::size_t bidder) {
  const auto& g = outcome.allocation;
  double value = 0.0;
  for (std::size_t j = 0; j < g.items; ++j) value += valuation[j] * g(bidder, j);
  return value - outcome.payments.pay[bidder];
}

void check_valuation_row(std::span<const double> valuation, const AuctionSetting& setting) {
  if (valuation.size() != setting.items) {
    throw InvalidInput("valuation row has " + std::to_string(valuation.size()) +
                       " entries, expected " + std::to_string(setting.items));
  }
  for (double v : valuation) {
    if (!in_unit_interval(v)) throw InvalidInput("valuation entry outside [0,1]");
  }
}

namespace {

void check_utility_args(const Mechanism& mech, std::span<const double> valuation,
                        const BidProfile& bids, std::size_t bidder) {
  check_valuation_row(valuation, mech.setting());
  if (bids.setting() != mech.setting()) {
    throw InvalidInput("bid profile is " + to_string(bids.setting()) + ", mechanism expects " +
                       to_string(mech.setting()));
  }
  if (bidder >= mech.setting().bidders) throw InvalidInput("bidder index out of range");
}

}  // namespace

double utility(const Mechanism& mech, std::span<const double> valuation, const BidProfile& bids,
               std::size_t bidder) {
  check_utility_args(mech, valuation, bids, bidder);
  return bidder_utility(mech.run(bids), valuation, bidder);
}

UtilityGradient finite_difference_gradient(const Mechanism& mech,
                                           std::span<const double> valuation,
                                           const BidProfile& bids, std::size_t bidder) {
  check_utility_args(mech, valuation, bids, bidder);
  const std::size_t m = mech.setting().items;
  UtilityGradient result;
  result.gradient.assign(m, 0.0);

  UtilityProbe probe(mech);
  result.utility = probe(valuation, bids, bidder);

  BidProfile work = bids;
  auto row = work.mutable_row(bidder);
  for (std::size_t j = 0; j < m; ++j) {
    const double centre = row[j];
    const double hi = std::min(1.0, centre + kFiniteDifferenceStep);
    const double lo = std::max(0.0, centre - kFiniteDifferenceStep);
    row[j] = hi;
    const double u_hi = probe(valuation, work, bidder);
    row[j] = lo;
    const double u_lo = probe(valuation, work, bidder);
    row[j] = centre;
    result.gradient[j] = (u_hi - u_lo) / (hi - lo);
  }
  result.evaluations = 2 * m + 1;
  return result;
}

UtilityGradient utility_and_gradient(const Mechanism& mech, std::span<const double> valuation,
                                     const BidProfile& bids, std::size_t bidder) {
  if (!mech.has_analytic_gradient()) {
    return finite_difference_gradient(mech, valuation, bids, bidder);
  }
  check_utility_args(mech, valuation, bids, bidder);
  UtilityGradient result;
  result.gradient.assign(mech.setting().items, 0.0);
  result.utility = mech.analytic_utility_gradient(valuation, bids, bidder, result.gradient);
  result.evaluations = 1;
  return result;
}

std::vector<double> utility_gradient(const Mechanism& mech, std::span<const double> valuation,
                                     const BidProfile& bids, std::size_t bidder) {
  return utility_and_gradient(mech, valuation, bids, bidder).gradient;
}

}  // namespace regret_audit
